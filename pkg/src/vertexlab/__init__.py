"""vertexlab: an exact-plus-numeric laboratory for integrable stochastic
vertex models, spin Hall-Littlewood / spin q-Whittaker symmetric functions,
lattice random fields built from local Markov moves, and their determinantal
observables.

Everything algebraic is verified two ways: exact rational arithmetic where the
identities are rational, 50+-digit floats wherever an infinite product enters.
"""

from .partitions import Partition, EMPTY
from .qkernel import QParams
from .weights import Spec, shl, sqw, sg, fused

__all__ = ["Partition", "EMPTY", "QParams", "Spec", "shl", "sqw", "sg", "fused"]
__version__ = "0.1.0"

"""Twenty-vertex model with domain-wall boundaries: exact counts, identities and arctic curves."""

from . import arctic, enumerate, exact6v, identities, lattice, weights
from .enumerate import CountResult, ExactSampler, count_brute, count_transfer
from .errors import TwentyVError
from .exact6v import counts_from_6v, refined_from_6v
from .lattice import PathConfig, build_domain
from .polys import RefinedPoly
from .weights import TwentyVWeights, WeightParams, twenty_v_weights

__version__ = "0.1.0"

__all__ = [
    "arctic", "enumerate", "exact6v", "identities", "lattice", "weights",
    "CountResult", "ExactSampler", "count_brute", "count_transfer", "TwentyVError",
    "counts_from_6v", "refined_from_6v", "PathConfig", "build_domain", "RefinedPoly",
    "TwentyVWeights", "WeightParams", "twenty_v_weights",
]

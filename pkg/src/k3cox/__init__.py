"""Cox rings of Mori dream K3 surfaces of Picard number three."""

from .cones import RationalCone, cone_from_facets, cone_from_generators, dual_cone, hilbert_basis
from .coxgen import DegreeVerdict, GeneratorResult, candidate_degrees, generators
from .database import LatticeRecord, database, get_record, load_lattice
from .lattice import Lattice, diagonalize, is_isometry
from .linsys import K3Surface, PreconditionError
from .minimal import MinimalityEvidence, is_minimal_degree, nonneg_solutions
from .negcurves import find_neg_curves, match_curve_sets

__version__ = "0.1.0"

__all__ = [
    "DegreeVerdict", "GeneratorResult", "K3Surface", "Lattice", "LatticeRecord", "MinimalityEvidence",
    "PreconditionError", "RationalCone", "candidate_degrees", "cone_from_facets", "cone_from_generators",
    "database", "diagonalize", "dual_cone", "find_neg_curves", "generators", "get_record", "hilbert_basis",
    "is_isometry", "is_minimal_degree", "load_lattice", "match_curve_sets", "nonneg_solutions",
    "__version__",
]

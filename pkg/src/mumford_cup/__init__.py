"""p-adic residues, Coleman primitives and the cup product on Mumford curves.

The residue side (a sum over poles in a fundamental domain) and the period
side (a sum over generators) are computed independently, so their agreement
is a numerical check of the formula relating them.
"""

from .coleman import ColemanPrimitive, coleman_primitive, vector_double_index
from .cup import AssumptionError, CupProblem, CupReport, cup_lhs, cup_rhs, proof_chain, reciprocity_check, verify
from .forms import GammaModule, VValuedForm, poincare_average
from .geometry import Disc, Moebius, OrientedAnnulus
from .laurent import LaurentWindow, LogLaurent, double_index
from .padic import IWASAWA, LogBranch, PAdic, PrecisionError, plog
from .rational import RationalFunction
from .scene import Scene, SceneError, load, loads
from .schottky import FundamentalDomain, SchottkyData, validate

__version__ = "0.1.0"

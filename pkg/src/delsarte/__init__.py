"""Exact linear programming bounds for binary codes from pairs of functions on the cube."""

from .certificates import (
    BoundReport,
    Certificate,
    PairWitness,
    Verdict,
    corollary_bound,
    delsarte_bound,
    dh_construct,
    support_bound,
    verify_feasible,
    verify_witness,
)
from .constructions import example1, example2, example3, witness_bounds
from .fourier import (
    SymmetricProfile,
    convolve,
    fourier,
    inverse_fourier,
    point_profile,
    fourier_profile,
)
from .krawtchouk import kraw_eval_int, kraw_roots, krawtchouk_table
from .lp import build_lp, extract_certificate, simplex_solve
from .oracle import exact_A, validate_bound
from .scalar import jpl1_rate, packing_rate

__version__ = "0.1.0"

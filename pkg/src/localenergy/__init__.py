"""Equilibrium measures on P^1 over R and Q_p, discrepancies, and height bounds."""

__version__ = "0.1.0"

from .padic import PadicNumber, NewtonPolygon, PrecisionError, ord_p, padic_abs, newton_polygon
from .polynomial import IntPolynomial, NotSquarefreeError
from .metric import (
    FieldContext, ProjectivePoint, PointSet, MobiusMap, delta, neg_log_delta,
    apply_mobius, discrepancy, discrepancy_exact, discrete_potential, mc_energy_estimate,
)
from .equilibrium import (
    RealEquilibrium, PadicEquilibrium, minimal_energy_real, minimal_energy_padic,
    density_real, real_mass, potential_real, ball_mass_padic, make_rng,
)
from .heights import (
    complex_roots, sturm_real_roots, weil_height, discriminant, local_discrepancy_arch,
    local_discrepancy_padic, verify_product_formula, search_L_S, LocalDiscrepancyReport,
)
from .bounds import (
    PlaceSpec, BoundReport, general_bound, bombieri_zannier_bound, schinzel_bound,
    totp_upper_bound, integer_bound,
)
from .kernels import BACKEND

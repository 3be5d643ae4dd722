"""Least-squares projection onto second-order L-spline spaces.

Exponential (tension), trigonometric, and linear spline families on arbitrary
partitions; analytic Gram matrices; the projector's integral kernel and exact
sup-norm (Lebesgue constant); closed-form norm bounds; and adversarial mesh
search including the pi-limit interference study.
"""

from .basis import (LBSplineBasis, SplineVector, build_basis, eval_basis,
                    eval_spline, make_spline, spline_sup)
from .bounds import (BoundReport, check_bound, exp_sym_sup_constant,
                     knot_value_bound_constant, linear_sup_constant,
                     trig_projector_bound, trig_projector_bound_asymptotic,
                     trig_projector_bound_branches)
from .errors import (DegenerateInterval, EpsilonOutOfRange, InvalidRatio,
                     LSplineError, NonMonotoneKnots, NotPositiveDefinite,
                     OutOfDomain, QuadratureNonConvergence, TauOutOfRange,
                     TrigSingularInterval)
from .gram import (GramSystem, assemble, gram_for, inner_product,
                   inverse_column, quad_inner_product, solve)
from .lebesgue import (NormReport, extremal_witness, kernel_K,
                       lebesgue_function, lebesgue_function_grid,
                       projector_norm, witness_catalog)
from .operators import (ExpGeneral, ExpSym, Linear, Ramp, Trig,
                        family_from_json, ramp, ramp_sup)
from .partition import Partition, geometric, make_partition, model_example, uniform
from .projector import (TargetFunction, best_l2_check, catalog, moments,
                        project, residual_orthogonality)
from .search import (PiLimitRow, SearchResult, maximize_norm, pi_limit_study,
                     random_campaign, random_partition)

__version__ = "0.1.0"

"""Exact computation of Donaldson-Thomas style invariants of quiver
representation categories: stacky finite-field counts, slope stability and
Harder-Narasimhan recursion, DT and BPS tables, wall-crossing, framed/pair
invariants, and a brute-force oracle validating all of it."""

__version__ = "0.1.0"

from .exactalg import (GradedSeries, Poly, PoleOrderError, RationalFunc,
                       binomial_series, eval_at_q, polar_limit,
                       polar_limit_unsigned, series_exp, series_log,
                       series_mul)
from .quiver import (Arrow, DimVector, Quiver, Stability, Superpotential,
                     VertexMismatchError, ZeroClassError, a2_quiver,
                     classes_in_box, conifold_quiver, cyclic_derivative,
                     decreasing_slope_compositions, equal_slope_compositions,
                     euler_form_antisym, euler_form_nonsym, is_generic,
                     kronecker_quiver, one_loop_quiver, point_quiver,
                     potential_trace_eval, slope, subclasses,
                     vector_compositions)
from .hall import (DTTable, HallElement, SuperpotentialNotSupportedError,
                   dtbar, dtbar_table, epsilon_element, epsilon_hat,
                   gl_order_poly, hn_semistable_count, j_unsigned,
                   normalized_semistable, semistable_element,
                   stacky_count_all)
from .wallcross import (OrientedTree, enumerate_ordered_trees,
                        linear_extensions, s_coeff, transform_dt,
                        transform_table, u_coeff, v_coeff)
from .invariants import (BPSTable, DegeneratePairingError, DemoReport,
                         IntegralityReport, PairTable, bps_from_dtbar, demo,
                         demo_conifold, demo_grassmannian,
                         demo_hilbert_points, dtbar_from_bps,
                         dtbar_from_pair, integrality_report, moebius,
                         pair_from_dtbar)
from .oracle import (GF, CapExceededError, FqRep, FramedFqRep,
                     InterpolationError, framed_stable_count_oracle,
                     gaussian_binomial, gl_order, hall_twist_oracle,
                     ndt_direct, semistable_count_oracle,
                     stacky_count_oracle)
from .quiverfile import QuiverFileError, format_rational, load_quiver_file

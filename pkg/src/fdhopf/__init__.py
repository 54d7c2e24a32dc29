"""Exact computations with finite-dimensional Hopf algebras over Q(zeta_N)."""

from .cyclotomic import CycNumber, CyclotomicField, coerce, field, locate_exact_root, parse_scalar, roots_of_unity
from .linalg import (
    FieldMatrix,
    ProjectionFamily,
    SparseTensor3,
    finite_order_eigenprojections,
    joint_refine,
    kernel_basis,
    operator_order,
    solve_linear,
)
from .hopf import (
    FinHopfAlgebra,
    HopfElement,
    HopfFunctional,
    dual,
    harpoon_left,
    harpoon_right,
    op_cop,
    solve_antipode,
    verify_axioms,
)
from .constructions import drinfeld_double, group_algebra, taft, taft_projection
from .structure import IntegralPack, compute_integrals, group_likes, is_semisimple, trace_formula, verify_radford_s4
from .spectral import (
    GradingContext,
    GradingTable,
    compute_grading,
    compute_index,
    normal_form,
    verify_biproduct,
    verify_lemma_identities,
    verify_pq_theorems,
)
from .report import CheckResult, VerificationReport

__version__ = "0.1.0"

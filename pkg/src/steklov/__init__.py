"""Steklov spectra, Cheeger-type constants and capacities on weighted graphs."""
from .errors import (
    BudgetExceeded,
    ConvergenceError,
    DomainError,
    MonotonicityError,
    NotSPDError,
    SteklovError,
)
from .graph import Domain, WeightedGraph, Window, build_domain, make_window, relative_edge_boundary
from .harmonic import capacity, dirichlet_energy, green_residual, harmonic_extension, normal_derivative
from .dtn import (
    apply_dtn,
    assemble_dtn,
    blowup_convergence,
    blowup_spectrum,
    dirichlet_laplacian_spectrum,
    dtn_spectrum,
)
from .cheeger import (
    cheeger_enumerate,
    cheeger_parametric_cut,
    coarea_check,
    first_dirichlet_eigenvalue,
    gamma_k,
    higher_order_constants,
    verify_inequalities,
)
from .exhaustion import (
    ExhaustionSequence,
    HalfLine,
    RegularTree,
    WeightedBinaryTree,
    exhaust_cheeger,
    exhaust_higher,
    exhaust_spectrum,
    graph_eigen_limit,
    recurrence_test,
)

__version__ = "0.1.0"

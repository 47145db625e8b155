"""Service modules: model kernel calculus, oracles and the projective lab."""

from .model_kernels import (
    BaseKind,
    ModelKind,
    KernelBase,
    PolyKernel,
    JetKernel,
    LogBergmanKernel,
    build_model_kernel,
    kernel_adjoint,
    kernel_eval,
    parse_kernel_expression,
)
from .calculus import KernelCalculus
from .composition import (
    compose_k,
    compose_k_ep,
    compose_k_er,
    compose_k_re,
    compose_sub_res,
    compose_jets,
    compose_chain,
)
from .quadrature_oracle import QuadratureOracle, quadrature_oracle_compose
from .profiles import build_second_order_profile
from .fock_oracle import FockBasis, JetFockBasis, OperatorMatrix, fock_basis, kernel_to_matrix, sym_pairing
from .projective_space import HomogSpace, gram_matrix
from .submanifolds import SubmanifoldSpec, YKind, JetSpace
from .extension import (
    ExtensionProblem,
    restriction_jets,
    minimal_norm_extension,
    multiplicative_defect,
    jet_map_and_isometry,
    bergman_and_logbk_eval,
    peak_section,
)
from .analysis import (
    ProfileKind,
    ProfileSample,
    ProfileStatistics,
    model_self_test,
    normal_extension_profile,
    profile_compare,
)
from .fitting import FitResult, trend_fit, decay_fit
from .verification import IdentityCheck, run_identity_suite
from .experiments import EXPERIMENTS, ExperimentParams, ExperimentReport, run_experiment

__all__ = [
    "BaseKind",
    "ModelKind",
    "KernelBase",
    "PolyKernel",
    "JetKernel",
    "LogBergmanKernel",
    "build_model_kernel",
    "kernel_adjoint",
    "kernel_eval",
    "parse_kernel_expression",
    "KernelCalculus",
    "compose_k",
    "compose_k_ep",
    "compose_k_er",
    "compose_k_re",
    "compose_sub_res",
    "compose_jets",
    "compose_chain",
    "QuadratureOracle",
    "quadrature_oracle_compose",
    "build_second_order_profile",
    "FockBasis",
    "JetFockBasis",
    "OperatorMatrix",
    "fock_basis",
    "kernel_to_matrix",
    "sym_pairing",
    "HomogSpace",
    "gram_matrix",
    "SubmanifoldSpec",
    "YKind",
    "JetSpace",
    "ExtensionProblem",
    "restriction_jets",
    "minimal_norm_extension",
    "multiplicative_defect",
    "jet_map_and_isometry",
    "bergman_and_logbk_eval",
    "peak_section",
    "ProfileKind",
    "ProfileSample",
    "ProfileStatistics",
    "profile_compare",
    "normal_extension_profile",
    "model_self_test",
    "FitResult",
    "trend_fit",
    "decay_fit",
    "IdentityCheck",
    "run_identity_suite",
    "EXPERIMENTS",
    "ExperimentParams",
    "ExperimentReport",
    "run_experiment",
]

"""Bargmann model kernel calculus and a projective-space lab for optimal jet extension."""

__version__ = "1.0.0"

from .core.config import get_config, LabConfig
from .services import (
    KernelCalculus,
    compose_jets,
    build_model_kernel,
    HomogSpace,
    SubmanifoldSpec,
    ExtensionProblem,
    run_identity_suite,
    run_experiment,
)
from .routers import CompositionRouter

__all__ = [
    "get_config",
    "LabConfig",
    "KernelCalculus",
    "compose_jets",
    "build_model_kernel",
    "HomogSpace",
    "SubmanifoldSpec",
    "ExtensionProblem",
    "run_identity_suite",
    "run_experiment",
    "CompositionRouter",
]

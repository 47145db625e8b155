from __future__ import annotations

import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()


@dataclass
class LabConfig:
    seed: int = int(os.getenv("BJ_SEED", "12345"))
    workers: int = int(os.getenv("BJ_WORKERS", "1"))
    log_level: str = os.getenv("BJ_LOG_LEVEL", "INFO")
    output_dir: str = os.getenv("BJ_OUTPUT_DIR", "reports")

    gh_order: int = int(os.getenv("BJ_GH_ORDER", "40"))
    fock_cutoff: int = int(os.getenv("BJ_FOCK_CUTOFF", "6"))
    oracle_tol: float = float(os.getenv("BJ_ORACLE_TOL", "1e-8"))

    pinv_rtol: float = float(os.getenv("BJ_PINV_RTOL", "1e-12"))
    jet_tol: float = float(os.getenv("BJ_JET_TOL", "1e-10"))
    grid_eps: float = float(os.getenv("BJ_GRID_EPS", "0.85"))
    grid_points: int = int(os.getenv("BJ_GRID_POINTS", "9"))
    profile_radius: float = float(os.getenv("BJ_PROFILE_RADIUS", "2.0"))


def get_config() -> LabConfig:
    return LabConfig()

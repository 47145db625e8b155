"""Command-line front-end: verify-model, compose and experiment."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Literal, Optional, Sequence

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .. import __version__
from ..core.config import LabConfig, get_config
from ..core.errors import BergmanJetsError, ParseError
from ..routers.experiment_router import ExperimentRouter
from ..services.composition import compose_chain
from ..services.experiments import EXPERIMENTS, ExperimentParams
from ..services.model_kernels import parse_kernel_expression
from ..services.verification import run_identity_suite
from ..utils.reports import parse_p_range, to_json_text, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class RunConfig(BaseModel):
    """Validated parameters of one command; echoed verbatim into its report."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["verify-model", "compose", "experiment"]
    experiment: Optional[str] = None
    expression: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=1, le=3)
    m: Optional[int] = Field(default=None, ge=0)
    k: Optional[int] = Field(default=None, ge=0)
    p: Optional[str] = None
    p_values: List[int] = Field(default_factory=list)
    y_kind: Optional[Literal["point", "linear", "conic"]] = None
    eps: Optional[float] = Field(default=None, gt=0)
    seed: int
    out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    workers: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    distance: float = Field(default=0.3, gt=0)
    samples: int = Field(default=4, ge=1)
    oracle_samples: int = Field(default=20, ge=1)
    cutoff: int = Field(default=6, ge=0)
    gh_order: int = Field(default=40, ge=4)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @model_validator(mode="after")
    def _command_inputs(self) -> "RunConfig":
        if self.command == "compose" and not (self.expression or "").strip():
            raise ValueError("compose needs a kernel expression")
        if self.command == "experiment":
            if self.experiment not in EXPERIMENTS:
                raise ValueError(f"experiment must be one of {', '.join(EXPERIMENTS)}")
            if not self.p_values:
                raise ValueError("experiment needs a nonempty --p range")
        return self


def _default_step(experiment: Optional[str]) -> int:
    return 4 if experiment in ("peak-cp1", "logbk-decay") else 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    # every flag defaults to None so that config-file values can fill the gaps
    parser.add_argument("--config", help="KEY=VALUE file with RunConfig fields in upper case")
    parser.add_argument("--n", type=int, help="ambient dimension (verify-model: largest n)")
    parser.add_argument("--m", type=int, help="dimension of the submanifold")
    parser.add_argument("--k", type=int, help="jet order; orders 0..k are covered")
    parser.add_argument("--p", help="tensor powers a..b or a..b:step")
    parser.add_argument("--y-kind", dest="y_kind", choices=["point", "linear", "conic"])
    parser.add_argument("--eps", type=float, help="largest admissible |Z| of profile grids")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory for report files")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--workers", type=int)
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--distance", type=float, help="distance from Y for logbk-decay")
    parser.add_argument("--samples", type=int, help="random sections per p for isometry")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergman-jets",
        description="Bargmann model kernel calculus and projective jet-extension experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify-model", help="run the model identity suite")
    _add_common(verify)
    verify.add_argument("--cutoff", type=int, help="Fock truncation degree")
    verify.add_argument("--oracle-samples", dest="oracle_samples", type=int)

    compose = sub.add_parser("compose", help="compose kernels written as (amplitude|Base dims)")
    _add_common(compose)
    compose.add_argument("expression", nargs="+", help="e.g. '(1|Pperp0 2 1) ∘ (z1*zb1|Pperp0 2 1)'")

    experiment = sub.add_parser("experiment", help="run a projective experiment")
    _add_common(experiment)
    experiment.add_argument("experiment", choices=EXPERIMENTS)
    return parser


def load_run_config(args: argparse.Namespace, config: Optional[LabConfig] = None) -> RunConfig:
    """
    Merge defaults, the config file and the command line (later wins).

    Raises:
        ValidationError: If the merged parameters are invalid
        BergmanJetsError: If the p-range is malformed or empty
    """
    config = config or get_config()
    values: Dict[str, Any] = {
        "seed": config.seed,
        "workers": config.workers,
        "log_level": config.log_level,
        "cutoff": config.fock_cutoff,
        "gh_order": config.gh_order,
        "eps": config.grid_eps,
    }
    if getattr(args, "config", None):
        file_values = dotenv_values(args.config)
        values.update({key.lower(): v for key, v in file_values.items() if v not in (None, "")})
    cli = {key: v for key, v in vars(args).items() if v is not None and key != "config"}
    if isinstance(cli.get("expression"), list):
        cli["expression"] = " ".join(cli["expression"])
    values.update(cli)
    if args.command == "experiment" and values.get("p"):
        values["p_values"] = parse_p_range(str(values["p"]), _default_step(values.get("experiment")))
    return RunConfig(**values)


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level, format="%(name)s:%(levelname)s:%(message)s")


def cmd_verify_model(rc: RunConfig) -> int:
    report = run_identity_suite(
        n_max=rc.n or 3,
        k_max=3 if rc.k is None else rc.k,
        cutoff=rc.cutoff,
        oracle_samples=rc.oracle_samples,
        seed=rc.seed,
        gh_order=rc.gh_order,
    )
    for name, row in report.by_name().items():
        status = "PASS" if row["failed"] == 0 else "FAIL"
        print(f"{status} {name} checks={row['count']} failed={row['failed']} max_error={row['max_error']:.3e}")
    for check in report.failures():
        print(f"  failed {check.name} {check.params} {check.detail}".rstrip())
    if rc.out:
        payload = {"command": rc.command, "version": __version__, "config": rc.model_dump(), **report.to_dict()}
        write_report(payload, rc.out, "verify-model", "json")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_compose(rc: RunConfig) -> int:
    try:
        kernels = parse_kernel_expression(rc.expression or "")
        result = compose_chain(kernels)
    except ParseError as e:
        print(f"parse error at position {e.position}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BergmanJetsError as e:
        print(f"cannot compose: {e}", file=sys.stderr)
        return EXIT_USAGE
    if rc.format == "json":
        print(to_json_text(result.to_dict()), end="")
    else:
        print(result)
    return EXIT_OK


def cmd_experiment(rc: RunConfig) -> int:
    params = ExperimentParams(
        name=rc.experiment,
        p_values=tuple(rc.p_values),
        k=rc.k or 0,
        y_kind=rc.y_kind,
        eps=rc.eps,
        seed=rc.seed,
        distance=rc.distance,
        samples=rc.samples,
        workers=rc.workers,
    )
    router = ExperimentRouter()
    result = router.route(params, rc.model_dump())
    if not result.success:
        print(f"refused: {result.error}", file=sys.stderr)
        return EXIT_USAGE
    report = result.report
    for line in report.acceptance:
        print(line.text())
    out = rc.out or get_config().output_dir
    for path in write_report(report.to_dict(), out, rc.experiment, rc.format):
        logger.info("wrote %s", path)
    return EXIT_OK if report.passed else EXIT_FAILED


_COMMANDS = {
    "verify-model": cmd_verify_model,
    "compose": cmd_compose,
    "experiment": cmd_experiment,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rc = load_run_config(args)
    except (ValidationError, BergmanJetsError, ValueError, OSError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(rc.log_level)
    return _COMMANDS[rc.command](rc)


if __name__ == "__main__":
    sys.exit(main())

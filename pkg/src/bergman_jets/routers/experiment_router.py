"""Experiment router directing named experiments to their sweeps."""

from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Optional

from ..core.errors import BergmanJetsError
from ..services.experiments import EXPERIMENTS, ExperimentParams, ExperimentReport, run_experiment

logger = logging.getLogger(__name__)


class ExperimentResult:
    """Result of routing one experiment."""

    def __init__(
        self,
        success: bool,
        name: str,
        report: Optional[ExperimentReport] = None,
        error: str = "",
        exception: Optional[BergmanJetsError] = None,
    ):
        self.success = success
        self.name = name
        self.report = report
        self.error = error
        self.exception = exception

    @property
    def passed(self) -> bool:
        return self.success and self.report is not None and self.report.passed

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary format."""
        return {
            "success": self.success,
            "name": self.name,
            "passed": self.passed,
            "error": self.error,
        }


class ExperimentRouter:
    """Routes experiment names to the sweep that measures them."""

    def __init__(self):
        self._handlers: Dict[str, Callable[[ExperimentParams, Optional[Dict[str, Any]]], ExperimentReport]] = {
            "peak-cp1": self._handle_sweep,
            "line-cp2": self._handle_sweep,
            "conic-cp2": self._handle_sweep,
            "logbk-decay": self._handle_logbk,
            "isometry": self._handle_sweep,
        }

        # Statistics tracking
        self.stats = self._empty_stats()

    @staticmethod
    def _empty_stats() -> Dict[str, Any]:
        return {
            "experiments_run": 0,
            "successful": 0,
            "failed": 0,
            "acceptance_failures": 0,
            "by_name": {},
        }

    def available(self) -> list[str]:
        return list(self._handlers)

    def route(self, params: ExperimentParams, config: Optional[Dict[str, Any]] = None) -> ExperimentResult:
        """
        Run the experiment named in ``params``.

        Args:
            params: Experiment parameters, the name selects the handler
            config: Run configuration echoed into the report

        Returns:
            ExperimentResult holding the report, or the refusal
        """
        self.stats["experiments_run"] += 1
        self.stats["by_name"][params.name] = self.stats["by_name"].get(params.name, 0) + 1

        handler = self._handlers.get(params.name)
        if handler is None:
            self.stats["failed"] += 1
            return ExperimentResult(
                success=False,
                name=params.name,
                error=f"Unknown experiment {params.name!r}, expected one of {', '.join(EXPERIMENTS)}",
            )

        try:
            report = handler(params, config)
        except BergmanJetsError as e:
            self.stats["failed"] += 1
            logger.error("experiment %s refused: %s", params.name, e)
            return ExperimentResult(success=False, name=params.name, error=str(e), exception=e)

        self.stats["successful"] += 1
        if not report.passed:
            self.stats["acceptance_failures"] += 1
        return ExperimentResult(success=True, name=params.name, report=report)

    def get_statistics(self) -> Dict[str, Any]:
        """Get routing statistics."""
        stats = dict(self.stats)
        if stats["experiments_run"] > 0:
            stats["success_rate"] = (stats["successful"] / stats["experiments_run"]) * 100
        else:
            stats["success_rate"] = 0
        return stats

    def reset_statistics(self):
        """Reset routing statistics."""
        self.stats = self._empty_stats()

    # Handler methods for the experiments

    def _handle_sweep(self, params: ExperimentParams, config: Optional[Dict[str, Any]]) -> ExperimentReport:
        return run_experiment(params, config)

    def _handle_logbk(self, params: ExperimentParams, config: Optional[Dict[str, Any]]) -> ExperimentReport:
        # the decay is measured on the lower layers, which need k >= 1
        if params.k == 0:
            logger.info("logbk-decay: raising jet order 0 to 1")
            params = ExperimentParams(**{**params.__dict__, "k": 1})
        return run_experiment(params, config)

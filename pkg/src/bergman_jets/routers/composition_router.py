"""Composition router directing kernel pairs to the matching rule."""

from __future__ import annotations

from typing import Any, Callable, Dict, Optional, Tuple

from ..core.errors import CompositionError
from ..services.calculus import KernelCalculus
from ..services.model_kernels import BaseKind, KernelBase, PolyKernel

PairKey = Tuple[BaseKind, BaseKind]


class CompositionResult:
    """Result of routing one pair of kernels."""

    def __init__(
        self,
        success: bool,
        pair: Optional[PairKey] = None,
        kernel: Optional[PolyKernel] = None,
        error: str = "",
    ):
        self.success = success
        self.pair = pair
        self.kernel = kernel
        self.error = error

    def unwrap(self) -> PolyKernel:
        if not self.success or self.kernel is None:
            raise CompositionError(self.error)
        return self.kernel

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary format."""
        return {
            "success": self.success,
            "pair": [k.value for k in self.pair] if self.pair else None,
            "kernel": str(self.kernel) if self.kernel else None,
            "error": self.error,
        }


class CompositionRouter:
    """Routes (base, base) pairs to the closed-form composition rules.

    Covered pairs: perp o perp, P o P, sub o sub, E o sub, E o Res, Res o E,
    and sub o Res defined by adjunction from E o sub.
    """

    def __init__(self, calculus: Optional[KernelCalculus] = None):
        self.calculus = calculus or KernelCalculus()
        self._handlers: Dict[PairKey, Callable[[PolyKernel, PolyKernel], PolyKernel]] = {
            (BaseKind.ORTHO, BaseKind.ORTHO): self._handle_same_base,
            (BaseKind.BARGMANN, BaseKind.BARGMANN): self._handle_same_base,
            (BaseKind.SUB, BaseKind.SUB): self._handle_same_base,
            (BaseKind.EXT, BaseKind.SUB): self._handle_ext_sub,
            (BaseKind.EXT, BaseKind.RES): self._handle_ext_res,
            (BaseKind.RES, BaseKind.EXT): self._handle_res_ext,
            (BaseKind.SUB, BaseKind.RES): self._handle_sub_res,
        }

        # Statistics tracking
        self.stats = self._empty_stats()

    @staticmethod
    def _empty_stats() -> Dict[str, Any]:
        return {
            "pairs_routed": 0,
            "successful": 0,
            "failed": 0,
            "by_pair": {},
        }

    def supported_pairs(self) -> list[PairKey]:
        return list(self._handlers)

    def route(self, left: PolyKernel, right: PolyKernel) -> CompositionResult:
        """
        Compose ``left o right`` with the rule registered for their bases.

        Args:
            left: Kernel applied last
            right: Kernel applied first

        Returns:
            CompositionResult holding the composed kernel or the error
        """
        self.stats["pairs_routed"] += 1
        pair = (left.base.kind, right.base.kind)
        label = f"{pair[0].value}*{pair[1].value}"
        self.stats["by_pair"][label] = self.stats["by_pair"].get(label, 0) + 1

        handler = self._handlers.get(pair)
        if handler is None:
            self.stats["failed"] += 1
            return CompositionResult(
                success=False,
                pair=pair,
                error=f"No composition rule for {left.base} o {right.base}",
            )

        try:
            kernel = handler(left, right)
        except CompositionError as e:
            self.stats["failed"] += 1
            return CompositionResult(success=False, pair=pair, error=str(e))

        self.stats["successful"] += 1
        return CompositionResult(success=True, pair=pair, kernel=kernel)

    def result_base(self, left: KernelBase, right: KernelBase) -> KernelBase:
        """Base of ``left o right`` without composing amplitudes."""
        pair = (left.kind, right.kind)
        if pair not in self._handlers:
            raise CompositionError(f"No composition rule for {left} o {right}")
        self._check_dims(left, right)
        if pair == (BaseKind.EXT, BaseKind.SUB):
            return left
        if pair == (BaseKind.EXT, BaseKind.RES):
            return KernelBase.ortho(left.n, left.m)
        if pair == (BaseKind.RES, BaseKind.EXT):
            return KernelBase.sub(left.m)
        if pair == (BaseKind.SUB, BaseKind.RES):
            return right
        return left

    def get_statistics(self) -> Dict[str, Any]:
        """Get routing statistics."""
        stats = dict(self.stats)
        if stats["pairs_routed"] > 0:
            stats["success_rate"] = (stats["successful"] / stats["pairs_routed"]) * 100
        else:
            stats["success_rate"] = 0
        return stats

    def reset_statistics(self):
        """Reset routing statistics."""
        self.stats = self._empty_stats()

    @staticmethod
    def _check_dims(left: KernelBase, right: KernelBase) -> None:
        pair = (left.kind, right.kind)
        if pair in ((BaseKind.EXT, BaseKind.SUB), (BaseKind.SUB, BaseKind.RES)):
            ok = left.m == right.m
        else:
            ok = (left.n, left.m) == (right.n, right.m)
        if not ok:
            raise CompositionError(f"Dimensions of {left} and {right} do not compose")

    # Handler methods for the composition table

    def _handle_same_base(self, left: PolyKernel, right: PolyKernel) -> PolyKernel:
        self._check_dims(left.base, right.base)
        amp = self.calculus.compose_amplitudes(left.amplitude, right.amplitude, left.base.coupled)
        return PolyKernel(left.base, amp)

    def _handle_ext_sub(self, left: PolyKernel, right: PolyKernel) -> PolyKernel:
        self._check_dims(left.base, right.base)
        amp = self.calculus.compose_amplitudes(left.amplitude, right.amplitude, left.base.m)
        return PolyKernel(left.base, amp)

    def _handle_ext_res(self, left: PolyKernel, right: PolyKernel) -> PolyKernel:
        self._check_dims(left.base, right.base)
        amp = self.calculus.compose_amplitudes(left.amplitude, right.amplitude, left.base.m)
        return PolyKernel(KernelBase.ortho(left.base.n, left.base.m), amp)

    def _handle_res_ext(self, left: PolyKernel, right: PolyKernel) -> PolyKernel:
        self._check_dims(left.base, right.base)
        amp = self.calculus.compose_amplitudes(left.amplitude, right.amplitude, left.base.m)
        return PolyKernel(KernelBase.sub(left.base.m), amp)

    def _handle_sub_res(self, left: PolyKernel, right: PolyKernel) -> PolyKernel:
        # (B P_m) o (C Res0) = ((C Res0)* o (B P_m)*)*, and the inner pair is E o sub
        self._check_dims(left.base, right.base)
        inner = self._handle_ext_sub(right.adjoint(), left.adjoint())
        return inner.adjoint()

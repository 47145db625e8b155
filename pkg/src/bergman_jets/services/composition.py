"""Composition of model kernels: scalar pairs and Sym^k-indexed jet matrices."""

from __future__ import annotations

import logging
from functools import reduce
from typing import Iterable, Optional, Sequence

from ..core.errors import CompositionError, ShapeError
from ..core.multipoly import MultiPoly
from ..routers.composition_router import CompositionRouter
from .calculus import KernelCalculus
from .model_kernels import BaseKind, JetKernel, PolyKernel, contraction_weight

logger = logging.getLogger(__name__)

_default_router: Optional[CompositionRouter] = None


def get_router(calculus: Optional[KernelCalculus] = None) -> CompositionRouter:
    """Shared router, or a fresh one bound to ``calculus``."""
    global _default_router
    if calculus is not None:
        return CompositionRouter(calculus)
    if _default_router is None:
        _default_router = CompositionRouter()
    return _default_router


def compose_poly(left: PolyKernel, right: PolyKernel, router: Optional[CompositionRouter] = None) -> PolyKernel:
    """``left o right`` for any pair in the composition table."""
    return (router or get_router()).route(left, right).unwrap()


def compose_k(
    k1: PolyKernel, k2: PolyKernel, router: Optional[CompositionRouter] = None
) -> PolyKernel:
    """
    K_{n,m}[A1, A2] for two amplitudes over the same projector base.

    Args:
        k1: Kernel over OrthoProj0, SubProj or BargmannProj
        k2: Kernel over the identical base

    Returns:
        Composed kernel over the same base

    Raises:
        CompositionError: If the bases differ or are not projectors
    """
    if k1.base != k2.base:
        raise CompositionError(f"base mismatch: {k1.base} vs {k2.base}")
    if k1.base.kind not in (BaseKind.ORTHO, BaseKind.SUB, BaseKind.BARGMANN):
        raise CompositionError(f"K is defined on projector bases only, got {k1.base}")
    return compose_poly(k1, k2, router)


def compose_jets(
    k1: JetKernel, k2: JetKernel, router: Optional[CompositionRouter] = None
) -> JetKernel:
    """
    Matrix composition of jet kernels.

    Entry (r, c) is sum_b (b!/k!) k1[r, b] o k2[b, c]: the inner Sym^k index
    is contracted with the pairing of d/dz^b against dz^b.

    Args:
        k1: Kernel applied last
        k2: Kernel applied first
        router: Router to use, defaults to the shared one

    Returns:
        JetKernel over the base given by the composition table

    Raises:
        ShapeError: If the inner index sets differ
        CompositionError: If the base pair has no rule
    """
    router = router or get_router()
    if k1.col_order != k2.row_order or k1.normal_dim != k2.normal_dim:
        raise ShapeError(
            f"cannot compose {k1.shape[0]}x{k1.shape[1]} (order {k1.col_order}) "
            f"with {k2.shape[0]}x{k2.shape[1]} (order {k2.row_order})"
        )
    base = router.result_base(k1.base, k2.base)
    dims = base.amplitude_dims
    inner = k1.col_indices
    weights = [contraction_weight(b) for b in inner]

    entries = []
    for row in k1.entries:
        new_row = []
        for j in range(len(k2.col_indices)):
            total = MultiPoly.zero(dims)
            for b, w in enumerate(weights):
                a1, a2 = row[b], k2.entries[b][j]
                if a1.is_zero() or a2.is_zero():
                    continue
                composed = router.route(PolyKernel(k1.base, a1), PolyKernel(k2.base, a2)).unwrap()
                total = total + composed.amplitude.scale(w)
            new_row.append(total)
        entries.append(tuple(new_row))
    logger.debug("composed jets %s o %s -> %s", k1.base, k2.base, base)
    return JetKernel(base, k1.normal_dim, k1.row_order, k2.col_order, tuple(entries))


def _require(kernel: JetKernel, kind: BaseKind, name: str) -> None:
    if kernel.base.kind != kind:
        raise CompositionError(f"{name} expects a {kind.value} kernel, got {kernel.base}")


def compose_k_ep(k1: JetKernel, k2: JetKernel, router: Optional[CompositionRouter] = None) -> JetKernel:
    """K^EP: Ext0 jet kernel after a SubProj jet kernel."""
    _require(k1, BaseKind.EXT, "K^EP")
    _require(k2, BaseKind.SUB, "K^EP")
    return compose_jets(k1, k2, router)


def compose_k_er(k1: JetKernel, k2: JetKernel, router: Optional[CompositionRouter] = None) -> JetKernel:
    """K^ER: Ext0 jet kernel after a Res0 jet kernel, landing on OrthoProj0."""
    _require(k1, BaseKind.EXT, "K^ER")
    _require(k2, BaseKind.RES, "K^ER")
    return compose_jets(k1, k2, router)


def compose_k_re(k1: JetKernel, k2: JetKernel, router: Optional[CompositionRouter] = None) -> JetKernel:
    """Res0 jet kernel after an Ext0 jet kernel, landing on SubProj."""
    _require(k1, BaseKind.RES, "K^RE")
    _require(k2, BaseKind.EXT, "K^RE")
    return compose_jets(k1, k2, router)


def compose_sub_res(k1: JetKernel, k2: JetKernel, router: Optional[CompositionRouter] = None) -> JetKernel:
    """SubProj jet kernel after a Res0 jet kernel, computed by adjunction."""
    _require(k1, BaseKind.SUB, "sub o Res")
    _require(k2, BaseKind.RES, "sub o Res")
    return compose_jets(k1, k2, router)


def compose_chain(kernels: Sequence[PolyKernel], router: Optional[CompositionRouter] = None) -> PolyKernel:
    """Left-to-right product ``K1 o K2 o ... o Kr`` of parsed operands."""
    if not kernels:
        raise CompositionError("nothing to compose")
    router = router or get_router()
    return reduce(lambda acc, k: router.route(acc, k).unwrap(), kernels[1:], kernels[0])


def compose_jet_chain(kernels: Iterable[JetKernel], router: Optional[CompositionRouter] = None) -> JetKernel:
    items = list(kernels)
    if not items:
        raise CompositionError("nothing to compose")
    return reduce(lambda acc, k: compose_jets(acc, k, router), items[1:], items[0])

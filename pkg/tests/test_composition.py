import pytest

from bergman_jets.core.errors import CompositionError, ShapeError
from bergman_jets.core.expressions import parse_poly
from bergman_jets.core.multipoly import MultiPoly
from bergman_jets.services.composition import (
    compose_chain,
    compose_jets,
    compose_k,
    compose_k_ep,
    compose_k_er,
    compose_k_re,
    compose_sub_res,
)
from bergman_jets.services.model_kernels import (
    KernelBase,
    PolyKernel,
    build_extension,
    build_model_kernel,
    build_perp,
    build_restriction,
    build_sub_identity,
    parse_kernel_expression,
)

CASES = [(1, 0, 0), (1, 0, 1), (2, 1, 1), (2, 0, 2), (3, 1, 2), (3, 2, 1)]


def test_compose_k_same_base():
    """Test the worked example from the kernel expression syntax"""
    base = KernelBase.ortho(2, 1)
    left = PolyKernel(base, MultiPoly.one((2, 2)))
    right = PolyKernel(base, parse_poly("z1*zb1", (2, 2)))
    result = compose_k(left, right)
    assert str(result) == "z1*zb'1 + pi^-1 | Pperp0 2 1"


def test_compose_k_rejects_other_bases():
    with pytest.raises(CompositionError):
        compose_k(PolyKernel.unit(KernelBase.ortho(2, 1)), PolyKernel.unit(KernelBase.ortho(2, 0)))
    with pytest.raises(CompositionError):
        compose_k(PolyKernel.unit(KernelBase.ext(2, 1)), PolyKernel.unit(KernelBase.ext(2, 1)))


@pytest.mark.parametrize("n,m,k", CASES)
def test_extension_after_restriction_is_orthogonal_projector(n, m, k):
    assert compose_k_er(build_extension(n, m, k), build_restriction(n, m, k)) == build_perp(n, m, k)


@pytest.mark.parametrize("n,m,k", CASES)
def test_restriction_after_extension_is_identity(n, m, k):
    composed = compose_k_re(build_restriction(n, m, k), build_extension(n, m, k))
    assert composed == build_sub_identity(m, n - m, k)


@pytest.mark.parametrize("n,m,k", CASES)
def test_extension_absorbs_sub_projector(n, m, k):
    ext = build_extension(n, m, k)
    assert compose_k_ep(ext, build_sub_identity(m, n - m, k)) == ext


@pytest.mark.parametrize("n,m,k", CASES)
def test_sub_projector_before_restriction(n, m, k):
    res = build_restriction(n, m, k)
    assert compose_sub_res(build_sub_identity(m, n - m, k), res) == res


def test_orthogonal_layers_are_orthogonal():
    perps = [build_perp(2, 1, l) for l in range(3)]
    for j, a in enumerate(perps):
        for l, b in enumerate(perps):
            composed = compose_jets(a, b)
            if j == l:
                assert composed == a
            else:
                assert composed.is_zero()


def test_bargmann_projector_is_idempotent():
    p = build_model_kernel("P", 2, 1, 0)
    assert compose_jets(p, p) == p


def test_shape_and_kind_errors():
    with pytest.raises(ShapeError):
        compose_jets(build_extension(2, 1, 1), build_restriction(2, 1, 2))
    with pytest.raises(CompositionError):
        compose_k_er(build_restriction(2, 1, 1), build_extension(2, 1, 1))
    with pytest.raises(CompositionError):
        compose_jets(build_perp(2, 1, 0), build_extension(2, 1, 0))


def test_compose_chain():
    kernels = parse_kernel_expression("(z1|P 1) ∘ (1|P 1) ∘ (zb1|P 1)")
    result = compose_chain(kernels)
    assert result.base == KernelBase.bargmann(1)
    assert result == compose_chain([compose_chain(kernels[:2]), kernels[2]])
    with pytest.raises(CompositionError):
        compose_chain([])


class TestCompositionRouter:
    def test_supported_pairs(self, router):
        assert len(router.supported_pairs()) == 7

    def test_unsupported_pair(self, router):
        result = router.route(PolyKernel.unit(KernelBase.ortho(2, 1)), PolyKernel.unit(KernelBase.ext(2, 1)))
        assert not result.success
        assert "No composition rule" in result.error
        with pytest.raises(CompositionError):
            result.unwrap()

    def test_dimension_mismatch_is_reported(self, router):
        result = router.route(PolyKernel.unit(KernelBase.ortho(2, 1)), PolyKernel.unit(KernelBase.ortho(3, 1)))
        assert not result.success
        assert result.to_dict()["pair"] == ["Pperp0", "Pperp0"]

    def test_result_base(self, router):
        assert router.result_base(KernelBase.ext(2, 1), KernelBase.res(2, 1)) == KernelBase.ortho(2, 1)
        assert router.result_base(KernelBase.res(2, 1), KernelBase.ext(2, 1)) == KernelBase.sub(1)
        with pytest.raises(CompositionError):
            router.result_base(KernelBase.res(2, 1), KernelBase.res(2, 1))

    def test_statistics(self, router):
        unit = PolyKernel.unit(KernelBase.bargmann(1))
        router.route(unit, unit)
        router.route(unit, PolyKernel.unit(KernelBase.ext(1, 0)))
        stats = router.get_statistics()
        assert stats["pairs_routed"] == 2
        assert stats["successful"] == 1
        assert stats["failed"] == 1
        assert stats["success_rate"] == 50
        assert stats["by_pair"]["P*P"] == 1
        router.reset_statistics()
        assert router.get_statistics()["pairs_routed"] == 0

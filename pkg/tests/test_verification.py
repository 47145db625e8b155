import math

import pytest

from bergman_jets.core.multipoly import Parity
from bergman_jets.services.calculus import KernelCalculus
from bergman_jets.services.model_kernels import build_extension, build_perp
from bergman_jets.services.verification import (
    FOCK_IDENTITIES,
    ORACLE_IDENTITIES,
    PROFILE_IDENTITIES,
    SYMBOLIC_IDENTITIES,
    IdentityCheck,
    SuiteReport,
    dimension_pairs,
    kernel_gap,
    random_amplitude,
    run_identity_suite,
)


class DoubledCalculus(KernelCalculus):
    """Tangential rule off by a factor of two."""

    def tangential_rule(self, a, b):
        return [(za, zb, c * 2) for za, zb, c in super().tangential_rule(a, b)]


def test_dimension_pairs():
    assert dimension_pairs(2) == [(1, 0), (2, 0), (2, 1)]


def test_kernel_gap():
    perp = build_perp(2, 1, 1)
    assert kernel_gap(perp, perp) == 0.0
    assert kernel_gap(perp, perp.scale(2)) > 0
    assert kernel_gap(perp, build_extension(2, 1, 1)) == math.inf


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_random_amplitude_respects_parity(rng, parity):
    amp = random_amplitude((2, 1), rng, parity=parity)
    assert not amp.is_zero()
    assert amp.parity() == parity
    assert amp.degree() <= 4


def test_suite_report_summary():
    report = SuiteReport(
        [
            IdentityCheck("a", {"n": 1}, True, 0.0),
            IdentityCheck("a", {"n": 2}, False, 0.5, "off"),
            IdentityCheck("b", {"n": 1}, True, 1e-12),
        ]
    )
    assert not report.passed
    assert report.by_name()["a"] == {"count": 2, "failed": 1, "max_error": 0.5}
    assert [c.params for c in report.failures()] == [{"n": 2}]
    assert report.to_dict()["summary"]["b"]["failed"] == 0


def test_small_suite_passes():
    """Test every identity family on n <= 2, k <= 1"""
    report = run_identity_suite(n_max=2, k_max=1, cutoff=3, oracle_samples=2, seed=3)
    failed = [(c.name, c.params, c.max_error) for c in report.failures()]
    assert report.passed, failed
    expected = set(SYMBOLIC_IDENTITIES) | set(ORACLE_IDENTITIES) | set(FOCK_IDENTITIES) | set(PROFILE_IDENTITIES)
    assert set(report.by_name()) == expected


def test_profile_family_covers_every_tuple():
    """Test the numeric model profiles run once per (n, m, k) and stay at roundoff"""
    report = run_identity_suite(n_max=2, k_max=1, families=("profile",))
    checks = [c for c in report.checks if c.name == "model_profiles"]
    assert len(checks) == 2 * len(dimension_pairs(2))
    assert report.passed
    assert all(c.max_error < 1e-9 for c in checks)
    assert "LogBK" in checks[0].detail


def test_doubled_tangential_rule_is_caught():
    """Test that a wrong monomial rule fails the symbolic identities"""
    report = run_identity_suite(n_max=2, k_max=0, calculus=DoubledCalculus(), families=("symbolic",))
    assert not report.passed
    summary = report.by_name()
    assert summary["bargmann_idempotent"]["failed"] == 3
    failed_ext_res = [c.params for c in report.failures() if c.name == "ext_res_is_perp"]
    assert {"n": 2, "m": 1, "k": 0} in failed_ext_res


def test_fock_only_family():
    report = run_identity_suite(n_max=1, k_max=2, cutoff=4, families=("fock",))
    assert report.passed
    assert report.by_name()["fock_ext_res"]["count"] == 3

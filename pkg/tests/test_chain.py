import numpy as np
import pytest

from youngconv.chain import (
    ChainError,
    build_coset_functionals,
    chain_check,
    generalized_holder,
    identity_checks,
)
from youngconv.convolution import young_ratio
from youngconv.exponents import young_p
from youngconv.groups import GroupFunction, affine_prime_field, cyclic_group
from youngconv.quotient import build_subgroup_pair, corrupt_delta

TRIPLES = [young_p("4/3", "4/3"), young_p("3/2", "3/2"), young_p("5/4", "10/7")]


def _pairs():
    af5 = affine_prime_field(5)
    return [
        build_subgroup_pair(cyclic_group(6), [0, 3]),
        build_subgroup_pair(af5, list(range(5))),
        build_subgroup_pair(af5, [(a - 1) * 5 for a in range(1, 5)]),
    ]


def test_identities_and_chain_random_instances():
    rng = np.random.default_rng(0)
    for pair in _pairs():
        g = pair.group
        for ex in TRIPLES:
            for _ in range(10):
                f1 = GroupFunction(g, 0.05 + rng.random(g.shape))
                f2 = GroupFunction(g, 0.05 + rng.random(g.shape))
                po = build_coset_functionals(pair, ex, f1, f2)
                assert po.rep_independence_residual <= 1e-12
                for check in identity_checks(po):
                    assert check.passed, str(check)
                report = chain_check(po, 1.0)
                assert report.passed, report.first_failure
                assert report.end_to_end_lhs <= 1.0 + 1e-10


def test_functions_with_zeros_allowed():
    pair = build_subgroup_pair(cyclic_group(6), [0, 3])
    g = pair.group
    f1 = GroupFunction(g, np.array([0.0, 1.0, 0.0, 2.0, 0.0, 0.5]))
    f2 = GroupFunction(g, np.array([1.0, 0.0, 0.0, 0.0, 3.0, 0.0]))
    ex = young_p("4/3", "4/3")
    po = build_coset_functionals(pair, ex, f1, f2)
    assert all(c.passed for c in identity_checks(po))
    assert chain_check(po, 1.0).passed


def test_chain_cross_checks_direct_ratio():
    rng = np.random.default_rng(1)
    pair = build_subgroup_pair(affine_prime_field(5), list(range(5)))
    g = pair.group
    ex = young_p("4/3", "4/3")
    f1 = GroupFunction(g, rng.random(20))
    f2 = GroupFunction(g, rng.random(20))
    po = build_coset_functionals(pair, ex, f1, f2)
    report = chain_check(po, 1.0)
    ratio = young_ratio(f1, f2, ex)
    np.testing.assert_allclose(report.direct_norm, ratio, rtol=1e-10)
    np.testing.assert_allclose(report.end_to_end_lhs, ratio, rtol=1e-10)


def test_degenerate_subgroups():
    rng = np.random.default_rng(2)
    z6 = cyclic_group(6)
    ex = young_p("3/2", "3/2")
    for spec in (list(range(6)), [0]):
        pair = build_subgroup_pair(z6, spec)
        f1 = GroupFunction(z6, rng.random(6))
        f2 = GroupFunction(z6, rng.random(6))
        po = build_coset_functionals(pair, ex, f1, f2)
        assert all(c.passed for c in identity_checks(po))
        assert chain_check(po, 1.0).passed


def test_corrupted_delta_fails():
    rng = np.random.default_rng(3)
    pair = corrupt_delta(build_subgroup_pair(cyclic_group(6), [0, 3]))
    g = pair.group
    ex = young_p("4/3", "4/3")
    f1 = GroupFunction(g, 0.1 + rng.random(6))
    f2 = GroupFunction(g, 0.1 + rng.random(6))
    po = build_coset_functionals(pair, ex, f1, f2)
    assert not all(c.passed for c in identity_checks(po))
    assert not chain_check(po, 1.0).passed


def test_rejects_bad_inputs():
    pair = build_subgroup_pair(cyclic_group(6), [0, 3])
    g = pair.group
    with pytest.raises(ChainError):  # boundary triple
        build_coset_functionals(
            pair, young_p(2, 2), GroupFunction(g, np.ones(6)), GroupFunction(g, np.ones(6))
        )
    with pytest.raises(ChainError):  # negative values
        build_coset_functionals(
            pair,
            young_p("4/3", "4/3"),
            GroupFunction(g, np.array([1.0, -1.0, 1, 1, 1, 1])),
            GroupFunction(g, np.ones(6)),
        )


def test_generalized_holder_basic():
    rng = np.random.default_rng(4)
    w = rng.random(12)
    f = [rng.random(12) for _ in range(3)]
    # single factor: equality
    assert generalized_holder(w, f[:2], [[0.7, 1.9]], [3.0]) == pytest.approx(0.0, abs=1e-12)
    # classical two-factor Hoelder over 100 draws
    for _ in range(100):
        a, b = rng.random(12), rng.random(12)
        gap = generalized_holder(w, [a, b], [[2.0, 0.0], [0.0, 2.0]], [0.5, 0.5])
        assert gap >= -1e-12


def test_generalized_holder_chain_weight_pattern():
    # the exact weight pattern of the coset-space Hoelder step:
    # factors (S, T, U), rows S / U / S*T, weights (p/p2', p/p1', 1)
    rng = np.random.default_rng(5)
    for ex in TRIPLES:
        p = float(ex.p)
        c1 = p * (1.0 - float(ex.p2.inv))  # p / p2'
        c2 = p * (1.0 - float(ex.p1.inv))  # p / p1'
        assert c1 + c2 + 1.0 == pytest.approx(p, rel=1e-12)
        for _ in range(100):
            w = rng.random(8)
            s, t, u = rng.random(8), rng.random(8), rng.random(8)
            gap = generalized_holder(
                w,
                [s, t, u],
                [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
                [c1, c2, 1.0],
            )
            assert gap >= -1e-12


def test_generalized_holder_validation():
    with pytest.raises(ValueError):
        generalized_holder([1.0], [[1.0]], [[1.0, 2.0]], [1.0])
    with pytest.raises(ValueError):
        generalized_holder([1.0], [[1.0]], [[1.0]], [-1.0])

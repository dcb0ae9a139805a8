import numpy as np
import pytest

from youngconv.groups import (
    GroupFunction,
    affine_prime_field,
    cyclic_group,
    make_affine_group,
)
from youngconv.quotient import (
    SubgroupError,
    build_subgroup_pair,
    corrupt_delta,
    left_invariance_check,
    weil_decompose_check,
)

AFF_GRID = (0.02, 0.6, 0.02, 3.0)


def _bump(model, cu=0.0, cb=0.0, su=0.25, sb=0.5):
    uu = model.u_centers[:, None]
    bb = model.b_centers[None, :]
    return np.exp(-((uu - cu) ** 2) / (2 * su**2) - ((bb - cb) ** 2) / (2 * sb**2))


def test_z6_pair_structure():
    z6 = cyclic_group(6)
    pair = build_subgroup_pair(z6, [0, 3])
    assert pair.n_cosets == 3
    assert np.all(pair.delta == 1.0)
    assert np.all(pair.coset_measure == 1.0)
    np.testing.assert_array_equal(pair.reps, [0, 1, 2])


def test_finite_weil_exact_100_random():
    rng = np.random.default_rng(0)
    af5 = affine_prime_field(5)
    pairs = [
        build_subgroup_pair(cyclic_group(6), [0, 3]),
        build_subgroup_pair(af5, list(range(5))),          # translations
        build_subgroup_pair(af5, [(a - 1) * 5 for a in range(1, 5)]),  # dilations
    ]
    for pair in pairs:
        g = pair.group
        worst = max(
            weil_decompose_check(pair, GroupFunction(g, rng.random(g.shape)))
            for _ in range(100)
        )
        assert worst <= 1e-12


def test_finite_invariance_exact():
    af5 = affine_prime_field(5)
    pair = build_subgroup_pair(af5, list(range(5)))
    rng = np.random.default_rng(1)
    phi = GroupFunction(af5, rng.random(20))
    for h in pair.h_indices:
        assert left_invariance_check(pair, phi, int(h)) <= 1e-12


def test_invariance_rejects_non_member():
    pair = build_subgroup_pair(cyclic_group(6), [0, 3])
    phi = GroupFunction(pair.group, np.ones(6))
    with pytest.raises(SubgroupError):
        left_invariance_check(pair, phi, 2)


def test_bad_subgroup_specs():
    z6 = cyclic_group(6)
    with pytest.raises(SubgroupError):  # not closed
        build_subgroup_pair(z6, [0, 2])
    with pytest.raises(SubgroupError):  # missing inverses / not closed
        build_subgroup_pair(z6, [0, 1])
    with pytest.raises(SubgroupError):  # missing identity
        build_subgroup_pair(z6, [3])
    with pytest.raises(SubgroupError):
        build_subgroup_pair(z6, [])
    with pytest.raises(SubgroupError):
        build_subgroup_pair(z6, [0, 9])


def test_degenerate_pairs_reduce_to_plain_integral():
    z6 = cyclic_group(6)
    rng = np.random.default_rng(2)
    phi = GroupFunction(z6, rng.random(6))
    whole = build_subgroup_pair(z6, list(range(6)))
    assert whole.n_cosets == 1
    assert weil_decompose_check(whole, phi) <= 1e-15
    trivial = build_subgroup_pair(z6, [0])
    assert trivial.n_cosets == 6
    assert np.all(trivial.delta == 1.0)
    assert weil_decompose_check(trivial, phi) <= 1e-15


def test_affine_translations_pair():
    aff = make_affine_group(*AFF_GRID)
    pair = build_subgroup_pair(aff, "translations")
    # delta is the full modular function here, constant on the rows
    np.testing.assert_allclose(pair.delta, aff.delta, rtol=1e-14)
    # delta(e) = 1 and H-multiplicativity delta(h'g) = delta(h') delta(g):
    # translations have delta(h') = 1, so delta is constant on each coset
    e_row = (aff.n_u - 1) // 2
    np.testing.assert_allclose(pair.delta[e_row], 1.0, rtol=1e-14)
    assert np.all(pair.delta == pair.delta[:, :1])
    phi = GroupFunction(aff, _bump(aff, cb=0.2))
    assert weil_decompose_check(pair, phi) <= 1e-3
    assert left_invariance_check(pair, phi, -0.137) <= 1e-3
    # lattice-aligned translations are exact grid symmetries
    assert left_invariance_check(pair, phi, 5 * aff.h_b) <= 1e-14


def test_affine_dilations_pair():
    aff = make_affine_group(*AFF_GRID)
    pair = build_subgroup_pair(aff, "dilations")
    np.testing.assert_allclose(pair.delta, 1.0)
    phi = GroupFunction(aff, _bump(aff, su=0.15))
    assert weil_decompose_check(pair, phi) <= 1e-3
    assert left_invariance_check(pair, phi, 0.06) <= 1e-3


def test_affine_rejects_unknown_subgroup():
    aff = make_affine_group(0.1, 0.5, 0.1, 1.0)
    with pytest.raises(SubgroupError):
        build_subgroup_pair(aff, "rotations")


def test_corrupted_delta_detected():
    # +10% corruption must push residuals above the 0.05 detection line
    z6 = cyclic_group(6)
    pair = corrupt_delta(build_subgroup_pair(z6, [0, 3]))
    rng = np.random.default_rng(3)
    phi = GroupFunction(z6, 0.2 + rng.random(6))
    assert weil_decompose_check(pair, phi) > 0.05

    aff = make_affine_group(0.05, 0.6, 0.05, 3.0)
    tpair = corrupt_delta(build_subgroup_pair(aff, "translations"))
    phi = GroupFunction(aff, _bump(aff))
    assert weil_decompose_check(tpair, phi) > 0.05
    # beta < 0 moves the comparison point into the uncorrupted half
    assert left_invariance_check(tpair, phi, -0.15) > 0.05

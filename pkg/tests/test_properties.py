"""Invariant checks driven by hypothesis."""

import math

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from credal import (
    AssociationMatrix,
    CredalPartition,
    Dataset,
    FitConfig,
    SourceKnowledge,
    assemble_system,
    compute_barycenters,
    enumerate_focal_sets,
    harden,
    pignistic_transform,
    solve_centers,
    update_association,
    update_masses,
)

import _naive


def finite_floats(lo, hi):
    return st.floats(min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False)


@st.composite
def structures(draw):
    c = draw(st.integers(min_value=1, max_value=4))
    cap = draw(st.integers(min_value=1, max_value=c))
    return enumerate_focal_sets(c, cap)


@st.composite
def distance_matrices(draw):
    s = draw(structures())
    n = draw(st.integers(min_value=1, max_value=6))
    d = draw(
        hnp.arrays(
            float,
            (n, s.n_sets),
            elements=finite_floats(0.0, 1e9),
        )
    )
    return s, d


@given(distance_matrices())
@settings(max_examples=200, deadline=None)
def test_mass_rows_always_normalize(case):
    s, d = case
    part = update_masses(d, s, FitConfig())
    total = part.masses.sum(axis=1) + part.empty_mass
    assert part.masses.min() >= 0.0 and part.empty_mass.min() >= 0.0
    np.testing.assert_allclose(total, 1.0, rtol=0, atol=1e-12)


@given(distance_matrices())
@settings(max_examples=200, deadline=None)
def test_zero_distance_rows_follow_the_tie_rule(case):
    s, d = case
    part = update_masses(d, s, FitConfig())
    cards = s.cardinalities
    for i in range(d.shape[0]):
        zero = d[i] == 0.0
        if not zero.any():
            continue
        assert part.empty_mass[i] == 0.0
        cmin = cards[zero].min()
        allowed = zero & (cards == cmin)
        assert part.masses[i][~allowed].max(initial=0.0) == 0.0
        np.testing.assert_allclose(part.masses[i][allowed].sum(), 1.0, atol=1e-15)


@given(
    structures(),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=100, deadline=None)
def test_association_rows_are_stochastic(s, f_s, seed):
    rng = np.random.default_rng(seed)
    src = rng.normal(scale=10.0, size=(f_s, 2))
    tgt = rng.normal(scale=10.0, size=(s.n_sets, 2))
    r = update_association(src, tgt, s, FitConfig()).r
    assert r.min() >= 0.0
    np.testing.assert_allclose(r.sum(axis=1), 1.0, rtol=0, atol=1e-12)


@given(distance_matrices())
@settings(max_examples=100, deadline=None)
def test_pignistic_rows_are_probabilities(case):
    s, d = case
    part = update_masses(d, s, FitConfig())
    bet = pignistic_transform(part, s)
    assert bet.min() >= 0.0
    np.testing.assert_allclose(bet.sum(axis=1), 1.0, rtol=0, atol=1e-12)
    labels = harden(part, s).labels
    assert labels.min() >= 1 and labels.max() <= s.c


@given(st.integers(min_value=1, max_value=8), st.data())
@settings(max_examples=100)
def test_enumeration_is_canonical(c, data):
    cap = data.draw(st.integers(min_value=1, max_value=c))
    s = enumerate_focal_sets(c, cap)
    sets = s.focal_sets
    assert len(sets) == sum(math.comb(c, k) for k in range(1, cap + 1))
    assert list(sets) == sorted(sets, key=lambda a: (len(a), a))
    assert all(tuple(sorted(set(a))) == a for a in sets)


@given(
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=100)
def test_barycenters_are_permutation_equivariant(c, seed):
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(c, 3))
    s = enumerate_focal_sets(c)
    perm = rng.permutation(c)
    # relabel cluster k as perm[k]+1 and re-enumerate
    permuted_bary = compute_barycenters(centers[np.argsort(perm)], s)
    bary = compute_barycenters(centers, s)
    for j, members in enumerate(s.focal_sets):
        relabeled = tuple(sorted(int(perm[k - 1]) + 1 for k in members))
        j2 = s.focal_sets.index(relabeled)
        np.testing.assert_allclose(permuted_bary[j2], bary[j], rtol=1e-12, atol=1e-12)


@given(st.integers(min_value=0, max_value=2**31), st.booleans())
@settings(max_examples=100, deadline=None)
def test_assembled_lhs_is_exactly_symmetric(seed, with_transfer):
    rng = np.random.default_rng(seed)
    s = enumerate_focal_sets(int(rng.integers(2, 5)))
    n = int(rng.integers(2, 8))
    raw = rng.random((n, s.n_sets + 1))
    raw /= raw.sum(axis=1, keepdims=True)
    part = CredalPartition(masses=raw[:, :-1], empty_mass=raw[:, -1])
    data = Dataset(rng.normal(size=(n, 2)))
    assoc = source = None
    cfg = FitConfig()
    if with_transfer:
        src_structure = enumerate_focal_sets(2)
        source = SourceKnowledge(
            barycenters=rng.normal(size=(3, 2)), structure=src_structure
        )
        r = rng.random((3, s.n_sets))
        r /= r.sum(axis=1, keepdims=True)
        assoc = AssociationMatrix(r=r)
        cfg = FitConfig(lam=float(rng.uniform(0.1, 50.0)))
    lhs, _ = assemble_system(data, part, assoc, source, s, cfg)
    np.testing.assert_array_equal(lhs, lhs.T)


@given(st.integers(min_value=0, max_value=2**31))
@settings(max_examples=150, deadline=None)
def test_mass_update_is_first_order_optimal(seed):
    # moving 1e-4 of mass between any two slots never helps by more than 1e-8
    rng = np.random.default_rng(seed)
    s = enumerate_focal_sets(2)
    n = int(rng.integers(1, 5))
    d = rng.uniform(1e-3, 100.0, size=(n, s.n_sets))
    cfg = FitConfig()
    part = update_masses(d, s, cfg)
    cards = s.cardinalities.astype(float)

    def j_value(m, empty):
        return float((cards * m**2 * d).sum() + cfg.delta**2 * (empty**2).sum())

    base = j_value(part.masses, part.empty_mass)
    full = np.column_stack([part.masses, part.empty_mass])
    i = int(rng.integers(0, n))
    give, take = rng.choice(s.n_sets + 1, size=2, replace=False)
    step = min(1e-4, full[i, give])
    perturbed = full.copy()
    perturbed[i, give] -= step
    perturbed[i, take] += step
    assert j_value(perturbed[:, :-1], perturbed[:, -1]) >= base - 1e-8


@given(st.integers(min_value=0, max_value=2**31))
@settings(max_examples=100)
def test_solver_residuals_stay_small(seed):
    rng = np.random.default_rng(seed)
    c = int(rng.integers(1, 6))
    a = rng.normal(size=(c, c))
    lhs = a @ a.T + (1.0 + c) * np.eye(c)
    rhs = rng.normal(size=(c, 3))
    v = solve_centers(lhs, rhs)
    assert np.max(np.abs(lhs @ v - rhs)) <= 1e-10


@given(st.integers(min_value=0, max_value=2**31))
@settings(max_examples=50, deadline=None)
def test_masses_match_naive_formula(seed):
    rng = np.random.default_rng(seed)
    s = enumerate_focal_sets(3, 2)
    d = rng.uniform(1e-3, 1e3, size=(4, s.n_sets))
    cfg = FitConfig(alpha=float(rng.uniform(0.0, 2.0)), beta=float(rng.uniform(1.5, 3.0)))
    part = update_masses(d, s, cfg)
    m, empty = _naive.masses(d, s.focal_sets, cfg.alpha, cfg.beta, cfg.delta)
    np.testing.assert_allclose(part.masses, m, rtol=1e-11)
    np.testing.assert_allclose(part.empty_mass, empty, rtol=0, atol=1e-11)

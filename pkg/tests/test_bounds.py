import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energybounds.bounds import (
    BOUND_NAMES,
    BoundEntry,
    BoundNotApplicable,
    bound_caporossi,
    bound_component_log,
    bound_gamma_log,
    bound_gamma_log_nonsingular,
    bound_mcclelland,
    bound_nullity_frobenius,
    bound_nullity_log,
    bound_rayleigh_log,
    energy,
    gamma_limit,
    gamma_sequence,
    h_function,
    pick_winner,
    spectral_counts,
    spectral_profile,
    survey,
)
from energybounds.casestudies import join_graph
from energybounds.graphs import (
    Graph,
    blowup,
    broom,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    path,
    random_connected_graph,
    random_graph,
    star,
)
from energybounds.linalg import SymMatrix, eigen_symmetric

UNION = disjoint_union([complete(4), complete(2), complete(1)])
E_P4 = 2 * math.sqrt(5)


def _energy(G):
    return energy(eigen_symmetric(G.adjacency()))


# ---------------------------------------------------------------- frozen examples


@pytest.mark.parametrize("G, expected", [(complete(3), 4.0), (complete_bipartite(1, 1), 2.0), (path(4), E_P4)])
def test_energy_examples(G, expected):
    assert _energy(G) == pytest.approx(expected, abs=1e-12)


def test_caporossi_examples():
    assert bound_caporossi(complete_bipartite(2, 3)) == pytest.approx(2 * math.sqrt(6))
    assert bound_caporossi(complete_bipartite(2, 3)) == pytest.approx(_energy(complete_bipartite(2, 3)), rel=1e-12)
    assert bound_caporossi(complete(3)) == pytest.approx(3.4641016151, abs=1e-9)
    assert bound_caporossi(complete(2)) == 2.0
    with pytest.raises(BoundNotApplicable):
        bound_caporossi(Graph(3))


def test_mcclelland_examples():
    assert bound_mcclelland(complete(3)) == pytest.approx(math.sqrt(6 + 6 * 2 ** (2 / 3)), rel=1e-14)
    assert bound_mcclelland(complete(3)) == pytest.approx(3.94010, abs=1e-5)
    assert bound_mcclelland(complete_bipartite(2, 3)) == pytest.approx(math.sqrt(12), rel=1e-14)
    assert bound_mcclelland(complete(2)) == 2.0


def test_nullity_frobenius_examples():
    assert bound_nullity_frobenius(star(4)) == pytest.approx(2 * math.sqrt(3), rel=1e-14)
    assert bound_nullity_frobenius(star(4)) == pytest.approx(_energy(star(4)), rel=1e-12)
    assert bound_nullity_frobenius(path(4)) == pytest.approx(math.sqrt(18), rel=1e-14)
    assert bound_nullity_frobenius(path(4)) <= E_P4
    assert bound_nullity_frobenius(SymMatrix([[0, 2], [2, 0]])) == pytest.approx(4.0, rel=1e-14)
    with pytest.raises(BoundNotApplicable):
        bound_nullity_frobenius(Graph(4))


def test_nullity_log_examples():
    assert bound_nullity_log(complete(4)) == pytest.approx(6.0, abs=1e-12)
    assert bound_nullity_log(UNION) == pytest.approx(8.0, abs=1e-12)
    assert bound_nullity_log(complete(3)) == pytest.approx(4.0, abs=1e-12)
    for n in range(2, 13):
        assert bound_nullity_log(complete(n)) == pytest.approx(2 * (n - 1), abs=1e-9)
    with pytest.raises(BoundNotApplicable):
        bound_nullity_log(Graph(2))
    with pytest.raises(BoundNotApplicable):
        bound_nullity_log(SymMatrix([[-1.0, 0.0], [0.0, -2.0]]))


def test_spectral_counts_examples():
    k4 = spectral_counts(complete(4))
    assert (k4.c, k4.f, k4.kappa, k4.applicable) == (3, 0, 0, True)
    # union(K4, K2, K1) has eigenvalues 3, 1, -1, -1, -1, -1, 0: four eigenvalues equal -1
    u = spectral_counts(UNION)
    assert (u.c, u.f, u.kappa) == (4, 1, 1)
    assert u.c + u.f + u.kappa + 1 == UNION.n
    k2 = spectral_counts(complete(2))
    assert (k2.c, k2.f, k2.kappa) == (1, 0, 0)


def test_spectral_counts_inapplicable():
    p4 = spectral_counts(path(4))
    assert not p4.applicable and "modulus 1" in p4.note
    diag = spectral_counts(SymMatrix([[1.0, 0.0], [0.0, 2.0]]))
    assert not diag.applicable and "trace" in diag.note


def test_rayleigh_log_examples():
    assert bound_rayleigh_log(complete(3).adjacency(), np.ones(3)) == pytest.approx(4.0, abs=1e-12)
    v = bound_rayleigh_log(path(4).adjacency(), np.ones(4))
    assert v == pytest.approx(1.5 + 3 - math.log(1.5), rel=1e-14)
    assert v == pytest.approx(4.0945, abs=1e-4) and v <= E_P4
    with pytest.raises(BoundNotApplicable, match="< 1"):
        bound_rayleigh_log(complete(2).adjacency(), [1.0, 0.0])
    with pytest.raises(BoundNotApplicable):
        bound_rayleigh_log(complete(2).adjacency(), [1.0, -1.0])
    with pytest.raises(BoundNotApplicable):
        bound_rayleigh_log(complete(2).adjacency(), [0.0, 0.0])


def test_component_log_examples():
    assert bound_component_log(complete(4), 0) == pytest.approx(6.0, abs=1e-12)
    assert bound_component_log(UNION, (0, 1, 2, 3)) == pytest.approx(8.0, abs=1e-12)
    assert bound_component_log(path(4), 0) == pytest.approx(4.0945, abs=1e-4)
    with pytest.raises(BoundNotApplicable):
        bound_component_log(UNION, 2)
    with pytest.raises(ValueError):
        bound_component_log(UNION, (0, 1))


def test_gamma_sequence_examples():
    assert gamma_sequence(path(3), 3) == pytest.approx([math.sqrt(2)] * 4, rel=1e-14)
    g = gamma_sequence(path(4), 1)
    assert g[0] == pytest.approx(math.sqrt(10 / 4), rel=1e-14)
    assert g[1] == pytest.approx(math.sqrt(26 / 10), rel=1e-14)
    seq, converged = gamma_limit(path(4))
    assert converged and seq[-1] == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-9)
    assert gamma_sequence(star(4), 0) == pytest.approx([math.sqrt(3)], rel=1e-14)
    with pytest.raises(ValueError):
        gamma_sequence(UNION, 2)


def test_gamma_log_examples():
    assert bound_gamma_log(complete(4), 0, 0) == pytest.approx(6.0, abs=1e-12)
    g0, g1 = math.sqrt(2.5), math.sqrt(2.6)
    assert bound_gamma_log(path(4), 0, 0) == pytest.approx(g0 + 3 - math.log(g0), rel=1e-14)
    assert bound_gamma_log(path(4), 0, 1) == pytest.approx(g1 + 3 - math.log(g1), rel=1e-14)
    assert bound_gamma_log(path(4), 0, 0) == pytest.approx(4.12299, abs=1e-5)
    assert bound_gamma_log(path(4), 0, 1) == pytest.approx(4.13470, abs=1e-5)
    assert bound_gamma_log(path(4), 0, 1) <= E_P4
    for k in (0, 3, 10):
        assert bound_gamma_log(complete(2), 0, k) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(BoundNotApplicable):
        bound_gamma_log(path(4), 0, -1)


def test_h_function_is_increasing_above_one():
    xs = np.linspace(1.0, 20.0, 200)
    vals = [h_function(x, 5, 7) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------- survey


def test_survey_examples():
    r = survey(broom(10))
    assert r.value("nullity_frobenius") > r.value("caporossi")
    r = survey(broom(40))
    assert r.value("caporossi") > r.value("nullity_frobenius")
    r = survey(join_graph(1, 7))
    assert r.winner == "caporossi"
    assert survey(complete(3)).winner == "nullity_log"
    assert survey(complete(2)).winner == "caporossi"
    assert survey(complete_bipartite(2, 3)).winner in ("caporossi", "nullity_frobenius")


def test_survey_shape_and_applicability():
    r = survey(UNION)
    assert [e.name for e in r.entries] == list(BOUND_NAMES)
    assert r.notes == ["isolated vertices present"]
    assert r.violations == []
    assert r.gaps["nullity_log"] == pytest.approx(0.0, abs=1e-9)
    m = survey(SymMatrix([[0.0, 0.5], [0.5, 0.0]]))
    assert not m.entry("caporossi").applicable and not m.entry("gamma_log").applicable
    assert not m.entry("rayleigh_log").applicable
    empty = survey(Graph(0))
    assert empty.winner is None and not any(e.applicable for e in empty.entries)
    iso = survey(Graph(3))
    # only the determinant form survives, and it degenerates to 0 = energy
    assert iso.kappa == 3 and iso.winner == "mcclelland" and iso.value("mcclelland") == 0.0


def test_survey_gamma_uses_component_with_largest_eigenvalue():
    G = disjoint_union([path(2), complete(4)])
    e = survey(G).entry("gamma_log")
    assert e.applicable and e.value == pytest.approx(bound_nullity_log(G), abs=1e-8)
    assert "component 1" in e.note


def test_survey_kmax():
    r0 = survey(path(6), kmax=0).value("gamma_log")
    r5 = survey(path(6), kmax=5).value("gamma_log")
    assert r0 <= r5 <= bound_nullity_log(path(6)) + 1e-12


def test_pick_winner_ties_follow_name_order():
    entries = [BoundEntry("caporossi", 2.0, True), BoundEntry("nullity_log", 2.0 + 1e-15, True)]
    assert pick_winner(entries) == "caporossi"
    entries.append(BoundEntry("gamma_log", 3.0, True))
    assert pick_winner(entries) == "gamma_log"
    assert pick_winner([BoundEntry("caporossi", None, False)]) is None


# ---------------------------------------------------------------- properties


def test_soundness_random(rng):
    for _ in range(300):
        n = int(rng.integers(1, 13))
        G = random_graph(n, float(rng.choice([0.2, 0.5, 0.8])), rng)
        r = survey(G, kmax=int(rng.integers(0, 6)))
        assert r.violations == [], (G, r)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.lists(st.floats(-3, 3, allow_nan=False), min_size=28, max_size=28))
def test_soundness_real_matrices(n, raw):
    a = np.zeros((n, n))
    a[np.triu_indices(n)] = raw[: n * (n + 1) // 2]
    M = SymMatrix(a + np.triu(a, 1).T)
    r = survey(M)
    assert r.violations == []


def test_kappa_zero_reduction_bit_identical(rng):
    seen = 0
    for _ in range(200):
        G = random_graph(int(rng.integers(2, 11)), 0.5, rng)
        if spectral_profile(G).kappa == 0:
            seen += 1
            assert bound_nullity_frobenius(G) == bound_mcclelland(G)
    assert seen > 20


def test_rayleigh_dominated_by_log_bound(rng):
    for _ in range(200):
        G = random_graph(int(rng.integers(2, 11)), 0.6, rng)
        x = rng.random(G.n)
        try:
            v = bound_rayleigh_log(G.adjacency(), x)
        except BoundNotApplicable:
            continue
        assert v <= bound_nullity_log(G) + 1e-9


def test_gamma_chain_monotone(rng):
    for _ in range(60):
        G = random_connected_graph(int(rng.integers(2, 15)), 0.3, rng)
        vals = [bound_gamma_log(G, 0, k) for k in range(8)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= bound_nullity_log(G) + 1e-9


def test_gamma_nonsingular_form_matches(rng):
    hits = 0
    for _ in range(150):
        G = random_connected_graph(int(rng.integers(2, 11)), 0.5, rng)
        if spectral_profile(G).kappa:
            with pytest.raises(BoundNotApplicable):
                bound_gamma_log_nonsingular(G, 0)
            continue
        hits += 1
        for k in (0, 2, 5):
            assert bound_gamma_log_nonsingular(G, k) == pytest.approx(bound_gamma_log(G, 0, k), rel=1e-13)
    assert hits > 10


def test_regular_graphs_have_stationary_gamma():
    for G, r in [(cycle(7), 2), (complete(6), 5), (complete_bipartite(3, 3), 3)]:
        assert gamma_sequence(G, 6) == pytest.approx([r] * 7, rel=1e-14)


def test_blowup_covariance(rng):
    for _ in range(20):
        G = random_graph(int(rng.integers(2, 8)), 0.6, rng)
        if G.m == 0:
            continue
        base = spectral_profile(G)
        for t in (2, 3):
            H = blowup(G, t)
            p = spectral_profile(H)
            assert p.kappa == G.n * (t - 1) + base.kappa
            assert p.ups == t ** (G.n - base.kappa) * base.ups
            assert p.energy == pytest.approx(t * base.energy, rel=1e-9)
            assert bound_nullity_frobenius(H) == pytest.approx(t * bound_nullity_frobenius(G), rel=1e-9)


def test_profile_is_memoised():
    G = path(5)
    assert spectral_profile(G) is spectral_profile(G)
    # integer input: kappa comes from the exact rank, the tolerance is irrelevant
    assert spectral_profile(G, zero_tol=1e-6).kappa == 1
    M = SymMatrix([[0.0, 1e-7], [1e-7, 0.0]])
    assert spectral_profile(M).kappa == 0
    assert spectral_profile(M, zero_tol=1e-6).kappa == 2

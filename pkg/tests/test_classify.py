import math

import numpy as np
import pytest

from corpus import bipartite_family, control_set, is_bipartite_family, is_unit_family, unit_family
from energybounds.bounds import bound_nullity_frobenius, bound_nullity_log, spectral_profile
from energybounds.classify import (
    certify_equal_moduli,
    certify_unit_moduli,
    find_strictness_witness,
    match_bipartite_union,
    match_clique_matching_union,
)
from energybounds.graphs import Graph, complete, complete_bipartite, disjoint_union, path, random_graph
from energybounds.linalg import SymMatrix, eigen_symmetric


def spec(G):
    return eigen_symmetric(G.adjacency() if isinstance(G, Graph) else G)


def _tight(bound, energy):
    return abs(bound - energy) <= 1e-9 * max(1.0, energy)


# ---------------------------------------------------------------- examples


def test_equal_moduli_examples():
    c = certify_equal_moduli(spec(complete_bipartite(2, 3)))
    assert c is not None and c.params["modulus"] == pytest.approx(math.sqrt(6))
    assert certify_equal_moduli(spec(complete(3))) is None
    assert certify_equal_moduli(spec(complete(2))) is not None
    assert certify_equal_moduli(spec(Graph(3))) is None


def test_equal_moduli_block_form():
    K = complete_bipartite(2, 3)
    assert certify_equal_moduli(spec(K), K.adjacency()).params["block_form"] is True
    M = SymMatrix([[0, 2], [2, 0]])
    assert certify_equal_moduli(spec(M), M).params["block_form"] is True
    # equal moduli without the bipartite shape: a signed 4-cycle has spectrum +-sqrt2 twice
    S = SymMatrix([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, -1], [1, 0, -1, 0]])
    c = certify_equal_moduli(spec(S), S)
    assert c is not None and "block_form" not in c.params


def test_unit_moduli_examples():
    assert certify_unit_moduli(spec(complete(5))) is not None
    assert certify_unit_moduli(spec(path(4))) is None
    u = disjoint_union([complete(4), complete(2), complete(1)])
    assert certify_unit_moduli(spec(u)) is not None
    assert certify_unit_moduli(spec(Graph(2))) is None


def test_bipartite_union_examples():
    c = match_bipartite_union(disjoint_union([complete_bipartite(1, 4), complete_bipartite(2, 2)]))
    assert c is not None and c.params["parts"] == [(1, 4), (2, 2)]
    assert match_bipartite_union(disjoint_union([complete_bipartite(1, 2), complete_bipartite(2, 2)])) is None
    for a, b in [(1, 1), (2, 3), (4, 5)]:
        c = match_bipartite_union(complete_bipartite(a, b))
        assert c.params["kappa"] + 2 == a + b
    assert match_bipartite_union(path(4)) is None
    assert match_bipartite_union(Graph(3)) is None


def test_bipartite_union_tolerates_isolated_vertices():
    c = match_bipartite_union(disjoint_union([complete_bipartite(2, 2), Graph(2)]))
    assert c.params["isolated"] == 2 and c.residual < 1e-9


def test_clique_matching_examples():
    c = match_clique_matching_union(disjoint_union([complete(4), complete(2), complete(1)]))
    assert c.params["family"] == "clique"
    assert (c.params["n"], c.params["ell"], c.params["kappa"]) == (7, 3, 1)
    c = match_clique_matching_union(disjoint_union([complete(2), complete(2), complete(1)]))
    assert c.params["family"] == "matching"
    assert match_clique_matching_union(disjoint_union([complete(4), path(3)])) is None
    assert match_clique_matching_union(disjoint_union([complete(4), complete(3)])) is None
    assert match_clique_matching_union(Graph(4)) is None


def test_witness_examples():
    w = find_strictness_witness(path(3).adjacency())
    assert w.kind == "path-submatrix" and w.indices == (0, 1, 2)
    assert w.value == pytest.approx(math.sqrt(2))
    assert find_strictness_witness(complete(3).adjacency()) is None
    w = find_strictness_witness(path(4))
    assert w.kind == "path-submatrix" and sorted(w.indices) == [0, 1, 2]
    assert find_strictness_witness(complete(2)) is None


def test_witness_rayleigh_block():
    # a triangle with one heavy edge has no path block but an eigenvalue below -1
    M = SymMatrix([[0, 3, 1], [3, 0, 1], [1, 1, 0]])
    w = find_strictness_witness(M)
    assert w.kind == "rayleigh-triple" and w.value < -1
    v = np.array(w.vector)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert float(v @ M.entries @ v) == pytest.approx(w.value, abs=1e-12)
    assert w.value == pytest.approx(np.linalg.eigvalsh(M.entries)[0], abs=1e-12)


def test_witness_probe_budget():
    G = disjoint_union([complete(61), path(3)])
    assert find_strictness_witness(G, probes=10) is None
    assert find_strictness_witness(G, probes=10**6) is not None


def test_certificates_serialise():
    c = match_bipartite_union(complete_bipartite(1, 2))
    assert set(c.as_dict()) == {"bound", "kind", "params", "residual"}
    w = find_strictness_witness(path(3))
    assert w.as_dict()["indices"] == [0, 1, 2]


# ---------------------------------------------------------------- properties


def test_certificate_iff_tight_frobenius():
    corpus = bipartite_family() + unit_family() + control_set(200, seed=3)
    for label, G in corpus:
        if G.m == 0:
            continue
        p = spectral_profile(G)
        tight = _tight(bound_nullity_frobenius(G), p.energy)
        assert (certify_equal_moduli(p.spectrum) is not None) == tight, label
        if match_bipartite_union(G) is not None:
            assert tight and certify_equal_moduli(p.spectrum) is not None, label


def test_certificate_iff_tight_log():
    corpus = bipartite_family() + unit_family() + control_set(200, seed=4)
    for label, G in corpus:
        if G.m == 0:
            continue
        p = spectral_profile(G)
        tight = _tight(bound_nullity_log(G), p.energy)
        assert (certify_unit_moduli(p.spectrum) is not None) == tight, label
        if match_clique_matching_union(G) is not None:
            assert tight, label


def test_structural_matchers_agree_with_networkx():
    for label, G in control_set(300, seed=5):
        assert (match_bipartite_union(G) is not None) == is_bipartite_family(G), label
        assert (match_clique_matching_union(G) is not None) == is_unit_family(G), label


def test_witness_implies_strict(rng):
    fired = 0
    for _ in range(300):
        G = random_graph(int(rng.integers(3, 13)), float(rng.random()), rng)
        w = find_strictness_witness(G)
        if w is None:
            continue
        fired += 1
        assert bound_nullity_log(G) < spectral_profile(G).energy - 1e-9
    assert fired > 100


def test_witness_on_random_real_matrices(rng):
    for _ in range(100):
        n = int(rng.integers(3, 8))
        a = rng.normal(size=(n, n))
        np.fill_diagonal(a, 0.0)
        M = SymMatrix(a + a.T)
        w = find_strictness_witness(M)
        if w is not None and spectral_profile(M).rho > 0:
            assert bound_nullity_log(M) < spectral_profile(M).energy - 1e-9

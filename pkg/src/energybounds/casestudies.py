"""Three families where the nullity Frobenius bound is compared with 2 sqrt(m)."""

from __future__ import annotations

import math
from typing import List

import numpy as np

from .bounds import bound_caporossi, bound_nullity_frobenius, spectral_profile
from .graphs import Graph, blowup, broom, complete_bipartite, join
from .linalg import char_poly

JOIN_RATIO = 6.0 * math.sqrt(3.0) - 4.0
JOIN_TIE_TOL = 1e-6


def broom_charpoly(n: int) -> List[int]:
    """x^(n-4) (x^4 - (n-1) x^2 + (n-3)), lowest degree first."""
    c = [0] * (n + 1)
    c[n] = 1
    c[n - 2] = -(n - 1)
    c[n - 4] = n - 3
    return c


def tree_rows(n_min: int = 4, n_max: int = 40) -> List[dict]:
    if not 4 <= n_min <= n_max <= 60:
        raise ValueError("tree case study needs 4 <= n_min <= n_max <= 60")
    rows = []
    for n in range(n_min, n_max + 1):
        T = broom(n)
        p = spectral_profile(T)
        frob = bound_nullity_frobenius(T)
        cap = bound_caporossi(T)
        predicted = (n - 1) ** 2 <= 36 * (n - 3)
        observed = frob > cap
        rows.append(
            {
                "n": n,
                "m": T.m,
                "kappa": p.kappa,
                "upsilon": p.ups,
                "charpoly_ok": char_poly(T.adjacency()) == broom_charpoly(n),
                "frobenius_bound": frob,
                "caporossi_bound": cap,
                "predicted_improves": predicted,
                "observed_improves": observed,
                "match": predicted == observed,
            }
        )
    return rows


def join_spectrum_expected(r1: int, r2: int) -> np.ndarray:
    """{0^(2r1+2r2-4), -r1, -r2} plus the eigenvalues of [[r1, 2 sqrt(r1 r2)], [2 sqrt(r1 r2), r2]]."""
    off = 2.0 * math.sqrt(r1 * r2)
    F = np.array([[r1, off], [off, r2]], dtype=float)
    vals = np.concatenate([np.zeros(2 * r1 + 2 * r2 - 4), [-r1, -r2], np.linalg.eigvalsh(F)])
    return np.sort(vals)[::-1]


def join_graph(r1: int, r2: int) -> Graph:
    return join(complete_bipartite(r1, r1), complete_bipartite(r2, r2))


def join_rows(r_max: int = 10, r_min: int = 1) -> List[dict]:
    if not 1 <= r_min <= r_max <= 10:
        raise ValueError("join case study needs 1 <= r_min <= r_max <= 10")
    rows = []
    for r1 in range(r_min, r_max + 1):
        for r2 in range(r_min, r_max + 1):
            rows.append(join_row(r1, r2))
    return rows


def join_row(r1: int, r2: int) -> dict:
    G = join_graph(r1, r2)
    p = spectral_profile(G)
    frob = bound_nullity_frobenius(G)
    cap = bound_caporossi(G)
    margin = r1 * r1 + r2 * r2 - r1 * r2 * JOIN_RATIO
    predicted = margin <= 0.0
    observed = frob >= cap
    boundary = abs(margin) < JOIN_TIE_TOL
    spec_err = float(np.max(np.abs(p.spectrum.values - join_spectrum_expected(r1, r2))))
    return {
        "r1": r1,
        "r2": r2,
        "n": G.n,
        "m": G.m,
        "kappa": p.kappa,
        "upsilon": p.ups,
        "upsilon_expected": -3 * r1 * r1 * r2 * r2,
        "frobenius_bound": frob,
        "caporossi_bound": cap,
        "margin": margin,
        "predicted_improves": predicted,
        "observed_improves": observed,
        "match": predicted == observed or boundary,
        "spectrum_error": spec_err,
    }


def blowup_rows(G: Graph, t_max: int = 4) -> List[dict]:
    if not 1 <= t_max <= 4:
        raise ValueError("blow-up case study needs 1 <= t <= 4")
    if G.m == 0:
        raise ValueError("blow-up case study needs a graph with at least one edge")
    base = spectral_profile(G)
    base_frob = bound_nullity_frobenius(G)
    base_improves = 2.0 * math.sqrt(G.m) <= base_frob
    rows = []
    for t in range(1, t_max + 1):
        H = blowup(G, t)
        p = spectral_profile(H)
        frob = bound_nullity_frobenius(H)
        cap = bound_caporossi(H)
        e_expected = t * base.energy
        rows.append(
            {
                "t": t,
                "n": H.n,
                "m": H.m,
                "kappa": p.kappa,
                "energy": p.energy,
                "energy_ok": abs(p.energy - e_expected) <= 1e-7 * max(1.0, e_expected),
                "kappa_ok": p.kappa == G.n * (t - 1) + base.kappa,
                "upsilon": p.ups,
                "upsilon_ok": p.ups == t ** (G.n - base.kappa) * base.ups,
                "frobenius_bound": frob,
                "frobenius_scale_ok": abs(frob - t * base_frob) <= 1e-9 * max(1.0, t * base_frob),
                "caporossi_bound": cap,
                "chain_ok": (not base_improves) or cap <= frob * (1 + 1e-12),
            }
        )
    return rows

"""Equality certificates and strictness witnesses for the nullity bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .bounds import (
    MODULUS_TOL,
    SOUNDNESS_RTOL,
    _frobenius_form,
    _log_form,
    _matrix,
    spectral_profile,
    unit_moduli_profile,
)
from .graphs import Graph, components
from .linalg import Spectrum, SymMatrix, upsilon_rank

#: Relative tolerance for "all nonzero moduli agree".
EQUAL_MODULI_RTOL = 1e-8
#: Triple budget used when n > 60 and no explicit probe count is given.
DEFAULT_PROBES = 200_000


@dataclass(frozen=True)
class EqualityCertificate:
    bound: str  # "nullity_frobenius" or "nullity_log"
    kind: str  # equal-moduli | unit-moduli | bipartite-union | clique-matching-union
    params: dict
    residual: float

    def as_dict(self):
        return {"bound": self.bound, "kind": self.kind, "params": self.params, "residual": self.residual}


@dataclass(frozen=True)
class StrictnessWitness:
    """A 3x3 zero-diagonal principal block forcing an eigenvalue below -1.

    ``indices`` is ``(end, middle, end)`` for a path block and sorted for a
    Rayleigh block; ``params`` are the block entries ``(a, b, c)`` with
    ``a = M[x,y]``, ``b = M[y,z]``, ``c = M[x,z]``. For a Rayleigh block
    ``vector`` is a unit vector whose quotient ``value`` is below -1. With a
    unit vector the displayed quotient and x^T R1 x / x^T x coincide, so the
    smallest block eigenvalue is the exact test.
    """

    kind: str  # path-submatrix | rayleigh-triple
    indices: Tuple[int, int, int]
    params: Tuple[float, float, float]
    value: float
    vector: Optional[Tuple[float, float, float]] = None
    note: str = field(default="")

    def as_dict(self):
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "params": list(self.params),
            "value": self.value,
            "vector": list(self.vector) if self.vector is not None else None,
            "note": self.note,
        }


def _tight(residual, energy):
    return residual <= SOUNDNESS_RTOL * max(1.0, energy)


def _frobenius_residual(S: Spectrum):
    e = float(np.sum(np.abs(S.values)))
    r = S.n - S.nullity
    return abs(e - _frobenius_form(S.source_frobenius_sq, r, upsilon_rank(S))), e


def _log_residual(S: Spectrum):
    e = float(np.sum(np.abs(S.values)))
    r = S.n - S.nullity
    return abs(e - _log_form(S.largest, r, upsilon_rank(S))), e


def _irreducible(M: SymMatrix) -> bool:
    a = M.entries != 0
    seen = np.zeros(M.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for v in np.flatnonzero(a[u] & ~seen):
            seen[v] = True
            frontier.append(int(v))
    return bool(seen.all())


def certify_equal_moduli(S: Spectrum, matrix: Optional[SymMatrix] = None) -> Optional[EqualityCertificate]:
    """All nonzero |lambda| equal: the Frobenius-type bound is attained.

    With ``matrix`` given and non-negative irreducible, the certificate also
    records whether the spectrum is ``{rho, -rho, 0^(n-2)}`` (the bipartite
    block form with a rank-one off-diagonal block).
    """
    nz = np.abs(S.nonzero)
    if nz.size == 0:
        return None
    top = float(nz.max())
    if float(nz.max() - nz.min()) > EQUAL_MODULI_RTOL * top:
        return None
    residual, e = _frobenius_residual(S)
    if not _tight(residual, e):
        return None
    params = {"modulus": top, "rank": int(nz.size), "kappa": S.nullity}
    if matrix is not None and np.all(matrix.entries >= 0) and _irreducible(matrix):
        vals = S.nonzero
        params["block_form"] = bool(
            vals.size == 2 and S.nullity == S.n - 2 and abs(vals[0] + vals[1]) <= EQUAL_MODULI_RTOL * top
        )
    return EqualityCertificate("nullity_frobenius", "equal-moduli", params, residual)


def certify_unit_moduli(S: Spectrum) -> Optional[EqualityCertificate]:
    """Every nonzero eigenvalue except the largest has modulus 1: the log-type bound is attained."""
    if S.nullity == S.n or not unit_moduli_profile(S):
        return None
    residual, e = _log_residual(S)
    if not _tight(residual, e):
        return None
    params = {"rho": S.largest, "rank": S.n - S.nullity, "kappa": S.nullity}
    return EqualityCertificate("nullity_log", "unit-moduli", params, residual)


def _bipartition(sub: Graph):
    color = [-1] * sub.n
    nbrs = sub.neighbors()
    color[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if color[v] < 0:
                color[v] = 1 - color[u]
                stack.append(v)
            elif color[v] == color[u]:
                return None
    a = color.count(0)
    return a, sub.n - a


def match_bipartite_union(G: Graph) -> Optional[EqualityCertificate]:
    """Every non-trivial component is K_{a,b} and all products a*b coincide.

    Isolated vertices are tolerated and counted (they only add zeros to the
    spectrum); the certificate notes them.
    """
    parts = []
    isolated = 0
    for sub, _ in components(G):
        if sub.n == 1:
            isolated += 1
            continue
        ab = _bipartition(sub)
        if ab is None or ab[0] * ab[1] != sub.m:
            return None
        parts.append((min(ab), max(ab)))
    if not parts or len({a * b for a, b in parts}) != 1:
        return None
    p = spectral_profile(G)
    ell = len(parts)
    if 2 * ell != p.n - p.kappa:
        raise RuntimeError(f"{ell} bipartite blocks inconsistent with kappa={p.kappa}, n={p.n}")
    residual = abs(p.energy - _frobenius_form(p.frob_sq, p.rank, p.ups))
    params = {"parts": parts, "isolated": isolated, "ell": ell, "kappa": p.kappa}
    if isolated:
        params["note"] = "isolated vertices present"
    return EqualityCertificate("nullity_frobenius", "bipartite-union", params, residual)


def match_clique_matching_union(G: Graph) -> Optional[EqualityCertificate]:
    """K_{n-l} plus isolated edges and vertices, or (no clique) a matching plus isolated vertices."""
    clique = None
    edges = isolated = 0
    for sub, _ in components(G):
        if sub.n == 1:
            isolated += 1
        elif sub.n == 2:
            edges += 1
        elif sub.m == sub.n * (sub.n - 1) // 2 and clique is None:
            clique = sub.n
        else:
            return None
    if clique is None and edges == 0:
        return None
    p = spectral_profile(G)
    if isolated != p.kappa:
        raise RuntimeError(f"isolated vertex count {isolated} != kappa {p.kappa}")
    if clique is None:
        params = {"family": "matching", "n": G.n, "kappa": p.kappa, "edges": edges}
    else:
        ell = G.n - clique
        params = {"family": "clique", "n": G.n, "ell": ell, "kappa": p.kappa, "edges": edges}
        if (ell - p.kappa) // 2 != edges:
            raise RuntimeError("clique/matching accounting failed")
    if certify_unit_moduli(p.spectrum) is None:
        raise RuntimeError(f"structural match {params} but spectrum lacks unit moduli")
    residual = abs(p.energy - _log_form(p.rho, p.rank, p.ups))
    return EqualityCertificate("nullity_log", "clique-matching-union", params, residual)


def find_strictness_witness(M, probes: Optional[int] = None) -> Optional[StrictnessWitness]:
    """First 3x3 block (lexicographic triples) that makes the log-type bound strict.

    All triples are scanned when n <= 60; above that at most ``probes``
    (default DEFAULT_PROBES) triples are examined.
    """
    if isinstance(M, Graph):
        M = M.adjacency()
    M = _matrix(M)
    if M.n < 3:
        return None
    cap = -1
    if M.n > 60:
        cap = DEFAULT_PROBES if probes is None else int(probes)
    kind, x, y, z, value, vec = kernels.triple_scan(M.entries, cap)
    if kind == kernels.NO_WITNESS:
        return None
    e = M.entries
    params = (float(e[x, y]), float(e[y, z]), float(e[x, z]))
    if kind == kernels.PATH_WITNESS:
        w = StrictnessWitness("path-submatrix", (x, y, z), params, value)
    else:
        w = StrictnessWitness(
            "rayleigh-triple",
            (x, y, z),
            params,
            value,
            tuple(float(v) for v in vec),
            note="quotient read with a unit vector; equals the smallest block eigenvalue",
        )
    if certify_unit_moduli(spectral_profile(M).spectrum) is not None:
        raise RuntimeError(f"witness {w} coexists with a unit-moduli certificate")
    return w

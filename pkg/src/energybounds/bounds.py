"""Energy lower bounds for graphs and real symmetric matrices.

Every bound is a plain function returning a float. A bound whose hypotheses
fail raises :class:`BoundNotApplicable`; :func:`survey` turns those into
``applicable=False`` entries so corpus runs never abort.

Throughout, ``r = n - kappa`` is the rank and ``ups`` the product of the
nonzero eigenvalues (``Upsilon_{n-kappa}``), exact on integer input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from . import kernels
from .graphs import Graph, components
from .linalg import (
    Spectrum,
    SymMatrix,
    bareiss_det,
    eigen_symmetric,
    frobenius_sq,
    rayleigh,
    upsilon,
    upsilon_rank,
)

#: Relative slack for "bound <= energy" and tightness checks.
SOUNDNESS_RTOL = 1e-9
#: gamma iteration stops once successive terms differ by less than this ...
GAMMA_STOP_TOL = 1e-10
#: ... or after this many steps.
GAMMA_MAX_STEPS = 200
#: Absolute tolerance on |lambda| = 1 for the unit-moduli profile.
MODULUS_TOL = 1e-8

BOUND_NAMES = (
    "caporossi",
    "mcclelland",
    "nullity_frobenius",
    "nullity_log",
    "component_log",
    "rayleigh_log",
    "gamma_log",
)

MatrixLike = Union[Graph, SymMatrix, np.ndarray, Sequence[Sequence[float]]]


class BoundNotApplicable(ValueError):
    """The hypotheses of a bound do not hold for this input."""


def _matrix(X) -> SymMatrix:
    if isinstance(X, Graph):
        return X.adjacency()
    if isinstance(X, SymMatrix):
        return X
    return SymMatrix(X)


@dataclass(frozen=True)
class SpectralProfile:
    """Everything the bounds read from a matrix, computed once."""

    n: int
    kappa: int
    frob_sq: Union[int, float]
    rho: float
    energy: float
    ups: Union[int, float]
    trace: Union[int, float]
    spectrum: Spectrum
    exact: bool

    @property
    def rank(self) -> int:
        return self.n - self.kappa


def spectral_profile(X: MatrixLike, zero_tol: Optional[float] = None) -> SpectralProfile:
    M = _matrix(X)
    # the tolerance is ignored on integer input (exact rank decides)
    key = ("profile", None if M.integer_exact else zero_tol)
    return M._cached(key, lambda: _build_profile(M, zero_tol))


def _build_profile(M: SymMatrix, zero_tol):
    spec = eigen_symmetric(M) if (M.integer_exact or zero_tol is None) else eigen_symmetric(M, zero_tol)
    kappa = spec.nullity
    if kappa == M.n:
        ups = 0
    elif M.integer_exact:
        ups = upsilon(M, M.n - kappa)
    else:
        ups = upsilon_rank(spec)
    if M.integer_exact:
        trace = sum(M.integer[i][i] for i in range(M.n))
    else:
        trace = float(np.trace(M.entries))
    return SpectralProfile(
        n=M.n,
        kappa=kappa,
        frob_sq=frobenius_sq(M),
        rho=spec.largest,
        energy=energy(spec),
        ups=ups,
        trace=trace,
        spectrum=spec,
        exact=M.integer_exact,
    )


# ---------------------------------------------------------------------------
# shared closed forms
# ---------------------------------------------------------------------------


def _abs_pow(ups, r):
    """|ups| ** (2/r), safe for integers beyond float range."""
    if ups == 0:
        return 0.0
    try:
        return float(abs(ups)) ** (2.0 / r)
    except OverflowError:
        return math.exp(2.0 * math.log(abs(ups)) / r)


def _frobenius_form(frob_sq, r, ups):
    return math.sqrt(frob_sq + r * (r - 1) * _abs_pow(ups, r))


def _log_form(x, r, ups):
    return x + r - 1 + math.log(abs(ups)) - math.log(x)


def h_function(x: float, rank: int, ups) -> float:
    """x + rank - 1 + ln|ups| - ln x: the log-type bound as a function of the spectral estimate."""
    return _log_form(x, rank, ups)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def energy(S: Spectrum) -> float:
    """Sum of absolute eigenvalues."""
    return float(np.sum(np.abs(S.values)))


def bound_caporossi(G: Graph) -> float:
    """2 sqrt(m)."""
    if G.m < 1:
        raise BoundNotApplicable("2*sqrt(m) needs at least one edge")
    return 2.0 * math.sqrt(G.m)


def bound_mcclelland(G: Graph) -> float:
    """sqrt(2m + n(n-1) |det A|^(2/n))."""
    if G.n < 1:
        raise BoundNotApplicable("empty vertex set")
    det = upsilon(G.adjacency(), G.n)
    return _frobenius_form(2 * G.m, G.n, det)


def bound_nullity_frobenius(X: MatrixLike, zero_tol: Optional[float] = None) -> float:
    """sqrt(|R|^2 + r(r-1) |Upsilon_r|^(2/r)) with r = n - kappa.

    For a graph ``|R|^2 = 2m``. Isolated vertices are allowed: they only raise
    kappa and the inequality stays valid.
    """
    p = spectral_profile(X, zero_tol)
    if p.rank == 0:
        raise BoundNotApplicable("every eigenvalue is zero (kappa = n)")
    return _frobenius_form(p.frob_sq, p.rank, p.ups)


def bound_nullity_log(X: MatrixLike, zero_tol: Optional[float] = None) -> float:
    """rho + r - 1 + ln|Upsilon_r| - ln rho, rho the largest eigenvalue."""
    p = spectral_profile(X, zero_tol)
    if p.rank == 0:
        raise BoundNotApplicable("every eigenvalue is zero (kappa = n)")
    if p.rho <= 0.0 or p.spectrum.zero_mask[0]:
        raise BoundNotApplicable(f"largest eigenvalue {p.rho:g} is not positive")
    return _log_form(p.rho, p.rank, p.ups)


@dataclass(frozen=True)
class SpectralCounts:
    """Eigenvalue counts implied by the unit-moduli profile.

    ``c``: eigenvalues equal to -1, ``f``: eigenvalues equal to 1 other than
    the largest, ``kappa``: zeros. ``observed`` holds the directly counted
    triple. Values are ints when ``applicable``, raw floats otherwise.
    """

    c: Union[int, float]
    f: Union[int, float]
    kappa: Union[int, float]
    applicable: bool
    observed: tuple
    note: str = ""


def _count_profile(spec: Spectrum):
    vals = spec.values
    rest = np.arange(spec.n) > 0
    c = int(np.count_nonzero(np.abs(vals + 1.0) <= MODULUS_TOL))
    f = int(np.count_nonzero(rest & (np.abs(vals - 1.0) <= MODULUS_TOL)))
    return c, f, spec.nullity


def unit_moduli_profile(spec: Spectrum) -> bool:
    """Every nonzero eigenvalue other than the largest has modulus 1 (within MODULUS_TOL)."""
    if spec.zero_mask[0] or spec.values[0] <= 0.0:
        return False
    rest = spec.values[1:][~spec.zero_mask[1:]]
    return bool(np.all(np.abs(np.abs(rest) - 1.0) <= MODULUS_TOL))


def spectral_counts(X: MatrixLike, zero_tol: Optional[float] = None) -> SpectralCounts:
    """(c, f, kappa) from |R|^2 and rho alone, for traceless matrices with the unit-moduli profile."""
    p = spectral_profile(X, zero_tol)
    F, rho = float(p.frob_sq), p.rho
    raw = ((F - rho * rho + rho) / 2.0, (F - rho * rho - rho) / 2.0, p.n - 1 + rho * rho - F)
    observed = _count_profile(p.spectrum)
    notes = []
    scale = max(1.0, F)
    if abs(p.trace) > 1e-9 * scale:
        notes.append("trace is not zero")
    if not unit_moduli_profile(p.spectrum):
        notes.append("nonzero eigenvalues other than the largest do not all have modulus 1")
    if any(abs(v - round(v)) > 1e-6 * scale for v in raw):
        notes.append("non-integer counts")
    if notes:
        return SpectralCounts(*raw, applicable=False, observed=observed, note="; ".join(notes))
    c, f, kappa = (int(round(v)) for v in raw)
    if (c, f, kappa) != observed or c + f + kappa + 1 != p.n:
        raise RuntimeError(f"spectral counts {(c, f, kappa)} disagree with spectrum {observed}")
    return SpectralCounts(c, f, kappa, applicable=True, observed=observed)


def bound_rayleigh_log(X: MatrixLike, x: Sequence[float], zero_tol: Optional[float] = None) -> float:
    """h(mu) with mu = x^T R x / x^T x for a non-negative vector x with mu >= 1."""
    M = _matrix(X)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise BoundNotApplicable("vector has negative entries")
    if not np.any(x):
        raise BoundNotApplicable("zero vector")
    mu = rayleigh(M, x)
    if mu < 1.0:
        raise BoundNotApplicable(f"Rayleigh quotient {mu:g} < 1")
    p = spectral_profile(M, zero_tol)
    if p.rank == 0:
        raise BoundNotApplicable("every eigenvalue is zero (kappa = n)")
    return _log_form(mu, p.rank, p.ups)


def _component(G: Graph, comp):
    comps = components(G)
    if isinstance(comp, (int, np.integer)):
        return comps[int(comp)]
    wanted = tuple(sorted(int(v) for v in comp))
    for sub, mapping in comps:
        if mapping == wanted:
            return sub, mapping
    raise ValueError(f"{wanted} is not a connected component")


def bound_component_log(G: Graph, comp) -> float:
    """h(2 m1 / n1) for a connected component (index or vertex set) with n1 >= 2.

    kappa and Upsilon are those of the whole graph.
    """
    sub, _ = _component(G, comp)
    if sub.n < 2:
        raise BoundNotApplicable("component has fewer than 2 vertices")
    p = spectral_profile(G)
    return _log_form(2.0 * sub.m / sub.n, p.rank, p.ups)


def gamma_sequence(G1: Graph, k_max: int) -> List[float]:
    """gamma^(0..k_max): sqrt(sum d_{k+1}^2 / sum d_k^2), from max-normalised walk vectors."""
    if G1.n < 2 or not G1.is_connected():
        raise ValueError("gamma sequence needs a connected graph on at least 2 vertices")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    return [float(v) for v in kernels.gamma_iterate(G1.adjacency_array(), k_max)]


def gamma_limit(G1: Graph, stop_tol: float = GAMMA_STOP_TOL, max_steps: int = GAMMA_MAX_STEPS):
    """Run the gamma iteration to the stopping rule; returns ``(sequence, converged)``."""
    if G1.n < 2 or not G1.is_connected():
        raise ValueError("gamma sequence needs a connected graph on at least 2 vertices")
    seq = kernels.gamma_iterate(G1.adjacency_array(), max_steps, stop_tol)
    converged = len(seq) >= 2 and abs(seq[-1] - seq[-2]) < stop_tol
    return [float(v) for v in seq], bool(converged)


def bound_gamma_log(G: Graph, comp, k: int) -> float:
    """h(gamma_1^(k)) where gamma_1 is the walk sequence of a component with 2 m1/n1 >= 1."""
    if k < 0:
        raise BoundNotApplicable("k must be >= 0")
    sub, _ = _component(G, comp)
    if sub.n < 2 or 2 * sub.m < sub.n:
        raise BoundNotApplicable("component needs 2 m1 / n1 >= 1")
    p = spectral_profile(G)
    g = gamma_sequence(sub, k)[k]
    return _log_form(g, p.rank, p.ups)


def bound_gamma_log_nonsingular(G: Graph, k: int) -> float:
    """gamma^(k) + n - 1 + ln|det A| - ln gamma^(k) for connected nonsingular G.

    Evaluated from the Bareiss determinant, independently of the nullity machinery.
    """
    if not G.is_connected() or G.n < 2:
        raise BoundNotApplicable("needs a connected graph on at least 2 vertices")
    det = bareiss_det(G.adjacency().integer)
    if det == 0:
        raise BoundNotApplicable("graph is singular")
    g = gamma_sequence(G, k)[k]
    return g + G.n - 1 + math.log(abs(det)) - math.log(g)


# ---------------------------------------------------------------------------
# survey
# ---------------------------------------------------------------------------


@dataclass
class BoundEntry:
    name: str
    value: Optional[float]
    applicable: bool
    note: str = ""


@dataclass
class BoundReport:
    ident: str
    n: int
    m: Optional[int]
    kappa: int
    rho: float
    energy: float
    entries: List[BoundEntry]
    winner: Optional[str]
    notes: List[str] = field(default_factory=list)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def value(self, name: str) -> Optional[float]:
        return self.entry(name).value

    @property
    def gaps(self) -> Dict[str, Optional[float]]:
        return {e.name: (self.energy - e.value if e.applicable else None) for e in self.entries}

    @property
    def violations(self) -> List[str]:
        """Applicable bounds exceeding the energy beyond SOUNDNESS_RTOL (should be empty)."""
        slack = SOUNDNESS_RTOL * max(1.0, self.energy)
        return [e.name for e in self.entries if e.applicable and e.value > self.energy + slack]


def pick_winner(entries: Iterable[BoundEntry], rtol: float = 1e-12) -> Optional[str]:
    """Largest applicable value; near-ties go to the earlier name in BOUND_NAMES."""
    best = None
    for e in entries:
        if not e.applicable:
            continue
        if best is None or e.value > best.value + rtol * max(1.0, abs(best.value)):
            best = e
    return best.name if best else None


def _attempt(name, fn, note=""):
    try:
        return BoundEntry(name, float(fn()), True, note)
    except BoundNotApplicable as exc:
        return BoundEntry(name, None, False, str(exc))


def survey(
    X: MatrixLike,
    kmax: Optional[int] = None,
    zero_tol: Optional[float] = None,
    ident: str = "",
) -> BoundReport:
    """Evaluate every bound that makes sense for ``X`` (graph or symmetric matrix).

    The component bounds use the component with the largest average degree
    (component_log) and the component carrying the largest eigenvalue
    (gamma_log, at depth ``kmax`` or until the stopping rule when ``None``).
    """
    graph = X if isinstance(X, Graph) else None
    if graph is not None and graph.n == 0:
        entries = [BoundEntry(name, None, False, "empty graph") for name in BOUND_NAMES]
        return BoundReport(ident, 0, 0, 0, 0.0, 0.0, entries, None)
    M = _matrix(X)
    p = spectral_profile(M, zero_tol)
    entries = []
    notes = []
    graph_only = "defined for graphs only"

    if graph is not None:
        entries.append(_attempt("caporossi", lambda: bound_caporossi(graph)))
        entries.append(_attempt("mcclelland", lambda: bound_mcclelland(graph)))
    else:
        entries.append(BoundEntry("caporossi", None, False, graph_only))
        entries.append(BoundEntry("mcclelland", None, False, graph_only))

    isolated = graph is not None and any(d == 0 for d in graph.degrees())
    frob_note = "isolated vertices present; the inequality still holds" if isolated else ""
    entries.append(_attempt("nullity_frobenius", lambda: bound_nullity_frobenius(M, zero_tol), frob_note))
    entries.append(_attempt("nullity_log", lambda: bound_nullity_log(M, zero_tol)))

    if graph is not None:
        comps = components(graph)
        big = [(2.0 * sub.m / sub.n, idx) for idx, (sub, _) in enumerate(comps) if sub.n >= 2]
        if big:
            avg, idx = max(big, key=lambda t: (t[0], -t[1]))
            entries.append(_attempt("component_log", lambda: bound_component_log(graph, idx), f"component {idx}"))
        else:
            entries.append(BoundEntry("component_log", None, False, "no component with n1 >= 2"))
    else:
        entries.append(BoundEntry("component_log", None, False, graph_only))

    entries.append(_attempt("rayleigh_log", lambda: bound_rayleigh_log(M, np.ones(M.n), zero_tol), "x = all-ones"))

    if graph is not None:
        entries.append(_gamma_entry(graph, comps, p, kmax))
    else:
        entries.append(BoundEntry("gamma_log", None, False, graph_only))

    if isolated:
        notes.append("isolated vertices present")
    return BoundReport(
        ident=ident,
        n=p.n,
        m=graph.m if graph is not None else None,
        kappa=p.kappa,
        rho=p.rho,
        energy=p.energy,
        entries=entries,
        winner=pick_winner(entries),
        notes=notes,
    )


def _gamma_entry(graph, comps, p, kmax):
    best = None
    for idx, (sub, _) in enumerate(comps):
        if sub.n < 2:
            continue
        lam = spectral_profile(sub).rho
        if best is None or lam > best[0] + 1e-12:
            best = (lam, idx, sub)
    if best is None:
        return BoundEntry("gamma_log", None, False, "no component with n1 >= 2")
    lam, idx, sub = best
    if p.rank == 0:
        return BoundEntry("gamma_log", None, False, "every eigenvalue is zero (kappa = n)")
    if kmax is None:
        seq, converged = gamma_limit(sub)
        k = len(seq) - 1
        tail = "converged" if converged else "step cap reached"
    else:
        seq = gamma_sequence(sub, kmax)
        k = kmax
        tail = "fixed depth"
    carries = abs(lam - p.rho) <= 1e-9 * max(1.0, p.rho)
    note = f"component {idx}, k={k} ({tail}); component {'carries' if carries else 'does not carry'} rho(G)"
    return BoundEntry("gamma_log", _log_form(seq[k], p.rank, p.ups), True, note)

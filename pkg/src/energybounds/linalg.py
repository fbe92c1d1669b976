"""Dense real symmetric matrices: spectra, exact char polys and ranks.

Integer matrices (adjacency matrices in particular) carry an exact payload of
Python ints; nullity, characteristic polynomial and the elementary symmetric
sums of their eigenvalues are then computed without rounding. Eigenvalues are
always floating point.

Sign convention: ``char_poly`` returns ``c[0..n]`` with
``det(xI - M) = sum(c[k] * x**k)``, and ``upsilon(M, k) == (-1)**k * c[n - k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels

Number = Union[int, float]

#: Relative factor of the default zero tolerance, ``ZERO_TOL_FACTOR * max(1, ||M||_F)``.
ZERO_TOL_FACTOR = 1e-8


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps did not reach the off-diagonal threshold."""


class NullityMismatchError(ValueError):
    """Exact rank and tolerance-based zero count disagree."""

    def __init__(self, exact, counted, tol):
        super().__init__(
            f"exact nullity {exact} disagrees with {counted} eigenvalues below tolerance {tol:g}"
        )
        self.exact = exact
        self.counted = counted
        self.tol = tol


class SymMatrix:
    """Immutable dense real symmetric matrix.

    ``entries`` is a read-only float64 array. When every entry is an integer
    the matrix is ``integer_exact`` and ``integer`` holds the same values as a
    tuple of tuples of Python ints.
    """

    __slots__ = ("entries", "integer", "_memo")

    def __init__(self, entries, *, sym_tol: float = 0.0):
        a = np.array(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix order must be at least 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        asym = np.max(np.abs(a - a.T))
        if asym > sym_tol * max(1.0, np.max(np.abs(a))):
            raise ValueError(f"matrix is not symmetric (max |M - M^T| = {asym:g})")
        if asym:
            a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.entries = a
        integral = np.all(a == np.round(a)) and np.max(np.abs(a)) < 2.0**53
        self.integer = tuple(tuple(int(v) for v in row) for row in a) if integral else None
        self._memo = {}

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def integer_exact(self) -> bool:
        return self.integer is not None

    def __repr__(self):
        kind = "int" if self.integer_exact else "float"
        return f"SymMatrix(n={self.n}, {kind})"

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries.tobytes()))

    def _cached(self, key, fn):
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = fn()
            return value


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in nonincreasing order plus the zero classification."""

    values: np.ndarray
    zero_mask: np.ndarray
    zero_tol: float
    source_frobenius_sq: float
    reconciled: bool = False

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def nullity(self) -> int:
        return int(np.count_nonzero(self.zero_mask))

    @property
    def nonzero(self) -> np.ndarray:
        return self.values[~self.zero_mask]

    @property
    def largest(self) -> float:
        return float(self.values[0])


def _as_matrix(M) -> SymMatrix:
    return M if isinstance(M, SymMatrix) else SymMatrix(M)


def default_zero_tol(M: SymMatrix) -> float:
    return ZERO_TOL_FACTOR * max(1.0, math.sqrt(float(frobenius_sq(M))))


def frobenius_sq(M: SymMatrix) -> Number:
    """Sum of squared entries; an exact int for integer matrices (``2m`` for graphs)."""
    M = _as_matrix(M)
    if M.integer_exact:
        return sum(v * v for row in M.integer for v in row)
    return float(np.sum(M.entries**2))


def eigen_symmetric(M: SymMatrix, zero_tol: Optional[float] = None, method: str = "jacobi") -> Spectrum:
    """All eigenvalues of ``M``.

    ``method="jacobi"`` runs cyclic Jacobi until the off-diagonal Frobenius
    norm is at most ``4 n eps ||M||_F`` (at most ``JACOBI_MAX_SWEEPS`` sweeps,
    :class:`EigenConvergenceError` beyond that). ``method="lapack"`` defers to
    ``numpy.linalg.eigvalsh``.

    On integer matrices the zero mask is fixed by the exact rank: the ``kappa``
    eigenvalues of smallest modulus are marked zero, whatever the tolerance.
    """
    M = _as_matrix(M)
    if zero_tol is None and method == "jacobi":
        return M._cached("spectrum", lambda: _eigen(M, None, method))
    return _eigen(M, zero_tol, method)


def _eigen(M, zero_tol, method):
    frob2 = float(frobenius_sq(M))
    if method == "jacobi":
        off_tol = kernels.jacobi_off_tol(M.n, math.sqrt(frob2))
        vals, sweeps, ok = kernels.jacobi_eigenvalues(M.entries, off_tol, kernels.JACOBI_MAX_SWEEPS)
        if not ok:
            raise EigenConvergenceError(
                f"Jacobi did not converge in {kernels.JACOBI_MAX_SWEEPS} sweeps (n={M.n})"
            )
    elif method == "lapack":
        vals = np.linalg.eigvalsh(M.entries)
    else:
        raise ValueError(f"unknown eigen method {method!r}")
    vals = np.asarray(vals, dtype=float)
    vals = vals[np.argsort(-vals, kind="stable")]
    tol = default_zero_tol(M) if zero_tol is None else float(zero_tol)
    mask = np.abs(vals) <= tol
    reconciled = False
    if M.integer_exact:
        kappa = M.n - exact_rank(M)
        if kappa != int(mask.sum()):
            mask = np.zeros(M.n, dtype=bool)
            mask[np.argsort(np.abs(vals), kind="stable")[:kappa]] = True
            reconciled = True
    vals.setflags(write=False)
    mask.setflags(write=False)
    return Spectrum(vals, mask, tol, frob2, reconciled)


def rayleigh(M: SymMatrix, x: Sequence[float]) -> float:
    """``x^T M x / x^T x``."""
    M = _as_matrix(M)
    x = np.asarray(x, dtype=float)
    if x.shape != (M.n,):
        raise ValueError(f"vector length {x.shape} does not match order {M.n}")
    xx = float(x @ x)
    if xx == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return float(x @ M.entries @ x) / xx


# ---------------------------------------------------------------------------
# exact integer elimination
# ---------------------------------------------------------------------------


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix (any shape) by fraction-free elimination."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            aic = a[i][col]
            row_i, row_r = a[i], a[rank]
            for j in range(col + 1, ncols):
                row_i[j] = (row_i[j] * p - aic * row_r[j]) // prev
            row_i[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_rank(M: SymMatrix) -> int:
    M = _as_matrix(M)
    if not M.integer_exact:
        raise ValueError("exact rank needs an integer matrix")
    return M._cached("rank", lambda: bareiss_rank(M.integer))


def nullity(M: SymMatrix, zero_tol: Optional[float] = None) -> tuple[int, float]:
    """Multiplicity of the eigenvalue 0 and the tolerance used for the float count.

    Integer input: ``n - rank`` from Bareiss elimination is authoritative and
    the tolerance count must agree with it, else :class:`NullityMismatchError`.
    """
    M = _as_matrix(M)
    tol = default_zero_tol(M) if zero_tol is None else float(zero_tol)
    spec = eigen_symmetric(M)
    counted = int(np.count_nonzero(np.abs(spec.values) <= tol))
    if M.integer_exact:
        kappa = M.n - exact_rank(M)
        if kappa != counted:
            raise NullityMismatchError(kappa, counted, tol)
        return kappa, tol
    return counted, tol


# ---------------------------------------------------------------------------
# characteristic polynomial and elementary symmetric sums
# ---------------------------------------------------------------------------


def _charpoly_int(rows, max_bits):
    # Faddeev-LeVerrier over Python ints; each division by k is exact.
    n = len(rows)
    A = np.array(rows, dtype=object)
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    c = [0] * (n + 1)
    c[n] = 1
    Mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        Mk = A.dot(Mk) + c[n - k + 1] * eye
        tr = sum(int(v) for v in A.dot(Mk).diagonal())
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError(f"inexact division at coefficient index {n - k}")
        if max_bits is not None and q.bit_length() > max_bits:
            raise OverflowError(
                f"char poly coefficient c[{n - k}] needs {q.bit_length()} bits (limit {max_bits})"
            )
        c[n - k] = q
    return c


def _charpoly_from_values(vals):
    # expand prod(x - lambda_i); coefficient error ~ C(n,k) k |d lambda| max|lambda|^(k-1)
    poly = np.array([1.0])
    for lam in vals:
        poly = np.append(poly, 0.0) - lam * np.insert(poly, 0, 0.0)
    return [float(v) for v in poly[::-1]]


def char_poly(M: SymMatrix, max_bits: Optional[int] = None) -> list:
    """Coefficients ``c[0..n]`` of ``det(xI - M)``, lowest degree first.

    Exact ints for integer matrices (``max_bits`` caps coefficient size and
    raises :class:`OverflowError` naming the index). Float matrices get the
    expansion of ``prod(x - lambda_i)`` over the Jacobi eigenvalues.
    """
    M = _as_matrix(M)
    if M.integer_exact:
        if max_bits is not None:
            return _charpoly_int(M.integer, max_bits)
        return list(M._cached("charpoly", lambda: _charpoly_int(M.integer, None)))
    return _charpoly_from_values(eigen_symmetric(M).values)


def upsilon(M: SymMatrix, k: int) -> Number:
    """k-th elementary symmetric sum of the eigenvalues, ``(-1)**k * c[n-k]``."""
    M = _as_matrix(M)
    if not 0 <= k <= M.n:
        raise ValueError(f"k={k} outside 0..{M.n}")
    c = char_poly(M)
    return (-1) ** k * c[M.n - k]


def principal_minor_sum_oracle(M: SymMatrix, k: int) -> Number:
    """Sum of all k x k principal minors, by enumeration. Test oracle, n <= 20."""
    M = _as_matrix(M)
    n = M.n
    if n > 20:
        raise ValueError(f"minor-sum oracle refuses n={n} > 20")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if M.integer_exact:
        rows = M.integer
        return sum(bareiss_det([[rows[i][j] for j in idx] for i in idx]) for idx in combinations(range(n), k))
    a = M.entries
    return float(sum(np.linalg.det(a[np.ix_(idx, idx)]) for idx in combinations(range(n), k)))


def upsilon_rank(S: Spectrum) -> float:
    """Product of the eigenvalues not masked as zero (``Upsilon_{n-kappa}``)."""
    nz = S.nonzero
    if nz.size == 0:
        raise ValueError("bound undefined for the zero matrix: every eigenvalue is zero")
    return float(np.prod(nz))

"""Exact rational linear algebra on small matrices, plus the float side.

Everything the catalog, metrics and stabilizer modules touch lives in
:class:`RatMat` (entries are :class:`fractions.Fraction`).  Floats appear only
for the group realizations (entries with ``e^z``) and for sampling the identity
component of a stabilizer through :func:`mat_exp`.

Polynomials are coefficient sequences, lowest degree first:
``[c0, c1, c2]`` is ``c0 + c1 t + c2 t**2``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefinite, NotSymmetric, Singular, ZeroPolynomial

FLOAT_TOL = 1e-9
CHOLESKY_FLOAT_TOL = 1e-12


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions, sympy Rationals and "p/q" strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are only accepted when they are exactly representable small rationals
        return Fraction(x)
    p = getattr(x, "p", None)
    q = getattr(x, "q", None)
    if p is not None and q is not None:
        return Fraction(int(p), int(q))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class RatMat:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("empty matrix")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        self.rows = data
        self._hash = None

    # construction ------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "RatMat":
        return cls([[0] * (m if n is None else n) for _ in range(m)])

    @classmethod
    def diag(cls, entries: Sequence) -> "RatMat":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "RatMat":
        return cls(list(zip(*cols)))

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]]) -> "RatMat":
        return cls([[Fraction(s) for s in row] for row in rows])

    # shape and access --------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(v for r in self.rows for v in r)

    @property
    def T(self) -> "RatMat":
        return RatMat(zip(*self.rows))

    # arithmetic --------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, RatMat):
            cols = list(zip(*other.rows))
            if len(self.rows[0]) != len(cols[0]):
                raise ValueError("shape mismatch in product")
            return RatMat([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        vec = tuple(to_fraction(v) for v in other)
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def __add__(self, other: "RatMat") -> "RatMat":
        return RatMat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RatMat") -> "RatMat":
        return RatMat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "RatMat":
        return RatMat([[-a for a in r] for r in self.rows])

    def __mul__(self, scalar) -> "RatMat":
        c = to_fraction(scalar)
        return RatMat([[c * a for a in r] for r in self.rows])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMat) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows)
        return f"RatMat([{body}])"

    # linear algebra ----------------------------------------------------
    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(len(self.rows))), Fraction(0))

    def det(self) -> Fraction:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            for r in range(col + 1, n):
                f = a[r][col] / a[col][col]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def inverse(self) -> "RatMat":
        n, m = self.shape
        if n != m:
            raise Singular("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _rref(aug, n)
        if len(pivots) < n:
            raise Singular("matrix is not invertible")
        return RatMat([row[n:] for row in red])

    def is_invertible(self) -> bool:
        return self.shape[0] == self.shape[1] and self.det() != 0

    def rank(self) -> int:
        return len(_rref([list(r) for r in self.rows], self.shape[1])[1])

    def is_symmetric(self) -> bool:
        return self.rows == self.T.rows

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(len(self.rows)) for j in range(i))

    def leading_minors(self) -> list[Fraction]:
        n = self.shape[0]
        return [RatMat([r[:k] for r in self.rows[:k]]).det() for k in range(1, n + 1)]

    def is_positive_definite(self) -> bool:
        return self.is_symmetric() and all(m > 0 for m in self.leading_minors())

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows], dtype=float)

    def to_strings(self) -> list[list[str]]:
        return [[fraction_str(v) for v in r] for r in self.rows]

    def to_json_entries(self) -> list[list]:
        """Integers stay integers, everything else becomes "p/q"."""
        return [[int(v) if v.denominator == 1 else fraction_str(v) for v in r] for r in self.rows]


def _rref(a: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the first ``ncols`` columns (in place)."""
    pivots: list[int] = []
    row = 0
    nrows = len(a)
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        a[row] = [x / p for x in a[row]]
        for r in range(nrows):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return a, pivots


def nullspace_basis(A: RatMat | Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of ker(A), one vector per free column of the RREF."""
    rows = A.rows if isinstance(A, RatMat) else tuple(tuple(to_fraction(v) for v in r) for r in A)
    n = len(rows[0])
    red, pivots = _rref([list(r) for r in rows], n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(tuple(v))
    return basis


def solve_in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Coefficients expressing ``target`` in the span of ``vectors`` (None if outside)."""
    k = len(vectors)
    aug = [[vectors[j][i] for j in range(k)] + [to_fraction(target[i])] for i in range(len(target))]
    red, pivots = _rref(aug, k + 1)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for r, pc in enumerate(pivots):
        coeffs[pc] = red[r][k]
    return tuple(coeffs)


# -- Cholesky / phi inverse ------------------------------------------------

def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def cholesky_upper(M: RatMat) -> RatMat | np.ndarray:
    """Upper-triangular U with positive diagonal and (U^-1)^t U^-1 = M.

    Writes M = R^t R with R upper triangular via an exact LDL^t; then U = R^-1.
    When every pivot of D is the square of a rational the result is an exact
    RatMat; otherwise the square roots are irrational and a float array is
    returned (checked to 1e-12).
    """
    if not isinstance(M, RatMat):
        M = RatMat(M)
    n, m = M.shape
    if n != m or not M.is_symmetric():
        raise NotSymmetric("metric matrix must be square and symmetric")
    # M = L D L^t with L unit lower triangular
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = M[j, j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise NotPositiveDefinite(f"leading minor {j + 1} is not positive")
        for i in range(j + 1, n):
            L[i][j] = (M[i, j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    roots = [_rational_sqrt(d) for d in D]
    if all(r is not None for r in roots):
        # R = sqrt(D) L^t
        R = RatMat([[roots[i] * L[j][i] for j in range(n)] for i in range(n)])
        U = R.inverse()
        assert phi_matrix(U) == M
        return U
    Rf = np.array([[math.sqrt(D[i]) * float(L[j][i]) for j in range(n)] for i in range(n)])
    Uf = scipy.linalg.solve_triangular(Rf, np.eye(n), lower=False)
    Uinv = np.linalg.inv(Uf)
    if np.max(np.abs(Uinv.T @ Uinv - M.to_float())) > CHOLESKY_FLOAT_TOL * max(1.0, np.max(np.abs(M.to_float()))):
        raise ArithmeticError("float Cholesky fallback lost accuracy")
    return Uf


def phi_matrix(U: RatMat) -> RatMat:
    Ui = U.inverse()
    return Ui.T @ Ui


# -- characteristic polynomial and real-rootedness -------------------------

def charpoly(A: RatMat) -> list[Fraction]:
    """Monic det(tI - A), lowest degree first (Faddeev-LeVerrier, exact)."""
    n = A.shape[0]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = RatMat.zeros(n)
    I = RatMat.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = A @ Mk + I * c
        c = -(A @ Mk).trace() / k
        coeffs[n - k] = c
    return coeffs


def _trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = [to_fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return _trim([i * c for i, c in enumerate(p)][1:])


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = _trim(r)
    return _trim(q), r


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a] if a else []


def sturm_chain(p: Sequence[Fraction]) -> list[list[Fraction]]:
    chain = [_trim(p), poly_derivative(p)]
    while chain[-1]:
        r = poly_divmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _sign_changes(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def count_distinct_real_roots(p: Sequence[Fraction]) -> int:
    """Number of distinct real roots, via sign changes of the Sturm chain at +-inf."""
    chain = sturm_chain(p)
    at_pos = [1 if q[-1] > 0 else -1 for q in chain]
    at_neg = [s * (-1) ** (len(q) - 1) for s, q in zip(at_pos, chain)]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def all_roots_real(p: Sequence) -> bool:
    """True iff every complex root of p is real (exact, no tolerance).

    Reduces to the square-free part q = p / gcd(p, p'); all roots of p are
    real iff q has deg(q) distinct real roots.
    """
    p = _trim(p)
    if not p:
        raise ZeroPolynomial("the zero polynomial has no well-defined roots")
    if len(p) == 1:
        return True
    g = poly_gcd(p, poly_derivative(p))
    q = poly_divmod(p, g)[0] if len(g) > 1 else p
    return count_distinct_real_roots(q) == len(q) - 1


# -- float side -------------------------------------------------------------

def as_float_matrix(a) -> np.ndarray:
    arr = a.to_float() if isinstance(a, RatMat) else np.asarray(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("float matrix has non-finite entries")
    return arr


def mat_exp(D, t: float = 1.0) -> np.ndarray:
    """exp(t D) by scaling and squaring (scipy's Pade-based expm)."""
    return scipy.linalg.expm(float(t) * as_float_matrix(D))

"""Brackets, ad operators and the predicates built on them.

Conventions: basis indices are 0-based in code and 1-based in anything shown
to a person (JSON, CLI, error messages).  ``ad x`` acts by ``y -> [x, y]``
with the brackets of Table-style catalog entries read literally, and an
automorphism matrix A sends e_j to its j-th column.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import RatMat, all_roots_real, charpoly, nullspace_basis, to_fraction

Vector = tuple[Fraction, ...]


class StructureConstants:
    """Bracket tensor c[i][j][k] = c^k_{ij}, stored fully antisymmetrized."""

    __slots__ = ("dim", "c")

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]]):
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), out in brackets.items():
            if i == j:
                raise ValueError(f"[e{i + 1}, e{i + 1}] must vanish")
            for k, v in out.items():
                v = to_fraction(v)
                c[i][j][k] += v
                c[j][i][k] -= v
        self.dim = dim
        self.c = tuple(tuple(tuple(row) for row in plane) for plane in c)

    @classmethod
    def abelian(cls, dim: int = 4) -> "StructureConstants":
        return cls(dim, {})

    def basis_bracket(self, i: int, j: int) -> Vector:
        return self.c[i][j]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        n = self.dim
        x = [to_fraction(v) for v in x]
        y = [to_fraction(v) for v in y]
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j] or i == j:
                    continue
                f = x[i] * y[j]
                for k, v in enumerate(self.c[i][j]):
                    if v:
                        out[k] += f * v
        return tuple(out)

    def triples(self) -> list[tuple[int, int, int, Fraction]]:
        """Nonzero c^k_{ij} with i < j, 1-based."""
        n = self.dim
        return [(i + 1, j + 1, k + 1, self.c[i][j][k])
                for i in range(n) for j in range(i + 1, n) for k in range(n) if self.c[i][j][k]]

    def jacobi_violations(self) -> list[tuple[int, int, int, int]]:
        n = self.dim
        bad = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for m in range(n):
                        s = sum(self.c[i][j][l] * self.c[l][k][m]
                                + self.c[j][k][l] * self.c[l][i][m]
                                + self.c[k][i][l] * self.c[l][j][m] for l in range(n))
                        if s:
                            bad.append((i + 1, j + 1, k + 1, m + 1))
        return bad

    def satisfies_jacobi(self) -> bool:
        return not self.jacobi_violations()

    def transport(self, P: RatMat) -> "StructureConstants":
        """Structure constants in the basis f_j = sum_i P[i, j] e_i."""
        Pinv = P.inverse()
        cols = [P.column(j) for j in range(self.dim)]
        out = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                coords = Pinv @ self.bracket(cols[a], cols[b])
                out[(a, b)] = {k: v for k, v in enumerate(coords) if v}
        return StructureConstants(self.dim, out)

    def restrict(self, indices: Sequence[int]) -> "StructureConstants":
        """Subalgebra on a subset of basis vectors (caller guarantees closure)."""
        pos = {old: new for new, old in enumerate(indices)}
        out = {}
        for a, i in enumerate(indices):
            for b, j in enumerate(indices):
                if a < b:
                    vec = self.c[i][j]
                    if any(v for k, v in enumerate(vec) if k not in pos):
                        raise ValueError("basis subset is not closed under the bracket")
                    out[(a, b)] = {pos[k]: v for k, v in enumerate(vec) if v}
        return StructureConstants(len(indices), out)

    def __eq__(self, other) -> bool:
        return isinstance(other, StructureConstants) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        parts = [f"[e{i},e{j}]={v}*e{k}" for i, j, k, v in self.triples()]
        return f"StructureConstants({self.dim}, {', '.join(parts) or 'abelian'})"


@dataclass(frozen=True)
class AdOperator:
    base_vector_index: int  # 1-based, as displayed
    matrix: RatMat


def bracket(sc: StructureConstants, x: Sequence, y: Sequence) -> Vector:
    return sc.bracket(x, y)


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def ad_of(sc: StructureConstants, x: Sequence) -> RatMat:
    """Matrix of y -> [x, y]; column k holds [x, e_k]."""
    n = sc.dim
    return RatMat.from_columns([sc.bracket(x, _unit(n, k)) for k in range(n)])


def ad_matrix(sc: StructureConstants, i: int) -> AdOperator:
    """ad e_i for a 1-based index i."""
    if not 1 <= i <= sc.dim:
        raise IndexError(f"basis index {i} outside 1..{sc.dim}")
    return AdOperator(i, ad_of(sc, _unit(sc.dim, i - 1)))


def is_unimodular(sc: StructureConstants) -> bool:
    return all(ad_of(sc, _unit(sc.dim, i)).trace() == 0 for i in range(sc.dim))


def is_type_R(sc: StructureConstants, n_random: int = 20, seed: int = 0) -> bool:
    """Every ad x has only real eigenvalues.

    Checked exactly on the basis vectors and on ``n_random`` random rational
    combinations; this is a sampling decision, not a proof for all x.
    """
    rng = random.Random(seed)
    probes = [_unit(sc.dim, i) for i in range(sc.dim)]
    for _ in range(n_random):
        probes.append(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(sc.dim)))
    return all(all_roots_real(charpoly(ad_of(sc, x))) for x in probes)


def is_automorphism(sc: StructureConstants, A: RatMat) -> bool:
    if not A.is_invertible():
        return False
    n = sc.dim
    cols = [A.column(j) for j in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if A @ sc.c[i][j] != sc.bracket(cols[i], cols[j]):
                return False
    return True


def automorphism_residual(sc: StructureConstants, A) -> float:
    """max |A[e_i, e_j] - [A e_i, A e_j]| for a float matrix A."""
    import numpy as np

    A = np.asarray(A, dtype=float)
    n = sc.dim
    C = np.array([[[float(v) for v in sc.c[i][j]] for j in range(n)] for i in range(n)])
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            lhs = A @ C[i, j]
            rhs = np.einsum("a,b,abk->k", A[:, i], A[:, j], C)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _derivation_rows(sc: StructureConstants) -> list[list[Fraction]]:
    """Linear equations on the n*n entries of D (index r*n + s for D[r, s])."""
    n = sc.dim
    c = sc.c
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for m in range(n):
                row = [Fraction(0)] * (n * n)
                # D[e_i, e_j] component m
                for k in range(n):
                    if c[i][j][k]:
                        row[m * n + k] += c[i][j][k]
                # - [D e_i, e_j] - [e_i, D e_j]
                for l in range(n):
                    if c[l][j][m]:
                        row[l * n + i] -= c[l][j][m]
                    if c[i][l][m]:
                        row[l * n + j] -= c[i][l][m]
                if any(row):
                    rows.append(row)
    return rows


def _unflatten(v: Sequence[Fraction], n: int) -> RatMat:
    return RatMat([v[r * n:(r + 1) * n] for r in range(n)])


def derivation_basis(sc: StructureConstants) -> list[RatMat]:
    n = sc.dim
    rows = _derivation_rows(sc)
    if not rows:
        rows = [[Fraction(0)] * (n * n)]
    return [_unflatten(v, n) for v in nullspace_basis(rows)]


def is_derivation(sc: StructureConstants, D: RatMat) -> bool:
    n = sc.dim
    cols = [D.column(j) for j in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = D @ sc.c[i][j]
            a = sc.bracket(cols[i], _unit(n, j))
            b = sc.bracket(_unit(n, i), cols[j])
            if lhs != tuple(x + y for x, y in zip(a, b)):
                return False
    return True


def skew_rows(M: RatMat) -> list[list[Fraction]]:
    """Equations (D^t M + M D)[r, s] = 0 for r <= s, on the entries of D."""
    n = M.shape[0]
    rows = []
    for r in range(n):
        for s in range(r, n):
            row = [Fraction(0)] * (n * n)
            for l in range(n):
                row[l * n + r] += M[l, s]
                row[l * n + s] += M[r, l]
            if any(row):
                rows.append(row)
    return rows

"""Zero patterns and entry couplings describing Aut(g) for the type-(R) entries.

A template is a list of branches (only 2A2 needs two); each branch is a 4x4
grid of cells written as short strings: "0", "1", a free variable such as
"a6", or a polynomial expression in the free variables and the algebra
parameters ("a6**2", "-a12*a6/beta").  Matrices act on columns: A e_j is
column j.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import sympy as sp

from ..errors import NoTemplate, ParamOutOfDomain
from ..linalg import RatMat, to_fraction
from .algebras import NON_TYPE_R, AlgebraId

Grid = tuple[tuple[str, ...], ...]

TEMPLATES: dict[str, tuple[Grid, ...]] = {
    "A2+2A1": ((
        ("1", "0", "0", "0"),
        ("a5", "a6", "0", "0"),
        ("a9", "0", "a11", "a12"),
        ("a13", "0", "a15", "a16"),
    ),),
    # the printed first branch carries a12 in cell (3,4); it has to vanish,
    # otherwise [A e3, A e4] picks up an e2 component
    "2A2": (
        (
            ("1", "0", "0", "0"),
            ("a5", "a6", "0", "0"),
            ("0", "0", "1", "0"),
            ("0", "0", "a15", "a16"),
        ),
        (
            ("0", "0", "1", "0"),
            ("0", "0", "a7", "a8"),
            ("1", "0", "0", "0"),
            ("a13", "a14", "0", "0"),
        ),
    ),
    "A32+A1": ((
        ("a1", "a2", "a3", "0"),
        ("0", "a1", "a7", "0"),
        ("0", "0", "1", "0"),
        ("0", "0", "a15", "a16"),
    ),),
    "A33+A1": ((
        ("a1", "a2", "a3", "0"),
        ("a5", "a6", "a7", "0"),
        ("0", "0", "1", "0"),
        ("0", "0", "a15", "a16"),
    ),),
    "A35a+A1": ((
        ("a1", "0", "a3", "0"),
        ("0", "a6", "a7", "0"),
        ("0", "0", "1", "0"),
        ("0", "0", "a15", "a16"),
    ),),
    "A42a": ((
        ("a1", "0", "0", "a4"),
        ("0", "a6", "a7", "a8"),
        ("0", "0", "a6", "a12"),
        ("0", "0", "0", "1"),
    ),),
    "A421": ((
        ("a1", "0", "a3", "a4"),
        ("a5", "a6", "a7", "a8"),
        ("0", "0", "a6", "a12"),
        ("0", "0", "0", "1"),
    ),),
    # derived by hand: same shape as A42a
    "A43": ((
        ("a1", "0", "0", "a4"),
        ("0", "a6", "a7", "a8"),
        ("0", "0", "a6", "a12"),
        ("0", "0", "0", "1"),
    ),),
    "A44": ((
        ("a1", "a2", "a3", "a4"),
        ("0", "a1", "a2", "a8"),
        ("0", "0", "a1", "a12"),
        ("0", "0", "0", "1"),
    ),),
    "A45ab": ((
        ("a1", "0", "0", "a4"),
        ("0", "a6", "0", "a8"),
        ("0", "0", "a11", "a12"),
        ("0", "0", "0", "1"),
    ),),
    "A47": ((
        ("a6**2", "-a12*a6", "-a12*(a6 + a7) + a6*a8", "a4"),
        ("0", "a6", "a7", "a8"),
        ("0", "0", "a6", "a12"),
        ("0", "0", "0", "1"),
    ),),
    "A49b": ((
        ("a11*a6", "-a12*a6/beta", "a8*a11", "a4"),
        ("0", "a6", "0", "a8"),
        ("0", "0", "a11", "a12"),
        ("0", "0", "0", "1"),
    ),),
}

_VAR = "a"


@lru_cache(maxsize=None)
def _parse(cell: str):
    return sp.sympify(cell, locals={"beta": sp.Symbol("beta"), "alpha": sp.Symbol("alpha")})


def _is_var(cell: str) -> bool:
    return cell.startswith(_VAR) and cell[1:].isdigit()


@dataclass(frozen=True)
class AutTemplate:
    algebra: AlgebraId
    branches: tuple[Grid, ...]

    @property
    def free_vars(self) -> tuple[str, ...]:
        names = set()
        for g in self.branches:
            for row in g:
                for cell in row:
                    if _is_var(cell):
                        names.add(cell)
        return tuple(sorted(names, key=lambda s: int(s[1:])))

    def branch_vars(self, b: int) -> tuple[str, ...]:
        names = {cell for row in self.branches[b] for cell in row if _is_var(cell)}
        return tuple(sorted(names, key=lambda s: int(s[1:])))

    def _eval(self, cell: str, values: Mapping[str, Fraction]) -> Fraction:
        if cell == "0":
            return Fraction(0)
        if cell == "1":
            return Fraction(1)
        if _is_var(cell):
            return values[cell]
        subs = {sp.Symbol(k): sp.Rational(v.numerator, v.denominator)
                for k, v in {**self.algebra.values, **values}.items()}
        e = _parse(cell).subs(subs)
        if e.free_symbols:
            raise ParamOutOfDomain(f"cell {cell!r} left unbound symbols {sorted(map(str, e.free_symbols))}")
        if e in (sp.zoo, sp.oo, -sp.oo, sp.nan):
            raise ParamOutOfDomain(f"cell {cell!r} undefined at {self.algebra}")
        return to_fraction(sp.Rational(e))

    def instantiate(self, values: Mapping[str, object], branch: int = 0) -> RatMat:
        vals = {k: to_fraction(v) for k, v in values.items()}
        grid = self.branches[branch]
        return RatMat([[self._eval(c, vals) for c in row] for row in grid])

    def random_instance(self, rng: random.Random, branch: int | None = None, lo: int = -4, hi: int = 4) -> RatMat:
        """A full-rank instantiation with small random rational entries."""
        if branch is None:
            branch = rng.randrange(len(self.branches))
        for _ in range(200):
            vals = {v: Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for v in self.branch_vars(branch)}
            A = self.instantiate(vals, branch)
            if A.is_invertible():
                return A
        raise RuntimeError("could not draw an invertible template instance")

    def matches(self, A: RatMat) -> bool:
        """Does A fit some branch: fixed cells, repeated variables, expressions."""
        return any(self._matches_branch(A, b) for b in range(len(self.branches)))

    def _matches_branch(self, A: RatMat, b: int) -> bool:
        grid = self.branches[b]
        assign: dict[str, Fraction] = {}
        exprs = []
        for r in range(4):
            for c in range(4):
                cell, v = grid[r][c], A[r, c]
                if cell == "0" or cell == "1":
                    if v != int(cell):
                        return False
                elif _is_var(cell):
                    if assign.setdefault(cell, v) != v:
                        return False
                else:
                    exprs.append((cell, v))
        for cell, v in exprs:
            if self._eval(cell, assign) != v:
                return False
        return True

    def to_json(self) -> list[list[list[str]]]:
        return [[list(row) for row in g] for g in self.branches]


def template_grids(name: str) -> tuple[Grid, ...]:
    if name in NON_TYPE_R:
        raise NoTemplate(f"{name} is not of type (R)")
    return TEMPLATES[name]


def cell_kind(cell: str) -> str:
    if cell == "0":
        return "Zero"
    if cell == "1":
        return "One"
    if _is_var(cell):
        return "FreeVar"
    return "Expr"


def pattern_vars(cells: Sequence[Sequence[str]]) -> set[str]:
    return {c for row in cells for c in row if _is_var(c)}

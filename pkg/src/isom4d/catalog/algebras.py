"""Table of the sixteen 4-dim nonunimodular algebras and their parameters.

Brackets are stored as sympy expressions in the algebra parameters so the
JSON export can show them symbolically; :class:`AlgebraId` binds the
parameters to rationals once, and every later consumer only sees numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import sympy as sp

from ..errors import ParamOutOfDomain, UnknownAlgebra, UnknownGroup
from ..lietheory import StructureConstants
from ..linalg import to_fraction

alpha, beta = sp.symbols("alpha beta")
_SYMS = {"alpha": alpha, "beta": beta}


@dataclass(frozen=True)
class Constraint:
    text: str
    check: Callable[[Mapping[str, Fraction]], bool]


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    display: str
    group: str | None  # Table 2 group id, None for the non-type-(R) entries
    group_display: str
    params: tuple[str, ...]
    brackets: tuple[tuple[int, int, tuple[tuple[int, object], ...]], ...]  # 1-based
    constraints: tuple[Constraint, ...]
    type_r: bool
    default_params: tuple[tuple[str, Fraction], ...] = ()

    def bracket_exprs(self) -> list[tuple[int, int, int, object]]:
        return [(i, j, k, sp.sympify(v)) for i, j, out in self.brackets for k, v in out]


def _b(i, j, *terms):
    return (i, j, tuple(terms))


def _c(text, fn):
    return Constraint(text, fn)


_F = Fraction

ALGEBRAS: tuple[AlgebraSpec, ...] = (
    AlgebraSpec(
        "A2+2A1", "A_2 ⊕ 2A_1", "G2.1xR2", "G_{2.1} × ℝ²", (),
        (_b(1, 2, (2, 1)),), (), True),
    AlgebraSpec(
        "2A2", "2A_2", "G2", "G_2", (),
        (_b(1, 2, (2, 1)), _b(3, 4, (4, 1))), (), True),
    AlgebraSpec(
        "A32+A1", "A_{3,2} ⊕ A_1", "G3.2xR", "G_{3.2} × ℝ", (),
        (_b(1, 3, (1, 1)), _b(2, 3, (1, 1), (2, 1))), (), True),
    AlgebraSpec(
        "A33+A1", "A_{3,3} ⊕ A_1", "G3.3xR", "G_{3.3} × ℝ", (),
        (_b(1, 3, (1, 1)), _b(2, 3, (2, 1))), (), True),
    AlgebraSpec(
        "A35a+A1", "A_{3,5}^α ⊕ A_1", "GcxR", "G_c × ℝ", ("alpha",),
        (_b(1, 3, (1, 1)), _b(2, 3, (2, alpha))),
        (_c("0 < |alpha| < 1", lambda p: 0 < abs(p["alpha"]) < 1),),
        True, (("alpha", _F(1, 2)),)),
    AlgebraSpec(
        "A37a+A1", "A_{3,7}^α ⊕ A_1", None, "G[A_{3,7}^α ⊕ A_1]", ("alpha",),
        (_b(1, 3, (1, alpha), (2, -1)), _b(2, 3, (1, 1), (2, alpha))),
        (_c("alpha > 0", lambda p: p["alpha"] > 0),),
        False, (("alpha", _F(1)),)),
    AlgebraSpec(
        "A42a", "A_{4,2}^α", "G4.2a", "G_{4.2}^α", ("alpha",),
        (_b(1, 4, (1, alpha)), _b(2, 4, (2, 1)), _b(3, 4, (2, 1), (3, 1))),
        (_c("alpha != 0", lambda p: p["alpha"] != 0),
         _c("alpha != -2", lambda p: p["alpha"] != -2),
         _c("alpha != 1 (use A421)", lambda p: p["alpha"] != 1)),
        True, (("alpha", _F(2)),)),
    AlgebraSpec(
        "A421", "A_{4,2}^1", "G4.21", "G_{4.2}^1", (),
        (_b(1, 4, (1, 1)), _b(2, 4, (2, 1)), _b(3, 4, (2, 1), (3, 1))), (), True),
    AlgebraSpec(
        "A43", "A_{4,3}", "G4.3", "G_{4.3}", (),
        (_b(1, 4, (1, 1)), _b(3, 4, (2, 1))), (), True),
    AlgebraSpec(
        "A44", "A_{4,4}", "G4.4", "G_{4.4}", (),
        (_b(1, 4, (1, 1)), _b(2, 4, (1, 1), (2, 1)), _b(3, 4, (2, 1), (3, 1))), (), True),
    AlgebraSpec(
        "A45ab", "A_{4,5}^{α,β}", "G4.5ab", "G_{4.5}^{α,β}", ("alpha", "beta"),
        (_b(1, 4, (1, 1)), _b(2, 4, (2, alpha)), _b(3, 4, (3, beta))),
        (_c("alpha*beta != 0", lambda p: p["alpha"] * p["beta"] != 0),
         _c("-1 <= alpha <= beta <= 1", lambda p: -1 <= p["alpha"] <= p["beta"] <= 1),
         _c("alpha + beta != -1", lambda p: p["alpha"] + p["beta"] != -1)),
        True, (("alpha", _F(1, 2)), ("beta", _F(3, 4)))),
    AlgebraSpec(
        "A46ab", "A_{4,6}^{α,β}", None, "G[A_{4,6}^{α,β}]", ("alpha", "beta"),
        (_b(1, 4, (1, alpha)), _b(2, 4, (2, beta), (3, -1)), _b(3, 4, (2, 1), (3, beta))),
        (_c("alpha != 0", lambda p: p["alpha"] != 0),
         _c("beta >= 0", lambda p: p["beta"] >= 0),
         _c("alpha != -2*beta", lambda p: p["alpha"] != -2 * p["beta"])),
        False, (("alpha", _F(1)), ("beta", _F(1)))),
    AlgebraSpec(
        "A47", "A_{4,7}", "G4.7", "G_{4.7}", (),
        (_b(2, 3, (1, 1)), _b(1, 4, (1, 2)), _b(2, 4, (2, 1)), _b(3, 4, (2, 1), (3, 1))),
        (), True),
    AlgebraSpec(
        "A49b", "A_{4,9}^β", "G4.8a", "G_{4.8}^α", ("beta",),
        (_b(2, 3, (1, 1)), _b(1, 4, (1, 1 + beta)), _b(2, 4, (2, 1)), _b(3, 4, (3, beta))),
        (_c("-1 < beta <= 1", lambda p: -1 < p["beta"] <= 1),),
        True, (("beta", _F(1, 2)),)),
    AlgebraSpec(
        "A411a", "A_{4,11}^α", None, "G[A_{4,11}^α]", ("alpha",),
        (_b(2, 3, (1, 1)), _b(1, 4, (1, 2 * alpha)), _b(2, 4, (2, alpha), (3, -1)),
         _b(3, 4, (2, 1), (3, alpha))),
        (_c("alpha > 0", lambda p: p["alpha"] > 0),),
        False, (("alpha", _F(1)),)),
    AlgebraSpec(
        "A412", "A_{4,12}", None, "G[A_{4,12}]", (),
        (_b(1, 3, (1, 1)), _b(2, 3, (2, 1)), _b(1, 4, (2, -1)), _b(2, 4, (1, 1))), (), False),
)

NON_TYPE_R = frozenset(a.name for a in ALGEBRAS if not a.type_r)
_BY_NAME = {a.name: a for a in ALGEBRAS}

# Accepted alternative spellings: Table 2 group ids and the G4.8 nickname.
ALIASES = {"A48": "A49b"}
for _a in ALGEBRAS:
    if _a.group:
        ALIASES.setdefault(_a.group, _a.name)


def resolve_name(name: str) -> str:
    if name in _BY_NAME:
        return name
    if name in ALIASES:
        return ALIASES[name]
    raise UnknownAlgebra(f"unknown algebra {name!r}; expected one of {', '.join(_BY_NAME)}")


def spec(name: str) -> AlgebraSpec:
    return _BY_NAME[resolve_name(name)]


def algebra_names() -> list[str]:
    return [a.name for a in ALGEBRAS]


@dataclass(frozen=True)
class AlgebraId:
    """A catalog name with its parameters bound to rationals.

    Construction validates the domain, so holding an AlgebraId means the
    constraints of the table hold.
    """

    name: str
    params: tuple[tuple[str, Fraction], ...] = field(default=())

    def __post_init__(self):
        s = spec(self.name)
        object.__setattr__(self, "name", s.name)
        given = dict(self.params)
        unknown = set(given) - set(s.params)
        if unknown:
            raise ParamOutOfDomain(f"{s.name} has no parameter(s) {sorted(unknown)}")
        missing = [p for p in s.params if p not in given]
        if missing:
            raise ParamOutOfDomain(f"{s.name} needs parameter(s) {missing}")
        bound = tuple((p, to_fraction(given[p])) for p in s.params)
        object.__setattr__(self, "params", bound)
        values = dict(bound)
        for c in s.constraints:
            if not c.check(values):
                raise ParamOutOfDomain(f"{s.name}: constraint violated: {c.text} (got {_fmt(values)})")

    @classmethod
    def make(cls, name: str, params: Mapping[str, object] | None = None) -> "AlgebraId":
        s = spec(name)
        values = dict(s.default_params) if params is None else dict(params)
        return cls(s.name, tuple(values.items()))

    @property
    def spec(self) -> AlgebraSpec:
        return _BY_NAME[self.name]

    @property
    def values(self) -> dict[str, Fraction]:
        return dict(self.params)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({_fmt(self.values)})"


def _fmt(values: Mapping[str, Fraction]) -> str:
    return ", ".join(f"{k}={v}" for k, v in values.items())


def _bind(expr, values: Mapping[str, Fraction]) -> Fraction:
    e = sp.sympify(expr).subs({_SYMS[k]: sp.Rational(v.numerator, v.denominator)
                               for k, v in values.items()})
    if e.free_symbols:
        raise ParamOutOfDomain(f"unbound parameter(s) {sorted(map(str, e.free_symbols))}")
    return to_fraction(sp.Rational(e))


def structure_constants(s: AlgebraSpec, values: Mapping[str, Fraction]) -> StructureConstants:
    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, k, expr in s.bracket_exprs():
        v = _bind(expr, values)
        if v:
            row = out.setdefault((i - 1, j - 1), {})
            row[k - 1] = row.get(k - 1, Fraction(0)) + v
    return StructureConstants(4, out)


def get_algebra(aid: AlgebraId | str, params: Mapping[str, object] | None = None) -> StructureConstants:
    if isinstance(aid, str):
        aid = AlgebraId.make(aid, params)
    return structure_constants(aid.spec, aid.values)


def group_of(name: str) -> str:
    s = spec(name)
    if s.group is None:
        raise UnknownGroup(f"{s.name} has no Table 2 realization")
    return s.group

"""Seeded parameter draws for algebras and metric families.

Draws are small rationals.  Algebra parameters stay away from the special
values where Aut(g) grows (e.g. beta = 1 for A49b, alpha = beta for A45ab),
since the templates describe the generic automorphism group only.  Family
parameters are drawn pairwise distinct in absolute value so that no
accidental coincidence enlarges the stabilizer.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp

from .catalog import CATALOG, AlgebraId, Catalog, MetricFamily
from .catalog.families import SYMBOLS
from .errors import ParamOutOfDomain
from .linalg import to_fraction
from .metrics import check_params


def _rat(rng: random.Random, lo: int, hi: int, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _unit_interval(rng: random.Random) -> Fraction:
    """Rational in (-1, 1) \\ {0}."""
    while True:
        q = rng.randint(2, 7)
        v = Fraction(rng.randint(-q + 1, q - 1), q)
        if v != 0:
            return v


def _algebra_draw(name: str, rng: random.Random) -> dict[str, Fraction]:
    if name == "A35a+A1":
        return {"alpha": _unit_interval(rng)}
    if name in ("A37a+A1", "A411a"):
        return {"alpha": _rat(rng, 1, 9)}
    if name == "A42a":
        while True:
            a = _rat(rng, -9, 9)
            if a not in (0, 1, -2):
                return {"alpha": a}
    if name == "A45ab":
        while True:
            a, b = sorted((_unit_interval(rng), _unit_interval(rng)))
            if a < b and a + b != -1:
                return {"alpha": a, "beta": b}
    if name == "A46ab":
        while True:
            a, b = _rat(rng, -9, 9), _rat(rng, 0, 9)
            if a != 0 and a != -2 * b:
                return {"alpha": a, "beta": b}
    if name == "A49b":
        return {"beta": _unit_interval(rng)}
    return {}


def sample_algebra(name: str, rng: random.Random, catalog: Catalog = CATALOG) -> AlgebraId:
    s = catalog.spec(name)
    vals = _algebra_draw(s.name, rng)
    return AlgebraId.make(s.name, {p: vals[p] for p in s.params})


def _draw(domain: str, rng: random.Random) -> Fraction:
    v = _rat(rng, 1, 9)
    if domain == "nonzero":
        return v if rng.random() < 0.5 else -v
    if domain in ("real", "nonneg"):
        v = _rat(rng, 0 if domain == "nonneg" else -9, 9)
    return v


def _solve_eq(f: MetricFamily, values: dict[str, Fraction]) -> None:
    for r in f.relations:
        if r.kind == "eq" and isinstance(r.lhs, sp.Symbol):
            subs = {SYMBOLS[k]: sp.Rational(v.numerator, v.denominator) for k, v in values.items()}
            values[str(r.lhs)] = to_fraction(sp.Rational(sp.sympify(r.rhs).subs(subs)))


def _on_condition(f: MetricFamily, values: dict[str, Fraction]) -> bool:
    if f.expected_if is None:
        return False
    subs = {SYMBOLS[k]: sp.Rational(v.numerator, v.denominator) for k, v in values.items()}
    return f.expected_if[0].holds(subs)


def _pythagorean(rng: random.Random, values: dict[str, Fraction]) -> None:
    # mu^2 = alpha^2 + gamma^2 via the rational parametrisation of the circle
    t = Fraction(rng.randint(1, 6), 7)
    mu = values["mu"]
    values["alpha"] = mu * (1 - t * t) / (1 + t * t)
    values["gamma"] = 2 * mu * t / (1 + t * t)


def sample_family_params(f: MetricFamily, rng: random.Random, index: int = 0) -> dict[str, Fraction]:
    """A valid binding for f.  For families with a conditional label, even
    indices land on the condition and odd indices off it."""
    for _ in range(500):
        values = {p.name: _draw(p.domain, rng) for p in f.params}
        _solve_eq(f, values)
        if f.expected_if is not None and index % 2 == 0:
            _pythagorean(rng, values)
        mags = [abs(v) for v in values.values() if v != 0]
        eq_tied = any(r.kind == "eq" for r in f.relations)
        if not eq_tied and len(set(mags)) != len(mags):
            continue
        if 1 in mags and len(values) > 1:
            continue
        if f.expected_if is not None and _on_condition(f, values) != (index % 2 == 0):
            continue
        try:
            return check_params(f, values)
        except ParamOutOfDomain:
            continue
    raise RuntimeError(f"no admissible draw for {f.algebra}/{f.case}")

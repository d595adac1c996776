"""Representative left-invariant metrics per algebra, with expected stabilizers.

Each family is an upper-triangular pattern U (sympy, in the metric parameters),
the transcribed closed form of M = (U^-1)^t U^-1, parameter domains, and the
label of Aut(G)_M announced for it.  The closed forms are kept on purpose even
though phi(U) recomputes them: instantiation compares the two exactly, so a
slip in either shows up as ClosedFormMismatch.

Parameter names follow the usual letters for each algebra (delta for A2+2A1,
nu and mu for 2A2, eta for A49b, ...).  They are unrelated to the algebra
parameters of the same name.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from .algebras import resolve_name

al, be, ga, la, de, mu, nu, eta = sp.symbols("alpha beta gamma lambda delta mu nu eta")
SYMBOLS = {str(s): s for s in (al, be, ga, la, de, mu, nu, eta)}

Mx = sp.ImmutableMatrix


@dataclass(frozen=True)
class Param:
    name: str
    domain: str  # "pos", "nonneg", "nonzero", "real"

    def admits(self, v) -> bool:
        return {
            "pos": v > 0,
            "nonneg": v >= 0,
            "nonzero": v != 0,
            "real": True,
        }[self.domain]


@dataclass(frozen=True)
class Relation:
    """lhs == rhs (kind "eq") or lhs != rhs (kind "ne") among family parameters."""

    kind: str
    lhs: object
    rhs: object

    def holds(self, subs: dict) -> bool:
        d = sp.simplify(sp.sympify(self.lhs).subs(subs) - sp.sympify(self.rhs).subs(subs))
        return (d == 0) if self.kind == "eq" else (d != 0)

    def __str__(self) -> str:
        op = "=" if self.kind == "eq" else "!="
        return f"{self.lhs} {op} {self.rhs}"


@dataclass(frozen=True)
class MetricFamily:
    algebra: str
    case: str
    u_pattern: Mx
    params: tuple[Param, ...]
    expected: str | None
    closed_form: Mx
    relations: tuple[Relation, ...] = ()
    # (condition, label): the announced label switches to `label` when the condition holds
    expected_if: tuple[Relation, str] | None = None
    note: str = ""

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def expected_for(self, values: dict) -> str | None:
        if self.expected_if is not None:
            cond, label = self.expected_if
            if cond.holds(_subs(values)):
                return label
        return self.expected


def _subs(values: dict) -> dict:
    return {SYMBOLS[k]: sp.Rational(v.numerator, v.denominator) if hasattr(v, "denominator") else v
            for k, v in values.items()}


def _p(spec: str) -> tuple[Param, ...]:
    # "alpha:pos beta:nonzero" -> Params
    out = []
    for tok in spec.split():
        n, d = tok.split(":")
        out.append(Param(n, d))
    return tuple(out)


def _fam(alg, case, U, params, expected, M, **kw) -> MetricFamily:
    return MetricFamily(alg, case, Mx(U), _p(params), expected, Mx(M), **kw)


a2 = al**2

FAMILIES: tuple[MetricFamily, ...] = (
    # ---- A2+2A1, U = [[alpha, beta, gamma, 0], [0, 1, lambda, delta], [0,0,1,0], [0,0,0,1]]
    _fam("A2+2A1", "M1",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
         "alpha:pos", "O2xZ2",
         sp.diag(1 / a2, 1, 1, 1)),
    _fam("A2+2A1", "M2",
         [[al, be, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos", "O2",
         [[1 / a2, -be / a2, 0, 0],
          [-be / a2, 1 + be**2 / a2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1]]),
    _fam("A2+2A1", "M3",
         [[al, 0, 0, 0], [0, 1, la, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
         "alpha:pos lambda:nonzero", "Z2^2",
         [[1 / a2, 0, 0, 0],
          [0, 1, -la, 0],
          [0, -la, 1 + la**2, 0],
          [0, 0, 0, 1]]),
    _fam("A2+2A1", "M4",
         [[al, be, 0, 0], [0, 1, la, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos lambda:pos", "Z2",
         [[1 / a2, -be / a2, be * la / a2, 0],
          [-be / a2, 1 + be**2 / a2, -be**2 * la / a2 - la, 0],
          [be * la / a2, -be**2 * la / a2 - la, 1 + la**2 + be**2 * la**2 / a2, 0],
          [0, 0, 0, 1]]),
    _fam("A2+2A1", "M5",
         [[al, be, ga, 0], [0, 1, la, de], [0, 0, 1, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos gamma:pos lambda:nonzero delta:nonzero", "trivial",
         [[1 / a2, -be / a2, (be * la - ga) / a2, be * de / a2],
          [-be / a2, be**2 / a2 + 1, be * (-be * la + ga) / a2 - la, -be**2 * de / a2 - de],
          [(be * la - ga) / a2, be * (-be * la + ga) / a2 - la,
           (-be * la + ga)**2 / a2 + la**2 + 1, -(-be * la + ga) * be * de / a2 + la * de],
          [be * de / a2, -be**2 * de / a2 - de, -(-be * la + ga) * be * de / a2 + la * de,
           be**2 * de**2 / a2 + de**2 + 1]]),

    # ---- 2A2, U = [[alpha, beta, gamma, nu], [0, 1, lambda, delta], [0, 0, mu, 0], [0,0,0,1]]
    _fam("2A2", "M1",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos", "D4",
         sp.diag(1 / a2, 1, 1 / a2, 1),
         relations=(Relation("eq", mu, al),)),
    _fam("2A2", "M2",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos", "Z2^2",
         sp.diag(1 / a2, 1, 1 / mu**2, 1),
         relations=(Relation("ne", mu, al),)),
    _fam("2A2", "M3",
         [[al, be, 0, 0], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos beta:pos", "Z2",
         [[1 / a2, -be / a2, 0, 0],
          [-be / a2, 1 + be**2 / a2, 0, 0],
          [0, 0, 1 / mu**2, 0],
          [0, 0, 0, 1]]),
    _fam("2A2", "M4",
         [[al, be, 0, nu], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos beta:pos nu:pos", "trivial",
         [[1 / a2, -be / a2, 0, -nu / a2],
          [-be / a2, 1 + be**2 / a2, 0, be * nu / a2],
          [0, 0, 1 / mu**2, 0],
          [-nu / a2, be * nu / a2, 0, 1 + nu**2 / a2]]),
    _fam("2A2", "Mgamma",
         [[al, 0, ga, 0], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos gamma:nonzero", "Z2^2",
         [[1 / a2, 0, -ga / (a2 * mu), 0],
          [0, 1, 0, 0],
          [-ga / (a2 * mu), 0, ga**2 / (a2 * mu**2) + 1 / mu**2, 0],
          [0, 0, 0, 1]],
         expected_if=(Relation("eq", 1 / a2, 1 / mu**2 + ga**2 / (a2 * mu**2)), "D4")),
    _fam("2A2", "Mnu",
         [[al, 0, 0, nu], [0, 1, 0, 0], [0, 0, mu, 0], [0, 0, 0, 1]],
         "alpha:pos mu:pos nu:nonzero", "Z2",
         [[1 / a2, 0, 0, -nu / a2],
          [0, 1, 0, 0],
          [0, 0, 1 / mu**2, 0],
          [-nu / a2, 0, 0, nu**2 / a2 + 1]]),

    # ---- A32+A1, U = [[alpha, 0, 0, gamma], [0, 1, 0, lambda], [0, 0, beta, mu], [0,0,0,1]]
    _fam("A32+A1", "M1",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, be, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos", "Z2^2",
         sp.diag(1 / a2, 1, 1 / be**2, 1)),
    _fam("A32+A1", "M2",
         [[al, 0, 0, ga], [0, 1, 0, 0], [0, 0, be, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos gamma:nonzero", "Z2",
         [[1 / a2, 0, 0, -ga / a2],
          [0, 1, 0, 0],
          [0, 0, 1 / be**2, 0],
          [-ga / a2, 0, 0, ga**2 / a2 + 1]]),
    _fam("A32+A1", "M3",
         [[al, 0, 0, ga], [0, 1, 0, 0], [0, 0, be, mu], [0, 0, 0, 1]],
         "alpha:pos beta:pos gamma:nonzero mu:pos", "trivial",
         [[1 / a2, 0, 0, -ga / a2],
          [0, 1, 0, 0],
          [0, 0, 1 / be**2, -mu / be**2],
          [-ga / a2, 0, -mu / be**2, ga**2 / a2 + mu**2 / be**2 + 1]]),

    # ---- A33+A1, U = [[1, 0, 0, beta], [0, 1, 0, 0], [0, 0, alpha, gamma], [0,0,0,1]]
    _fam("A33+A1", "M1",
         [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, al, 0], [0, 0, 0, 1]],
         "alpha:pos", "O2xZ2",
         sp.diag(1, 1, 1 / a2, 1)),
    _fam("A33+A1", "M2",
         [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, al, ga], [0, 0, 0, 1]],
         "alpha:pos gamma:pos", "O2",
         [[1, 0, 0, 0],
          [0, 1, 0, 0],
          [0, 0, 1 / a2, -ga / a2],
          [0, 0, -ga / a2, 1 + ga**2 / a2]]),
    _fam("A33+A1", "M3",
         [[1, 0, 0, be], [0, 1, 0, 0], [0, 0, al, 0], [0, 0, 0, 1]],
         "alpha:pos beta:pos", "Z2^2",
         [[1, 0, 0, -be],
          [0, 1, 0, 0],
          [0, 0, 1 / a2, 0],
          [-be, 0, 0, be**2 + 1]]),
    _fam("A33+A1", "M4",
         [[1, 0, 0, be], [0, 1, 0, 0], [0, 0, al, ga], [0, 0, 0, 1]],
         "alpha:pos beta:pos gamma:pos", "Z2",
         [[1, 0, 0, -be],
          [0, 1, 0, 0],
          [0, 0, 1 / a2, -ga / a2],
          [-be, 0, -ga / a2, be**2 + 1 + ga**2 / a2]]),

    # ---- A35a+A1, U = [[1, alpha, 0, gamma], [0, 1, 0, lambda], [0, 0, beta, mu], [0,0,0,1]]
    _fam("A35a+A1", "M1",
         [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, be, 0], [0, 0, 0, 1]],
         "beta:pos", "Z2^3",
         sp.diag(1, 1, 1 / be**2, 1)),
    _fam("A35a+A1", "M2",
         [[1, 0, 0, 0], [0, 1, 0, la], [0, 0, be, 0], [0, 0, 0, 1]],
         "beta:pos lambda:pos", "Z2^2",
         [[1, 0, 0, 0],
          [0, 1, 0, -la],
          [0, 0, 1 / be**2, 0],
          [0, -la, 0, la**2 + 1]]),
    _fam("A35a+A1", "M3",
         [[1, al, 0, 0], [0, 1, 0, la], [0, 0, be, 0], [0, 0, 0, 1]],
         "beta:pos alpha:nonzero lambda:pos", "Z2",
         [[1, -al, 0, al * la],
          [-al, 1 + a2, 0, -a2 * la - la],
          [0, 0, 1 / be**2, 0],
          [al * la, -a2 * la - la, 0, a2 * la**2 + la**2 + 1]]),
    _fam("A35a+A1", "M4",
         [[1, al, 0, 0], [0, 1, 0, la], [0, 0, be, mu], [0, 0, 0, 1]],
         "beta:pos alpha:nonzero lambda:pos mu:pos", "trivial",
         [[1, -al, 0, al * la],
          [-al, 1 + a2, 0, -a2 * la - la],
          [0, 0, 1 / be**2, -mu / be**2],
          [al * la, -a2 * la - la, -mu / be**2, a2 * la**2 + la**2 + mu**2 / be**2 + 1]]),

    # ---- A42a, U = [[1, alpha, gamma, 0], [0, beta, 0, 0], [0, 0, 1, 0], [0, 0, 0, lambda]]
    _fam("A42a", "M1",
         [[1, 0, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "beta:pos lambda:pos", "Z2^2",
         sp.diag(1, 1 / be**2, 1, 1 / la**2)),
    _fam("A42a", "M2",
         [[1, al, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "alpha:pos beta:pos lambda:pos", "Z2",
         [[1, -al / be, 0, 0],
          [-al / be, (a2 + 1) / be**2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1 / la**2]]),

    # ---- A421, U = [[1, alpha, 0, 0], [0, beta, 0, 0], [0, 0, 1, 0], [0, 0, 0, gamma]]
    _fam("A421", "M1",
         [[1, 0, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, ga]],
         "beta:pos gamma:pos", "Z2^2",
         sp.diag(1, 1 / be**2, 1, 1 / ga**2)),
    _fam("A421", "M2",
         [[1, al, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, ga]],
         "alpha:pos beta:pos gamma:pos", "Z2",
         [[1, -al / be, 0, 0],
          [-al / be, (a2 + 1) / be**2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1 / ga**2]]),

    # ---- A43: no representatives are printed for it; reuse the A42a ones
    _fam("A43", "M1",
         [[1, 0, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "beta:pos lambda:pos", "Z2^2",
         sp.diag(1, 1 / be**2, 1, 1 / la**2),
         note="borrowed from A42a"),
    _fam("A43", "M2",
         [[1, al, 0, 0], [0, be, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "alpha:pos beta:pos lambda:pos", "Z2",
         [[1, -al / be, 0, 0],
          [-al / be, (a2 + 1) / be**2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1 / la**2]],
         note="borrowed from A42a"),

    # ---- A44, U = [[1, alpha, 0, 0], [0, beta, 0, 0], [0, 0, gamma, 0], [0, 0, 0, lambda]]
    _fam("A44", "M1",
         [[1, 0, 0, 0], [0, be, 0, 0], [0, 0, ga, 0], [0, 0, 0, la]],
         "beta:pos gamma:pos lambda:pos", "Z2",
         sp.diag(1, 1 / be**2, 1 / ga**2, 1 / la**2)),

    # ---- A45ab, U = [[1, alpha, beta, 0], [0, 1, gamma, 0], [0, 0, 1, 0], [0, 0, 0, lambda]]
    _fam("A45ab", "M1",
         [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "lambda:pos", "Z2^3",
         sp.diag(1, 1, 1, 1 / la**2)),
    _fam("A45ab", "M2",
         [[1, al, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "alpha:pos lambda:pos", "Z2^2",
         [[1, -al, 0, 0],
          [-al, 1 + a2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1 / la**2]]),
    _fam("A45ab", "M3",
         [[1, al, be, 0], [0, 1, ga, 0], [0, 0, 1, 0], [0, 0, 0, la]],
         "alpha:pos beta:pos gamma:real lambda:pos", "Z2",
         [[1, -al, al * ga - be, 0],
          [-al, 1 + a2, -al * (al * ga - be) - ga, 0],
          [al * ga - be, -al * (al * ga - be) - ga, (al * ga - be)**2 + ga**2 + 1, 0],
          [0, 0, 0, 1 / la**2]]),

    # ---- A47, U = [[alpha, beta, gamma, 0], [0, 1, 0, 0], [0, 0, lambda, 0], [0, 0, 0, mu]]
    _fam("A47", "M1",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, la, 0], [0, 0, 0, mu]],
         "alpha:pos lambda:pos mu:pos", "Z2",
         sp.diag(1 / a2, 1, 1 / la**2, 1 / mu**2)),
    _fam("A47", "M2",
         [[al, be, 0, 0], [0, 1, 0, 0], [0, 0, la, 0], [0, 0, 0, mu]],
         "alpha:pos beta:pos lambda:pos mu:pos", "trivial",
         [[1 / a2, -be / a2, 0, 0],
          [-be / a2, 1 + be**2 / a2, 0, 0],
          [0, 0, 1 / la**2, 0],
          [0, 0, 0, 1 / mu**2]]),

    # ---- A49b, U = [[alpha, eta, gamma, 0], [0, 1, lambda, 0], [0, 0, 1, 0], [0, 0, 0, mu]]
    _fam("A49b", "M1",
         [[al, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, mu]],
         "alpha:pos mu:pos", "Z2^2",
         sp.diag(1 / a2, 1, 1, 1 / mu**2)),
    _fam("A49b", "M2",
         [[al, eta, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, mu]],
         "alpha:pos mu:pos eta:pos", "Z2",
         [[1 / a2, -eta / a2, 0, 0],
          [-eta / a2, 1 + eta**2 / a2, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1 / mu**2]]),
    _fam("A49b", "M3",
         [[al, eta, 0, 0], [0, 1, la, 0], [0, 0, 1, 0], [0, 0, 0, mu]],
         "alpha:pos mu:pos eta:pos lambda:nonzero", "trivial",
         [[1 / a2, -eta / a2, eta * la / a2, 0],
          [-eta / a2, 1 + eta**2 / a2, -eta**2 * la / a2 - la, 0],
          # the (3,3) entry is 1 + lambda^2 + eta^2 lambda^2 / alpha^2, not 1
          [eta * la / a2, -eta**2 * la / a2 - la, 1 + la**2 + eta**2 * la**2 / a2, 0],
          [0, 0, 0, 1 / mu**2]]),
)


_CASE_ALIASES = {"mγ": "Mgamma", "mν": "Mnu", "m_gamma": "Mgamma", "m_nu": "Mnu"}


def canonical_case(case: str) -> str:
    c = case.strip()
    c = _CASE_ALIASES.get(c.lower(), c)
    return c[:1].upper() + c[1:]


def probe_family(name: str) -> MetricFamily:
    """Diagonal metric used for algebras with no encoded representatives."""
    return MetricFamily(resolve_name(name), "M1",
                        Mx([[al, 0, 0, 0], [0, be, 0, 0], [0, 0, ga, 0], [0, 0, 0, la]]),
                        _p("alpha:pos beta:pos gamma:pos lambda:pos"), None,
                        Mx(sp.diag(1 / a2, 1 / be**2, 1 / ga**2, 1 / la**2)),
                        note="diagonal probe, no announced group")

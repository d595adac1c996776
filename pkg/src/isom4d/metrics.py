"""Upper-triangular representatives, their metric matrices, and pullbacks.

phi(U) = (U^-1)^t U^-1 maps Tsup_4 (upper triangular, positive diagonal)
bijectively onto S_4 (symmetric positive definite); phi_inverse is the
Cholesky factorisation.  A metric family is instantiated twice, once through
phi and once through its transcribed closed form, and the two must agree
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
import sympy as sp

from .catalog.families import SYMBOLS, MetricFamily
from .errors import ClosedFormMismatch, NotPositiveDefinite, ParamOutOfDomain, Singular
from .linalg import RatMat, cholesky_upper, fraction_str, phi_matrix, to_fraction


@dataclass(frozen=True)
class MetricUpper:
    U: RatMat

    def __post_init__(self):
        if not self.U.is_upper_triangular():
            raise ParamOutOfDomain("U must be upper triangular")
        if any(self.U[i, i] <= 0 for i in range(self.U.shape[0])):
            raise ParamOutOfDomain("U must have a positive diagonal")


@dataclass(frozen=True)
class MetricMatrix:
    M: RatMat

    def __post_init__(self):
        if not self.M.is_symmetric():
            raise ParamOutOfDomain("metric matrix must be symmetric")
        if not self.M.is_positive_definite():
            raise NotPositiveDefinite("metric matrix must be positive definite")

    def to_json(self) -> list[list[str]]:
        return [[fraction_str(v) for v in row] for row in self.M.rows]


def phi(U: MetricUpper | RatMat) -> RatMat:
    if isinstance(U, RatMat):
        U = MetricUpper(U)
    return phi_matrix(U.U)


def phi_inverse(M: MetricMatrix | RatMat):
    """Cholesky-type inverse of phi.  Exact RatMat when possible, float array otherwise."""
    if isinstance(M, MetricMatrix):
        M = M.M
    return cholesky_upper(M)


def pullback(A: RatMat, M: RatMat) -> RatMat:
    """Matrix of g_theta(u, v) = g(A^-1 u, A^-1 v), i.e. (A^-1)^t M A^-1."""
    if not A.is_invertible():
        raise Singular("pullback by a singular matrix")
    Ai = A.inverse()
    return Ai.T @ M @ Ai


def congruence(A: RatMat, M: RatMat) -> RatMat:
    """A^t M A; A stabilizes M exactly when this returns M."""
    return A.T @ M @ A


# -- family instantiation -----------------------------------------------------

def _rat(v: Fraction):
    return sp.Rational(v.numerator, v.denominator)


def check_params(f: MetricFamily, params: Mapping[str, object]) -> dict[str, Fraction]:
    """Validate a binding against the family's domains and relations."""
    values = {}
    for p in f.params:
        if p.name not in params:
            raise ParamOutOfDomain(f"{f.algebra}/{f.case} needs parameter {p.name!r}")
        v = to_fraction(params[p.name])
        if not p.admits(v):
            raise ParamOutOfDomain(f"{f.algebra}/{f.case}: {p.name} must be {_DOMAIN_TEXT[p.domain]} (got {v})")
        values[p.name] = v
    extra = set(params) - set(values)
    if extra:
        raise ParamOutOfDomain(f"{f.algebra}/{f.case} does not use parameter(s) {sorted(extra)}")
    subs = {SYMBOLS[k]: _rat(v) for k, v in values.items()}
    for r in f.relations:
        if not r.holds(subs):
            raise ParamOutOfDomain(f"{f.algebra}/{f.case}: relation {r} fails")
    return values


_DOMAIN_TEXT = {"pos": "> 0", "nonneg": ">= 0", "nonzero": "!= 0", "real": "real"}


def _eval_matrix(m: sp.ImmutableMatrix, values: Mapping[str, Fraction]) -> RatMat:
    subs = {SYMBOLS[k]: _rat(v) for k, v in values.items()}
    rows = []
    for row in m.tolist():
        out = []
        for e in row:
            x = sp.sympify(e).subs(subs)
            if x.free_symbols:
                raise ParamOutOfDomain(f"unbound symbol(s) {sorted(map(str, x.free_symbols))}")
            out.append(to_fraction(sp.Rational(x)))
        rows.append(out)
    return RatMat(rows)


def instantiate_u(f: MetricFamily, params: Mapping[str, object]) -> RatMat:
    values = check_params(f, params)
    return _eval_matrix(f.u_pattern, values)


def instantiate_family(f: MetricFamily, params: Mapping[str, object]) -> RatMat:
    """phi of the instantiated U, cross-checked against the closed form."""
    values = check_params(f, params)
    U = _eval_matrix(f.u_pattern, values)
    M = phi(MetricUpper(U))
    closed = _eval_matrix(f.closed_form, values)
    if closed != M:
        cells = [(r + 1, c + 1, str(closed[r, c]), str(M[r, c]))
                 for r in range(4) for c in range(4) if closed[r, c] != M[r, c]]
        where = ", ".join(f"({r},{c}): closed form {a} vs phi(U) {b}" for r, c, a, b in cells)
        raise ClosedFormMismatch(f"{f.algebra}/{f.case} at {_fmt(values)}: {where}", cells)
    return M


def _fmt(values: Mapping[str, Fraction]) -> str:
    return ", ".join(f"{k}={v}" for k, v in values.items())


def metric_from_u(U: RatMat) -> RatMat:
    return phi(MetricUpper(U))


def is_metric(M: RatMat) -> bool:
    return M.is_symmetric() and M.is_positive_definite()


def float_isometry_residual(E: np.ndarray, M: RatMat) -> float:
    Mf = M.to_float()
    return float(np.max(np.abs(E.T @ Mf @ E - Mf)))

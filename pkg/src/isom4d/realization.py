"""Matrix models of the simply connected groups and their tangent algebras.

Each model is a sympy matrix in named coordinates (and, for the families,
the group parameters).  Points are evaluated in floating point; tangent
vectors at the identity are exact derivatives of the entries at 0, so the
bracket comparison against the catalog runs in rational arithmetic.

G_c x R has no matrix display to copy; it is covered at the Lie-algebra
level by :func:`verify_gc_lie_level` and the sigma-form checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np
import sympy as sp

from .catalog import CATALOG, Catalog
from .errors import BasisMismatch, ClosureViolation, ParamOutOfDomain, UnknownGroup
from .lietheory import StructureConstants
from .linalg import RatMat, charpoly, nullspace_basis, solve_in_span, to_fraction

a, b, c, d, s, u, v, w, x, y, z = sp.symbols("a b c d s u v w x y z")
alpha, beta = sp.symbols("alpha beta")
E = sp.exp

BRACKET_TOL = 1e-9
PRODUCT_TOL = 1e-12
CLOSURE_TOL = 1e-9


def _blocks(*mats) -> sp.Matrix:
    return sp.Matrix(sp.BlockDiagMatrix(*mats).as_explicit())


def _g21():
    return sp.Matrix([[E(a), b], [0, 1]])


def _g32():
    return sp.Matrix([[1, 0, 0], [y, E(z), 0], [x, -z * E(z), E(z)]])


def _g33():
    return sp.Matrix([[1, 0, 0], [y, E(z), 0], [x, 0, E(z)]])


def _line(t):
    return sp.Matrix([[1, t], [0, 1]])


def _plane(p, q):
    return sp.Matrix([[1, 0, p], [0, 1, q], [0, 0, 1]])


# charts: numeric matrix + group params -> coordinates.  All read the
# diagonal through a log and everything else linearly.
def _chart_g21(m, p):
    return {"a": np.log(m[0, 0]), "b": m[0, 1]}


def _chart_g32(m, p):
    return {"x": m[2, 0], "y": m[1, 0], "z": np.log(m[1, 1])}


@dataclass(frozen=True)
class GroupModel:
    group: str
    display: str
    algebra: str | None          # catalog algebra whose brackets the model must reproduce
    coords: tuple[str, ...]
    params: tuple[str, ...]
    matrix: sp.Matrix
    chart: Callable[[np.ndarray, Mapping[str, float]], dict[str, float]]
    subalgebra: tuple[int, ...] | None = None   # restrict the catalog algebra to these (0-based)
    # algebra parameter name for each group parameter
    param_map: Mapping[str, str] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _symbols(self):
        return [sp.Symbol(n) for n in self.coords] + [sp.Symbol(n) for n in self.params]

    def evaluate(self, coords: Mapping[str, float], params: Mapping[str, float]) -> np.ndarray:
        f = _lambdified(self.group)
        args = [float(coords.get(n, 0.0)) for n in self.coords] + [float(params[n]) for n in self.params]
        return np.array(f(*args), dtype=float)


def _models() -> dict[str, GroupModel]:
    g32, g33 = _g32(), _g33()
    return {m.group: m for m in (
        GroupModel("G2.1", "G_{2.1}", "A2+2A1", ("a", "b"), (), _g21(), _chart_g21, subalgebra=(0, 1)),
        GroupModel("G2.1xR2", "G_{2.1} × ℝ²", "A2+2A1", ("a", "b", "u", "v"), (),
                   _blocks(_g21(), _plane(u, v)),
                   lambda m, p: {**_chart_g21(m, p), "u": m[2, 4], "v": m[3, 4]}),
        GroupModel("G2", "G_2", "2A2", ("a", "b", "c", "d"), (),
                   sp.Matrix([[E(a), b, 0, 0], [0, 1, 0, 0], [0, 0, E(c), d], [0, 0, 0, 1]]),
                   lambda m, p: {"a": np.log(m[0, 0]), "b": m[0, 1], "c": np.log(m[2, 2]), "d": m[2, 3]}),
        GroupModel("G3.2", "G_{3.2}", "A32+A1", ("x", "y", "z"), (), g32, _chart_g32, subalgebra=(0, 1, 2)),
        GroupModel("G3.3", "G_{3.3}", "A33+A1", ("x", "y", "z"), (), g33, _chart_g32, subalgebra=(0, 1, 2)),
        GroupModel("G3.2xR", "G_{3.2} × ℝ", "A32+A1", ("x", "y", "z", "s"), (), _blocks(g32, _line(s)),
                   lambda m, p: {**_chart_g32(m, p), "s": m[3, 4]}),
        GroupModel("G3.3xR", "G_{3.3} × ℝ", "A33+A1", ("x", "y", "z", "s"), (), _blocks(g33, _line(s)),
                   lambda m, p: {**_chart_g32(m, p), "s": m[3, 4]}),
        GroupModel("G4.2a", "G_{4.2}^α", "A42a", ("w", "x", "y", "z"), ("alpha",),
                   sp.Matrix([[E(-alpha * z), 0, 0, w],
                              [0, E(-z), -alpha * z * E(-z), alpha * x],
                              [0, 0, E(-z), y],
                              [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3], "x": m[1, 3] / p["alpha"], "y": m[2, 3], "z": -np.log(m[1, 1])},
                   param_map={"alpha": "alpha"}),
        GroupModel("G4.21", "G_{4.2}^1", "A421", ("w", "x", "y", "z"), (),
                   sp.Matrix([[E(-z), 0, 0, w], [0, E(-z), -z * E(-z), x], [0, 0, E(-z), y], [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3], "x": m[1, 3], "y": m[2, 3], "z": -np.log(m[0, 0])}),
        GroupModel("G4.3", "G_{4.3}", "A43", ("w", "x", "y", "z"), (),
                   sp.Matrix([[E(-z), 0, 0, w], [0, 1, -z, x], [0, 0, 1, y], [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3], "x": m[1, 3], "y": m[2, 3], "z": -np.log(m[0, 0])}),
        GroupModel("G4.4", "G_{4.4}", "A44", ("w", "x", "y", "z"), (),
                   sp.Matrix([[E(-z), -z * E(-z), z**2 * E(-z) / 2, w],
                              [0, E(-z), -z * E(-z), x],
                              [0, 0, E(-z), y],
                              [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3], "x": m[1, 3], "y": m[2, 3], "z": -np.log(m[0, 0])}),
        GroupModel("G4.5ab", "G_{4.5}^{α,β}", "A45ab", ("w", "x", "y", "z"), ("alpha", "beta"),
                   sp.Matrix([[E(-z), 0, 0, w], [0, E(-alpha * z), 0, y], [0, 0, E(-beta * z), x], [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3], "x": m[2, 3], "y": m[1, 3], "z": -np.log(m[0, 0])},
                   param_map={"alpha": "alpha", "beta": "beta"}),
        GroupModel("G4.7", "G_{4.7}", "A47", ("w", "x", "y", "z"), (),
                   sp.Matrix([[E(-2 * z), -y * E(-z), (x + y * z) * E(-z), 2 * w],
                              [0, E(-z), -z * E(-z), x],
                              [0, 0, E(-z), y],
                              [0, 0, 0, 1]]),
                   lambda m, p: {"w": m[0, 3] / 2, "x": m[1, 3], "y": m[2, 3], "z": -np.log(m[1, 1])}),
        # the family parameter alpha of G_{4.8} is the beta of A_{4,9}
        GroupModel("G4.8a", "G_{4.8}^α", "A49b", ("w", "x", "y", "z"), ("alpha",),
                   sp.Matrix([[E(-(1 + alpha) * z), x, w], [0, E(-alpha * z), y], [0, 0, 1]]),
                   lambda m, p: {"w": m[0, 2], "x": m[0, 1], "y": m[1, 2],
                                 "z": -np.log(m[0, 0]) / (1 + p["alpha"])},
                   param_map={"alpha": "beta"}),
    )}


MODELS = _models()
GROUPS_WITHOUT_MODEL = frozenset({"GcxR"})
# the eleven realizations checked by verify-all (G_c x R through its sigma form)
REALIZED_GROUPS = ("G2.1xR2", "G2", "G3.2xR", "G3.3xR", "GcxR", "G4.2a", "G4.21", "G4.3", "G4.4",
                   "G4.5ab", "G4.7", "G4.8a")

_LAMBDA_CACHE: dict[str, Callable] = {}


def _lambdified(group: str) -> Callable:
    if group not in _LAMBDA_CACHE:
        m = MODELS[group]
        _LAMBDA_CACHE[group] = sp.lambdify(m._symbols(), m.matrix, "numpy")
    return _LAMBDA_CACHE[group]


def resolve_group(group: str) -> str:
    key = group.replace("_", "").replace("{", "").replace("}", "").replace(" ", "")
    for g in list(MODELS) + sorted(GROUPS_WITHOUT_MODEL):
        if g.lower() == key.lower():
            return g
    raise UnknownGroup(f"unknown group {group!r}; known: {', '.join(list(MODELS) + sorted(GROUPS_WITHOUT_MODEL))}")


def get_model(group: str) -> GroupModel:
    g = resolve_group(group)
    if g in GROUPS_WITHOUT_MODEL:
        raise UnknownGroup(f"{g} has no matrix model here; it is checked at the Lie-algebra level only")
    return MODELS[g]


def default_group_params(model: GroupModel, catalog: Catalog = CATALOG) -> dict[str, Fraction]:
    if not model.params:
        return {}
    defaults = dict(catalog.spec(model.algebra).default_params)
    return {gp: defaults[ap] for gp, ap in model.param_map.items()}


# -- points -----------------------------------------------------------------

@dataclass(frozen=True)
class GroupPoint:
    group: str
    coords: Mapping[str, float]
    params: Mapping[str, float]
    matrix: np.ndarray

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "coords": {k: float(v) for k, v in self.coords.items()},
            "params": {k: str(v) for k, v in self.params.items()},
            "matrix": self.matrix.tolist(),
        }


def make_point(group: str, coords: Mapping[str, float] | None = None,
               params: Mapping[str, object] | None = None) -> GroupPoint:
    m = get_model(group)
    coords = dict(coords or {})
    extra = set(coords) - set(m.coords)
    if extra:
        raise ParamOutOfDomain(f"{m.group} has coordinates {', '.join(m.coords)}; got {sorted(extra)}")
    params = default_group_params(m) if params is None else {k: to_fraction(v) for k, v in params.items()}
    missing = set(m.params) - set(params)
    if missing:
        raise ParamOutOfDomain(f"{m.group} needs group parameter(s) {sorted(missing)}")
    full = {n: float(coords.get(n, 0.0)) for n in m.coords}
    M = m.evaluate(full, params)
    return GroupPoint(m.group, full, dict(params), M)


def chart(p: GroupPoint) -> dict[str, float]:
    m = get_model(p.group)
    return m.chart(p.matrix, {k: float(v) for k, v in p.params.items()})


def multiply(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    if p.group != q.group or dict(p.params) != dict(q.params):
        raise ValueError("multiply needs two points of the same group")
    m = get_model(p.group)
    prod = p.matrix @ q.matrix
    coords = m.chart(prod, {k: float(v) for k, v in p.params.items()})
    again = m.evaluate(coords, p.params)
    scale = max(1.0, float(np.max(np.abs(prod))))
    if np.max(np.abs(again - prod)) > CLOSURE_TOL * scale:
        raise ClosureViolation(f"{m.group}: chart coordinates {coords} do not reassemble the product")
    return GroupPoint(m.group, coords, p.params, prod)


def inverse(p: GroupPoint) -> GroupPoint:
    m = get_model(p.group)
    inv = np.linalg.inv(p.matrix)
    coords = m.chart(inv, {k: float(v) for k, v in p.params.items()})
    return GroupPoint(m.group, coords, p.params, m.evaluate(coords, p.params))


# -- tangent algebra ------------------------------------------------------------

def tangent_basis(model: GroupModel, params: Mapping[str, Fraction]) -> list[RatMat]:
    """Exact d/dq_i of the displayed matrix at q = 0, one per coordinate."""
    zero = {sp.Symbol(n): 0 for n in model.coords}
    psub = {sp.Symbol(k): sp.Rational(Fraction(v).numerator, Fraction(v).denominator) for k, v in params.items()}
    out = []
    for n in model.coords:
        dm = sp.diff(model.matrix, sp.Symbol(n)).subs(zero).subs(psub)
        out.append(RatMat([[to_fraction(sp.Rational(e)) for e in row] for row in dm.tolist()]))
    return out


def model_structure_constants(model: GroupModel, params: Mapping[str, Fraction]) -> StructureConstants:
    X = tangent_basis(model, params)
    flats = [m.flat() for m in X]
    out = {}
    for i, j in itertools.combinations(range(len(X)), 2):
        comm = X[i] @ X[j] - X[j] @ X[i]
        coef = solve_in_span(flats, comm.flat())
        if coef is None:
            raise BasisMismatch(f"{model.group}: [X_{model.coords[i]}, X_{model.coords[j]}] leaves the tangent span")
        out[(i, j)] = {k: cf for k, cf in enumerate(coef) if cf}
    return StructureConstants(len(X), out)


def _signed_relabel(sc: StructureConstants, perm, signs) -> StructureConstants:
    # basis f_j = signs[j] X_{perm[j]}
    n = sc.dim
    where = {perm[m]: m for m in range(n)}
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        vec = sc.c[perm[i]][perm[j]]
        coords = {where[k]: val * signs[i] * signs[j] * signs[where[k]] for k, val in enumerate(vec) if val}
        out[(i, j)] = coords
    return StructureConstants(n, out)


def _mismatches(got: StructureConstants, want: StructureConstants) -> list[str]:
    bad = []
    n = want.dim
    for i, j in itertools.combinations(range(n), 2):
        g, t = got.c[i][j], want.c[i][j]
        if any(abs(float(p - q)) > BRACKET_TOL for p, q in zip(g, t)):
            bad.append(f"[e{i + 1}, e{j + 1}]: model {_vec(g)} vs catalog {_vec(t)}")
    return bad


def _vec(vec) -> str:
    terms = [f"{val}*e{k + 1}" for k, val in enumerate(vec) if val]
    return " + ".join(terms) if terms else "0"


def target_algebra(model: GroupModel, params: Mapping[str, Fraction], catalog: Catalog = CATALOG) -> StructureConstants:
    spec = catalog.spec(model.algebra)
    alg = {ap: params[gp] for gp, ap in model.param_map.items()}
    for k, val in spec.default_params:
        alg.setdefault(k, val)
    sc = catalog.get_algebra(model.algebra, alg)
    return sc.restrict(model.subalgebra) if model.subalgebra else sc


@dataclass(frozen=True)
class BasisMatch:
    group: str
    perm: tuple[int, ...]
    signs: tuple[int, ...]
    coords: tuple[str, ...]

    def describe(self) -> str:
        return ", ".join(f"e{j + 1} = {'-' if sg < 0 else ''}X_{self.coords[p]}"
                         for j, (p, sg) in enumerate(zip(self.perm, self.signs)))


def find_basis_match(group: str, params: Mapping[str, object] | None = None,
                     catalog: Catalog = CATALOG) -> BasisMatch:
    """Signed-permutation matching of the tangent basis onto the catalog basis."""
    model = get_model(group)
    params = default_group_params(model, catalog) if params is None else {k: to_fraction(v) for k, v in params.items()}
    got = model_structure_constants(model, params)
    want = target_algebra(model, params, catalog)
    n = got.dim
    best = None
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            bad = _mismatches(_signed_relabel(got, perm, signs), want)
            if not bad:
                return BasisMatch(model.group, perm, signs, model.coords)
            if best is None or len(bad) < len(best):
                best = bad
    raise BasisMismatch(f"{model.group}: no signed-permutation basis matches {model.algebra}; closest leaves "
                        + "; ".join(best))


def verify_bracket_match(group: str, params: Mapping[str, object] | None = None,
                         catalog: Catalog = CATALOG) -> bool:
    if resolve_group(group) == "GcxR":
        alpha_ = None if params is None else params.get("alpha")
        return verify_gc_lie_level(alpha_, catalog)
    find_basis_match(group, params, catalog)
    return True


# -- sigma forms --------------------------------------------------------------

@dataclass(frozen=True)
class SigmaAction:
    kind: str        # "alpha-form", "I-form", "c-form"
    parameter: Fraction

    def at(self, t) -> RatMat:
        t = to_fraction(t)
        p = self.parameter
        if self.kind == "alpha-form":
            return RatMat([[-t, 0], [0, -t * p]])
        if self.kind == "I-form":
            return RatMat([[t, 0], [0, t]])
        if self.kind == "c-form":
            return RatMat([[0, -p * t], [t, 2 * t]])
        raise ValueError(self.kind)


def _check_alpha(al) -> Fraction:
    al = to_fraction(al)
    if not 0 < abs(al) < 1:
        raise ParamOutOfDomain(f"need 0 < |alpha| < 1, got {al}")
    return al


def sigma_parameters(al) -> tuple[Fraction, Fraction]:
    al = _check_alpha(al)
    return -(1 + al) / 2, 4 * al / (1 + al) ** 2


def sigma_similarity(al) -> tuple[Fraction, Fraction, bool]:
    """(lambda, c, verified): sigma_c(lambda t) has char poly (s + t)(s + alpha t)."""
    al = _check_alpha(al)
    lam, cc = sigma_parameters(al)
    sig = SigmaAction("c-form", cc)
    ok = True
    for t in (1, 2, 5):
        want = [al * t * t, (1 + al) * t, Fraction(1)]   # lowest degree first
        ok &= charpoly(sig.at(lam * t)) == want
    return lam, cc, ok


def _disc(p) -> Fraction:
    c0, c1, c2 = p
    return c1 * c1 - 4 * c0 * c2


def sigma_not_similar_to_I(al) -> bool:
    """sigma_I(lambda t) always has a double eigenvalue, sigma_alpha(t) never does for t != 0."""
    al = _check_alpha(al)
    sa = SigmaAction("alpha-form", al)
    si = SigmaAction("I-form", Fraction(1))
    alpha_distinct = all(_disc(charpoly(sa.at(t))) != 0 for t in (1, 2, -3))
    i_repeated = all(_disc(charpoly(si.at(lam * t))) == 0 for lam in (1, -2) for t in (1, 3))
    # for general t the alpha-form discriminant is (1 - alpha)^2 t^2
    return alpha_distinct and i_repeated and (1 - al) ** 2 != 0


def gc_semidirect(cc: Fraction) -> StructureConstants:
    """R^2 x_{sigma_c} R (+) R in the basis X, Y, Z, W with [(x,0), (0,1)] = (-sigma_c(1) x, 0)."""
    sig = SigmaAction("c-form", cc).at(1)
    return StructureConstants(4, {
        (0, 2): {0: -sig[0, 0], 1: -sig[1, 0]},
        (1, 2): {0: -sig[0, 1], 1: -sig[1, 1]},
    })


def verify_gc_lie_level(al=None, catalog: Catalog = CATALOG) -> bool:
    """Change R^2 x_{sigma_c} R (+) R to an eigenbasis and compare with A35a+A1."""
    if al is None:
        al = dict(catalog.spec("A35a+A1").default_params)["alpha"]
    al = _check_alpha(al)
    lam, cc = sigma_parameters(al)
    gc = gc_semidirect(cc)
    # e3 = lambda Z; e1, e2 eigenvectors of ad(e3) on R^2 with eigenvalues -1, -alpha
    sig = SigmaAction("c-form", cc).at(lam)
    vecs = []
    for mu in (Fraction(-1), -al):
        shifted = RatMat([[sig[0, 0] - mu, sig[0, 1]], [sig[1, 0], sig[1, 1] - mu]])
        ker = nullspace_basis(shifted)
        if len(ker) != 1:
            raise BasisMismatch(f"sigma_c(lambda) has no single eigenvector for {mu}")
        vecs.append(ker[0])
    P = RatMat([[vecs[0][0], vecs[1][0], 0, 0],
                [vecs[0][1], vecs[1][1], 0, 0],
                [0, 0, lam, 0],
                [0, 0, 0, 1]])
    got = gc.transport(P)
    want = catalog.get_algebra("A35a+A1", {"alpha": al})
    bad = _mismatches(got, want)
    if bad:
        raise BasisMismatch("G_c x R: " + "; ".join(bad))
    return True

"""Aut(g)_M = {A in Aut(g) : A^t M A = M} and the isometry-group report.

The finite part is found by brute force over the 384 signed permutation
matrices (pattern filter, then exact automorphism and isometry tests).  The
identity component comes from the linear system
    D in Der(g),   D^t M + M D = 0,
and the number of components is |finite| divided by how many finite
elements lie on the one-parameter circle exp(tD).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .catalog import CATALOG, AlgebraId, AutTemplate, Catalog, MetricFamily
from .errors import NoTemplate, NonCircleComponent, Unrecognized
from .lietheory import StructureConstants, _derivation_rows, _unflatten, is_automorphism, skew_rows
from .linalg import FLOAT_TOL, RatMat, mat_exp, nullspace_basis
from .metrics import congruence, instantiate_family

LABELS = ("trivial", "Z2", "Z2^2", "Z2^3", "D4", "O2", "O2xZ2")
COMPLETE = "complete"
POSSIBLY_INCOMPLETE = "possibly-incomplete"


def _signed_perms(n: int = 4) -> tuple[tuple[RatMat, tuple[int, ...], tuple[int, ...]], ...]:
    # (A, perm, signs) with A e_j = signs[j] e_{perm[j]}
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            rows = [[0] * n for _ in range(n)]
            for col, row in enumerate(perm):
                rows[row][col] = signs[col]
            out.append((RatMat(rows), perm, signs))
    return tuple(out)


_SIGNED = _signed_perms()
SIGNED_PERMS = tuple(A for A, _, _ in _SIGNED)


def sort_key(A: RatMat) -> tuple[Fraction, ...]:
    return A.flat()


@dataclass(frozen=True)
class StabilizerGroup:
    finite_elements: tuple[RatMat, ...]
    continuous_dim: int
    continuous_basis: tuple[RatMat, ...]
    component_count: int | None
    label: str | None
    completeness_flag: str
    notes: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.finite_elements)


def stabilizer_lie_algebra(sc: StructureConstants, M: RatMat) -> list[RatMat]:
    n = sc.dim
    rows = _derivation_rows(sc) + skew_rows(M)
    if not rows:
        rows = [[Fraction(0)] * (n * n)]
    return [_unflatten(v, n) for v in nullspace_basis(rows)]


def is_isometry(A: RatMat, M: RatMat) -> bool:
    return congruence(A, M) == M


def _perm_preserves(perm, signs, M: RatMat) -> bool:
    # (A^t M A)[i, j] = s_i s_j M[perm i, perm j]; no arithmetic needed
    n = len(perm)
    return all(M[perm[i], perm[j]] == (M[i, j] if signs[i] == signs[j] else -M[i, j])
               for i in range(n) for j in range(i, n))


def discrete_stabilizer(sc: StructureConstants, M: RatMat, tmpl: AutTemplate | None = None) -> list[RatMat]:
    """Signed permutations in Aut(g) preserving M, sorted lexicographically.

    With ``tmpl=None`` the template filter is skipped and only the exact
    automorphism and isometry tests apply.
    """
    found = []
    for A, perm, signs in _SIGNED:
        if not _perm_preserves(perm, signs, M):  # cheapest test first
            continue
        if tmpl is not None and not tmpl.matches(A):
            continue
        if is_automorphism(sc, A):
            found.append(A)
    return sorted(found, key=sort_key)


def is_closed(elements: Sequence[RatMat]) -> bool:
    s = set(elements)
    if not s:
        return False
    n = elements[0].shape[0]
    if RatMat.identity(n) not in s:
        return False
    for a in elements:
        if a.inverse() not in s:
            return False
        for b in elements:
            if a @ b not in s:
                return False
    return True


def _rotation_plane(D: RatMat) -> tuple[int, int, Fraction]:
    """(p, q, c) with D = c (E_qp - E_pq); NonCircleComponent otherwise."""
    n = D.shape[0]
    support = [(r, s) for r in range(n) for s in range(n) if D[r, s] != 0]
    if len(support) != 2:
        raise NonCircleComponent(f"generator is not a coordinate-plane rotation: support {support}")
    (p, q), (r, s) = sorted(support)
    if (r, s) != (q, p) or D[p, q] != -D[q, p]:
        raise NonCircleComponent("generator is not a coordinate-plane rotation")
    return p, q, D[q, p]


def circle_points(D: RatMat) -> list[RatMat]:
    """exp(t D) at the four quarter turns, rounded to exact signed permutations."""
    _, _, c = _rotation_plane(D)
    Df = D.to_float()
    pts = []
    for k in range(4):
        E = mat_exp(Df, k * math.pi / (2 * abs(float(c))))
        R = np.rint(E)
        if np.max(np.abs(E - R)) > FLOAT_TOL:
            raise NonCircleComponent("quarter-turn of the generator is not a signed permutation")
        pts.append(RatMat(R.astype(int).tolist()))
    return pts


def component_count(finite: Sequence[RatMat], cont_basis: Sequence[RatMat]) -> int:
    if not cont_basis:
        return len(finite)
    if len(cont_basis) > 1:
        raise NonCircleComponent(f"identity component of dimension {len(cont_basis)} is not a circle")
    on_circle = set(circle_points(cont_basis[0]))
    hits = sum(1 for A in finite if A in on_circle)
    if hits == 0 or len(finite) % hits:
        raise NonCircleComponent("finite part does not split into circle cosets")
    return len(finite) // hits


def _is_involution(A: RatMat) -> bool:
    return A @ A == RatMat.identity(A.shape[0])


def identify_group(finite: Sequence[RatMat], dim: int, components: int | None = None) -> str:
    order = len(finite)
    if dim == 0:
        invol = sum(1 for A in finite if _is_involution(A))  # includes the identity
        abelian = all(a @ b == b @ a for a in finite for b in finite)
        if order == 1:
            return "trivial"
        if order == 2:
            return "Z2"
        if order == 4 and invol == 4:
            return "Z2^2"
        if order == 8 and abelian and invol == 8:
            return "Z2^3"
        if order == 8 and not abelian and invol == 6:
            return "D4"
    elif dim == 1:
        if components == 2:
            return "O2"
        if components == 4:
            return "O2xZ2"
    raise Unrecognized(f"no label for order {order}, dimension {dim}, components {components}")


def compute_stabilizer(sc: StructureConstants, M: RatMat, tmpl: AutTemplate | None) -> StabilizerGroup:
    notes = []
    flag = COMPLETE
    finite = discrete_stabilizer(sc, M, tmpl)
    if tmpl is not None:
        unfiltered = discrete_stabilizer(sc, M, None)
        if unfiltered != finite:
            flag = POSSIBLY_INCOMPLETE
            notes.append("template filter dropped automorphisms found by the unfiltered search")
    if not is_closed(finite):
        flag = POSSIBLY_INCOMPLETE
        notes.append("finite part is not closed under products and inverses")
    basis = stabilizer_lie_algebra(sc, M)
    comps: int | None
    try:
        comps = component_count(finite, basis)
    except NonCircleComponent as exc:
        comps = None
        flag = POSSIBLY_INCOMPLETE
        notes.append(str(exc))
    label: str | None
    try:
        label = identify_group(finite, len(basis), comps)
    except Unrecognized as exc:
        label = None
        flag = POSSIBLY_INCOMPLETE
        notes.append(str(exc))
    return StabilizerGroup(tuple(finite), len(basis), tuple(basis), comps, label, flag, tuple(notes))


# -- reports ------------------------------------------------------------------

K_DISPLAY = {
    "trivial": "{1}",
    "Z2": "ℤ₂",
    "Z2^2": "(ℤ₂)²",
    "Z2^3": "(ℤ₂)³",
    "D4": "D(4)",
    "O2": "O(2)",
    "O2xZ2": "O(2) × ℤ₂",
}

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def case_display(case: str) -> str:
    if case == "Mgamma":
        return "M_γ"
    if case == "Mnu":
        return "M_ν"
    if case.startswith("M") and case[1:].isdigit():
        return "M" + case[1:].translate(_SUB)
    return case


def _paren(s: str) -> str:
    return f"({s})" if " × " in s else s


def render_decomposition(group_display: str, case: str, label: str | None, type_r: bool) -> str:
    m = case_display(case)
    if not type_r:
        return f"{_paren(group_display)} ⋊ Aut(G)_{{{m}}} ⊆ Isom({group_display}, {m})"
    if label is None:
        return f"Isom({group_display}, {m}) ≅ {_paren(group_display)} ⋊ Aut(G)_{{{m}}} (unidentified)"
    if label == "trivial":
        return f"Isom({group_display}, {m}) ≅ {group_display}"
    return f"Isom({group_display}, {m}) ≅ {_paren(group_display)} ⋊ {_paren(K_DISPLAY[label])}"


@dataclass(frozen=True)
class IsometryReport:
    algebra: AlgebraId
    group_name: str | None
    metric_case: str
    params: Mapping[str, Fraction]
    metric: RatMat
    stabilizer: StabilizerGroup
    expected: str | None
    decomposition: str
    type_r: bool

    @property
    def match(self) -> bool | None:
        if self.expected is None:
            return None
        return self.stabilizer.label == self.expected

    def to_json(self) -> dict:
        s = self.stabilizer
        return {
            "group": self.group_name,
            "case": self.metric_case,
            "params": {k: str(v) for k, v in self.params.items()},
            "label": s.label,
            "finite_order": s.order,
            "continuous_dim": s.continuous_dim,
            "components": s.component_count,
            "elements": [A.to_json_entries() for A in s.finite_elements],
            "expected": self.expected,
            "match": self.match,
            "algebra": self.algebra.name,
            "algebra_params": {k: str(v) for k, v in self.algebra.values.items()},
            "metric": self.metric.to_json_entries(),
            "decomposition": self.decomposition,
            "completeness": s.completeness_flag,
        }


def report_for_metric(aid: AlgebraId, M: RatMat, case: str, params: Mapping[str, Fraction],
                      expected: str | None, catalog: Catalog = CATALOG) -> IsometryReport:
    spec = catalog.spec(aid.name)
    sc = catalog.get_algebra(aid)
    try:
        tmpl = catalog.get_aut_template(aid)
    except NoTemplate:
        tmpl = None
    stab = compute_stabilizer(sc, M, tmpl)
    deco = render_decomposition(spec.group_display, case, stab.label, spec.type_r)
    return IsometryReport(aid, spec.group, case, dict(params), M, stab, expected, deco, spec.type_r)


def isometry_report(aid: AlgebraId, f: MetricFamily, params: Mapping[str, object],
                    catalog: Catalog = CATALOG) -> IsometryReport:
    from .metrics import check_params

    values = check_params(f, params)
    M = instantiate_family(f, values)
    return report_for_metric(aid, M, f.case, values, f.expected_for(values), catalog)

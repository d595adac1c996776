from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from isom4d.catalog import CATALOG, NON_TYPE_R, AlgebraId, get_algebra, get_aut_template, get_family
from isom4d.errors import NonCircleComponent, Unrecognized
from isom4d.lietheory import automorphism_residual, is_automorphism, is_derivation
from isom4d.linalg import RatMat, mat_exp
from isom4d.metrics import congruence, instantiate_family, pullback
from isom4d.sampling import sample_algebra, sample_family_params
from isom4d.stabilizer import (SIGNED_PERMS, component_count, compute_stabilizer, discrete_stabilizer,
                               identify_group, is_closed, isometry_report, render_decomposition, sort_key,
                               stabilizer_lie_algebra)

F = Fraction
D = RatMat.diag


def _setup(name, case, params, alg=None):
    aid = AlgebraId.make(name, alg)
    f = get_family(name, case)
    M = instantiate_family(f, params)
    return aid, get_algebra(aid), M


def _rows(*rows):
    return RatMat([list(r) for r in rows])


DISPLAYED_2A2_M1 = [
    D([1, 1, 1, 1]), D([1, 1, 1, -1]), D([1, -1, 1, 1]), D([1, -1, 1, -1]),
    _rows((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)),
    _rows((0, 0, 1, 0), (0, 0, 0, -1), (1, 0, 0, 0), (0, 1, 0, 0)),
    _rows((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, -1, 0, 0)),
    _rows((0, 0, 1, 0), (0, 0, 0, -1), (1, 0, 0, 0), (0, -1, 0, 0)),
]


def test_signed_perm_count():
    assert len(SIGNED_PERMS) == len(set(SIGNED_PERMS)) == 384


def test_lie_algebra_dimensions():
    _, sc, M = _setup("A33+A1", "M1", {"alpha": 2})
    assert len(stabilizer_lie_algebra(sc, M)) == 1
    _, sc, M = _setup("2A2", "M1", {"alpha": 1, "mu": 1})
    assert len(stabilizer_lie_algebra(sc, M)) == 0
    _, sc, M = _setup("A2+2A1", "M1", {"alpha": 2})
    assert len(stabilizer_lie_algebra(sc, M)) == 1


def test_2a2_m1_matches_displayed_elements():
    aid, sc, M = _setup("2A2", "M1", {"alpha": 1, "mu": 1})
    got = discrete_stabilizer(sc, M, get_aut_template(aid))
    assert got == sorted(DISPLAYED_2A2_M1, key=sort_key)


def test_a44_m1():
    aid, sc, M = _setup("A44", "M1", {"beta": 2, "gamma": 3, "lambda": F(1, 2)})
    assert discrete_stabilizer(sc, M, get_aut_template(aid)) == [D([-1, -1, -1, 1]), D([1, 1, 1, 1])]


def test_a45_m1_diagonal_signs():
    aid, sc, M = _setup("A45ab", "M1", {"lambda": 1}, {"alpha": F(1, 2), "beta": 1})
    got = discrete_stabilizer(sc, M, get_aut_template(aid))
    want = sorted((D([a, b, c, 1]) for a in (1, -1) for b in (1, -1) for c in (1, -1)), key=sort_key)
    assert got == want


def test_component_counts():
    assert component_count([RatMat.identity(4)] * 8, []) == 8
    _, sc, M = _setup("A33+A1", "M2", {"alpha": 2, "gamma": 3})
    fin = discrete_stabilizer(sc, M)
    assert len(fin) == 8
    assert component_count(fin, stabilizer_lie_algebra(sc, M)) == 2
    _, sc, M = _setup("A33+A1", "M1", {"alpha": 2})
    fin = discrete_stabilizer(sc, M)
    assert len(fin) == 16
    assert component_count(fin, stabilizer_lie_algebra(sc, M)) == 4


def test_component_count_rejects_non_circles():
    I = RatMat.identity(4)
    with pytest.raises(NonCircleComponent):
        component_count([I], [RatMat.zeros(4), RatMat.zeros(4)])
    with pytest.raises(NonCircleComponent):
        component_count([I], [D([1, 0, 0, 0])])


def test_identify_examples():
    aid, sc, M = _setup("2A2", "M1", {"alpha": 1, "mu": 1})
    assert identify_group(discrete_stabilizer(sc, M), 0) == "D4"
    assert identify_group([RatMat.identity(4)], 0) == "trivial"
    z23 = [D([a, b, c, 1]) for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    assert identify_group(z23, 0) == "Z2^3"
    # a 4-cycle is not (Z2)^2
    r = _rows((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    with pytest.raises(Unrecognized):
        identify_group([RatMat.identity(4), r, r @ r, r @ r @ r], 0)
    with pytest.raises(Unrecognized):
        identify_group([RatMat.identity(4)], 2, None)


def test_report_a47_m2_trivial():
    aid = AlgebraId.make("A47")
    rep = isometry_report(aid, get_family("A47", "M2"), {"alpha": 1, "beta": 1, "lambda": 1, "mu": 1})
    assert rep.stabilizer.label == "trivial" and rep.match
    assert rep.decomposition == "Isom(G_{4.7}, M₂) ≅ G_{4.7}"


def test_report_a21_m5_trivial():
    f = get_family("A2+2A1", "M5")
    rep = isometry_report(AlgebraId.make("A2+2A1"), f, {p: 1 for p in f.param_names})
    assert rep.stabilizer.label == "trivial"


def test_report_a32_m2():
    rep = isometry_report(AlgebraId.make("A32+A1"), get_family("A32+A1", "M2"), {"alpha": 1, "beta": 1, "gamma": 1})
    assert rep.stabilizer.label == "Z2"
    assert rep.stabilizer.finite_elements == (D([-1, -1, 1, -1]), D([1, 1, 1, 1]))


def test_report_a21_m3_elements():
    rep = isometry_report(AlgebraId.make("A2+2A1"), get_family("A2+2A1", "M3"), {"alpha": 1, "lambda": 1})
    want = [D([1, 1, 1, 1]), D([1, 1, 1, -1]), D([1, -1, -1, 1]), D([1, -1, -1, -1])]
    assert list(rep.stabilizer.finite_elements) == sorted(want, key=sort_key)


def test_a33_m4_element():
    rep = isometry_report(AlgebraId.make("A33+A1"), get_family("A33+A1", "M4"),
                          {"alpha": 2, "beta": 3, "gamma": F(1, 2)})
    assert rep.stabilizer.finite_elements == (D([1, -1, 1, 1]), D([1, 1, 1, 1]))


def test_mnu_element():
    rep = isometry_report(AlgebraId.make("2A2"), get_family("2A2", "Mnu"), {"alpha": 2, "mu": 3, "nu": -1})
    assert rep.stabilizer.label == "Z2"
    assert D([1, -1, 1, 1]) in rep.stabilizer.finite_elements


def test_mgamma_condition():
    f = get_family("2A2", "Mgamma")
    aid = AlgebraId.make("2A2")
    on = isometry_report(aid, f, {"alpha": F(3, 5), "mu": 1, "gamma": F(4, 5)})
    off = isometry_report(aid, f, {"alpha": F(3, 5), "mu": 1, "gamma": F(1, 5)})
    assert (on.expected, on.stabilizer.label) == ("D4", "D4")
    assert (off.expected, off.stabilizer.label) == ("Z2^2", "Z2^2")


def test_non_type_r_renders_containment_only():
    assert render_decomposition("G[A_{4,12}]", "M1", "O2", False) == \
        "G[A_{4,12}] ⋊ Aut(G)_{M₁} ⊆ Isom(G[A_{4,12}], M₁)"
    assert render_decomposition("G_{3.3} × ℝ", "M1", "O2xZ2", True) == \
        "Isom(G_{3.3} × ℝ, M₁) ≅ (G_{3.3} × ℝ) ⋊ (O(2) × ℤ₂)"


def test_report_json_schema():
    rep = isometry_report(AlgebraId.make("A48"), get_family("A48", "M1"), {"alpha": 1, "mu": 2})
    js = rep.to_json()
    for key in ("group", "case", "params", "label", "finite_order", "continuous_dim", "components",
                "elements", "expected", "match"):
        assert key in js
    assert js["label"] == "Z2^2" and js["match"] is True and js["group"] == "G4.8a"
    assert js["params"] == {"alpha": "1", "mu": "2"}


def _all_reports(seed=0):
    rng = random.Random(seed)
    for name in CATALOG.names():
        if name in NON_TYPE_R:
            continue
        aid = sample_algebra(name, rng)
        for f in CATALOG.list_metric_families(name):
            params = sample_family_params(f, rng)
            yield aid, f, params, isometry_report(aid, f, params)


def test_membership_soundness_and_group_axioms():
    I = RatMat.identity(4)
    for aid, f, params, rep in _all_reports(1):
        sc, M = get_algebra(aid), rep.metric
        s = rep.stabilizer
        assert I in s.finite_elements
        assert is_closed(list(s.finite_elements))
        for A in s.finite_elements:
            assert is_automorphism(sc, A) and congruence(A, M) == M
            P, k = A, 1
            while P != I:
                P, k = P @ A, k + 1
            assert 8 % k == 0
        for Dm in s.continuous_basis:
            assert is_derivation(sc, Dm)
            assert Dm.T @ M + M @ Dm == RatMat.zeros(4)


def test_identity_component_sampling():
    for aid, f, params, rep in _all_reports(2):
        sc, Mf = get_algebra(aid), rep.metric.to_float()
        for Dm in rep.stabilizer.continuous_basis:
            for t in (0.3, 1.1, 2.7):
                E = mat_exp(Dm, t)
                assert np.max(np.abs(E.T @ Mf @ E - Mf)) <= 1e-9
                assert automorphism_residual(sc, E) <= 1e-9


def test_scaling_invariance():
    rng = random.Random(5)
    for aid, f, params, rep in list(_all_reports(3))[::3]:
        sc, M = get_algebra(aid), rep.metric
        tmpl = get_aut_template(aid)
        c = F(rng.randint(1, 20), rng.randint(1, 7))
        assert discrete_stabilizer(sc, M * c, tmpl) == list(rep.stabilizer.finite_elements)
        assert len(stabilizer_lie_algebra(sc, M * c)) == rep.stabilizer.continuous_dim


def test_conjugation_covariance():
    rng = random.Random(6)
    for aid, f, params, rep in list(_all_reports(4))[::2]:
        sc, M = get_algebra(aid), rep.metric
        tmpl = get_aut_template(aid)
        for _ in range(3):
            psi = tmpl.random_instance(rng)
            N = pullback(psi.inverse(), M)          # psi^t M psi
            for A in rep.stabilizer.finite_elements:
                B = psi.inverse() @ A @ psi
                assert is_automorphism(sc, B)
                assert congruence(B, N) == N


def test_unfiltered_search_flags_missing_template_elements():
    # a template missing the 2A2 swap branch must downgrade completeness
    aid, sc, M = _setup("2A2", "M1", {"alpha": 1, "mu": 1})
    from isom4d.catalog.templates import AutTemplate
    narrow = AutTemplate(aid, get_aut_template(aid).branches[:1])
    s = compute_stabilizer(sc, M, narrow)
    assert s.completeness_flag == "possibly-incomplete"

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from isom4d.catalog import (CATALOG, NON_TYPE_R, AlgebraId, get_algebra, get_aut_template, get_family,
                            list_metric_families, resolve_name)
from isom4d.errors import NoTemplate, ParamOutOfDomain, UnknownAlgebra
from isom4d.lietheory import is_automorphism, is_unimodular
from isom4d.sampling import sample_algebra
from isom4d.verify import GOLDEN_CATALOG

F = Fraction


def _brackets(sc):
    return {(i, j): {k: v for k, v in enumerate(sc.c[i - 1][j - 1], 1) if v}
            for i in range(1, 5) for j in range(i + 1, 5) if any(sc.c[i - 1][j - 1])}


def test_2a2_brackets():
    assert _brackets(get_algebra("2A2")) == {(1, 2): {2: 1}, (3, 4): {4: 1}}


def test_a45_substitution():
    sc = get_algebra("A45ab", {"alpha": F(1, 2), "beta": 1})
    assert _brackets(sc) == {(1, 4): {1: 1}, (2, 4): {2: F(1, 2)}, (3, 4): {3: 1}}


def test_a35_out_of_domain():
    with pytest.raises(ParamOutOfDomain):
        get_algebra("A35a+A1", {"alpha": 2})


def test_a44_template_shape():
    (grid,) = get_aut_template("A44").branches
    assert [grid[i][i] for i in range(3)] == ["a1"] * 3
    assert grid[0][1] == grid[1][2] == "a2"
    assert grid[3] == ("0", "0", "0", "1")


def test_a47_template_cells():
    (grid,) = get_aut_template("A47").branches
    assert grid[0][0] == "a6**2"
    assert grid[0][1] == "-a12*a6"


def test_no_template_exactly_for_non_type_r():
    raised = set()
    for name in CATALOG.names():
        try:
            get_aut_template(name)
        except NoTemplate:
            raised.add(name)
    assert raised == {"A37a+A1", "A46ab", "A411a", "A412"} == set(NON_TYPE_R)


def test_family_counts():
    a21 = list_metric_families("A2+2A1")
    assert [f.expected for f in a21] == ["O2xZ2", "O2", "Z2^2", "Z2", "trivial"]
    assert [f.case for f in list_metric_families("2A2")] == ["M1", "M2", "M3", "M4", "Mgamma", "Mnu"]
    (a44,) = list_metric_families("A44")
    assert a44.expected == "Z2"
    with pytest.raises(NoTemplate):
        list_metric_families("A412")


def test_case_names_are_forgiving():
    assert get_family("2A2", "mγ").case == "Mgamma"
    assert get_family("2A2", "m_nu").case == "Mnu"
    with pytest.raises(KeyError):
        get_family("A44", "M7")


def test_aliases():
    assert resolve_name("A48") == "A49b"
    assert resolve_name("G4.7") == "A47"
    with pytest.raises(UnknownAlgebra):
        resolve_name("bogus")


def test_jacobi_and_nonunimodular_at_random_params():
    rng = random.Random(1)
    for name in CATALOG.names():
        for _ in range(10):
            sc = get_algebra(sample_algebra(name, rng))
            assert sc.satisfies_jacobi(), name
            assert not is_unimodular(sc), name


def test_templates_are_automorphisms():
    rng = random.Random(4)
    for name in CATALOG.names():
        if name in NON_TYPE_R:
            continue
        aid = sample_algebra(name, rng)
        sc, tmpl = get_algebra(aid), get_aut_template(aid)
        for _ in range(100):
            assert is_automorphism(sc, tmpl.random_instance(rng)), name


def test_a49b_template_needs_nonzero_beta():
    with pytest.raises(ParamOutOfDomain):
        get_aut_template(AlgebraId.make("A49b", {"beta": 0}))


def test_catalog_dump_is_deterministic_and_golden():
    text = CATALOG.dumps()
    assert text == CATALOG.dumps()
    data = json.loads(text)
    assert len(data["algebras"]) == 16
    assert data == json.loads(GOLDEN_CATALOG.read_text())


def test_single_entry_dump():
    data = json.loads(CATALOG.dumps(["2A2"]))
    assert [a["name"] for a in data["algebras"]] == ["2A2"]

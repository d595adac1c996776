"""Catalog of algebras, automorphism templates and metric representatives.

:data:`CATALOG` is the shipped, immutable instance.  The module-level helpers
(:func:`get_algebra`, :func:`get_aut_template`, :func:`list_metric_families`)
read from it; the verification harness takes a :class:`Catalog` argument so
tests can hand it a deliberately corrupted copy.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Mapping

import sympy as sp

from ..errors import NoTemplate, ParamOutOfDomain, UnknownAlgebra
from ..lietheory import StructureConstants
from .algebras import (ALGEBRAS, ALIASES, NON_TYPE_R, AlgebraId, AlgebraSpec, algebra_names,
                       group_of, resolve_name, spec, structure_constants)
from .families import FAMILIES, MetricFamily, Param, Relation, canonical_case, probe_family
from .templates import TEMPLATES, AutTemplate

CATALOG_VERSION = "1.0"

__all__ = [
    "ALGEBRAS", "ALIASES", "NON_TYPE_R", "AlgebraId", "AlgebraSpec", "AutTemplate", "CATALOG",
    "CATALOG_VERSION", "Catalog", "MetricFamily", "Param", "Relation", "algebra_names",
    "canonical_case", "get_algebra", "get_aut_template", "get_family", "group_of", "list_metric_families",
    "probe_family", "resolve_name", "spec",
]


def _s(expr) -> str:
    return sp.sstr(sp.sympify(expr))


@dataclass(frozen=True)
class Catalog:
    algebras: tuple[AlgebraSpec, ...]
    templates: Mapping[str, tuple]
    families: tuple[MetricFamily, ...]
    version: str = CATALOG_VERSION

    def spec(self, name: str) -> AlgebraSpec:
        name = resolve_name(name)
        for a in self.algebras:
            if a.name == name:
                return a
        raise UnknownAlgebra(name)

    def names(self) -> list[str]:
        return [a.name for a in self.algebras]

    def get_algebra(self, aid: AlgebraId | str, params: Mapping[str, object] | None = None) -> StructureConstants:
        if isinstance(aid, str):
            aid = AlgebraId.make(aid, params)
        return structure_constants(self.spec(aid.name), aid.values)

    def get_aut_template(self, aid: AlgebraId | str) -> AutTemplate:
        if isinstance(aid, str):
            aid = AlgebraId.make(aid)
        if aid.name in NON_TYPE_R:
            raise NoTemplate(f"{aid.name} is not of type (R); no automorphism template is encoded")
        if aid.name == "A49b" and aid.values["beta"] == 0:
            raise ParamOutOfDomain("A49b template divides by beta; beta = 0 is excluded")
        return AutTemplate(aid, self.templates[aid.name])

    def list_metric_families(self, name: str) -> list[MetricFamily]:
        name = resolve_name(name)
        if name in NON_TYPE_R:
            raise NoTemplate(f"{name} is not of type (R); no metric representatives are encoded")
        return [f for f in self.families if f.algebra == name]

    def get_family(self, name: str, case: str) -> MetricFamily:
        fams = self.list_metric_families(name)
        want = canonical_case(case)
        for f in fams:
            if f.case.lower() == want.lower():
                return f
        raise KeyError(f"{resolve_name(name)} has no metric case {case!r}; "
                       f"available: {', '.join(f.case for f in fams)}")

    # mutation helpers, used by the tripwire tests --------------------------
    def with_bracket(self, name: str, i: int, j: int, k: int, value) -> "Catalog":
        """Copy with the coefficient of e_k in [e_i, e_j] replaced (1-based, i < j)."""
        s = self.spec(name)
        kept = []
        for (a, b, out) in s.brackets:
            terms = tuple((kk, v) for kk, v in out if not (a == i and b == j and kk == k))
            if terms:
                kept.append((a, b, terms))
        kept.append((i, j, ((k, value),)))
        new = dataclasses.replace(s, brackets=tuple(kept))
        return dataclasses.replace(self, algebras=tuple(new if a.name == s.name else a for a in self.algebras))

    def with_closed_form_entry(self, name: str, case: str, r: int, c: int, expr) -> "Catalog":
        """Copy with closed-form cell (r, c) (0-based) replaced by expr."""
        f = self.get_family(name, case)
        cells = [list(row) for row in f.closed_form.tolist()]
        cells[r][c] = sp.sympify(expr)
        g = dataclasses.replace(f, closed_form=sp.ImmutableMatrix(cells))
        return dataclasses.replace(self, families=tuple(g if x is f else x for x in self.families))

    # export ------------------------------------------------------------------
    def algebra_json(self, name: str) -> dict:
        s = self.spec(name)
        entry = {
            "name": s.name,
            "display": s.display,
            "group": s.group,
            "group_display": s.group_display,
            "type_r": s.type_r,
            "params": list(s.params),
            "constraints": [c.text for c in s.constraints],
            "default_params": {k: str(v) for k, v in s.default_params},
            "brackets": [[i, j, k, _s(v)] for i, j, k, v in s.bracket_exprs()],
            "templates": None,
            "families": [],
        }
        if s.name not in NON_TYPE_R:
            entry["templates"] = [[list(row) for row in g] for g in self.templates[s.name]]
            entry["families"] = [family_json(f) for f in self.list_metric_families(s.name)]
        return entry

    def to_json(self, names: list[str] | None = None) -> dict:
        names = self.names() if names is None else [resolve_name(n) for n in names]
        return {"version": self.version, "algebras": [self.algebra_json(n) for n in names]}

    def dumps(self, names: list[str] | None = None) -> str:
        return json.dumps(self.to_json(names), indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def family_json(f: MetricFamily) -> dict:
    out = {
        "case": f.case,
        "params": [{"name": p.name, "domain": p.domain} for p in f.params],
        "u_pattern": [[_s(v) for v in row] for row in f.u_pattern.tolist()],
        "closed_form": [[_s(v) for v in row] for row in f.closed_form.tolist()],
        "expected": f.expected,
        "relations": [str(r) for r in f.relations],
    }
    if f.expected_if is not None:
        out["expected_if"] = {"condition": str(f.expected_if[0]), "label": f.expected_if[1]}
    if f.note:
        out["note"] = f.note
    return out


CATALOG = Catalog(ALGEBRAS, TEMPLATES, FAMILIES)


def get_algebra(aid: AlgebraId | str, params: Mapping[str, object] | None = None) -> StructureConstants:
    return CATALOG.get_algebra(aid, params)


def get_aut_template(aid: AlgebraId | str) -> AutTemplate:
    return CATALOG.get_aut_template(aid)


def list_metric_families(name: str) -> list[MetricFamily]:
    return CATALOG.list_metric_families(name)


def get_family(name: str, case: str) -> MetricFamily:
    return CATALOG.get_family(name, case)

"""The verify-all harness: every check the package knows, run over seeded samples.

Failures are collected as data.  Each sample gets its own RNG seeded from
(seed, algebra, case, index), so results do not depend on evaluation order
or on the number of worker processes.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .catalog import CATALOG, Catalog, resolve_name
from .errors import Isom4dError
from .lietheory import is_automorphism, is_type_R
from .realization import MODELS, REALIZED_GROUPS, verify_bracket_match
from .sampling import sample_algebra, sample_family_params
from .stabilizer import COMPLETE, isometry_report

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_CATALOG = GOLDEN_DIR / "catalog.json"
EXPECTED_NON_TYPE_R = frozenset({"A37a+A1", "A46ab", "A411a", "A412"})


def golden_report_path(samples: int, seed: int) -> Path:
    return GOLDEN_DIR / f"verify_samples{samples}_seed{seed}.json"


@dataclass
class VerifyOutcome:
    total: int = 0
    matched: int = 0
    mismatched: list[dict] = field(default_factory=list)
    flagged_incomplete: list[dict] = field(default_factory=list)
    reports: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatched

    def record(self, ok: bool, **info) -> None:
        self.total += 1
        if ok:
            self.matched += 1
        else:
            self.mismatched.append(info)

    def to_json(self, with_reports: bool = True) -> dict:
        out = {
            "total": self.total,
            "matched": self.matched,
            "mismatched": self.mismatched,
            "flagged_incomplete": self.flagged_incomplete,
        }
        if with_reports:
            out["reports"] = self.reports
        return out


def _rng(seed: int, *tags) -> random.Random:
    return random.Random(":".join(map(str, (seed,) + tags)))


_WORKER_CATALOG: Catalog = CATALOG


def _set_worker_catalog(catalog: Catalog) -> None:
    global _WORKER_CATALOG
    _WORKER_CATALOG = catalog


def _family_task(args) -> dict:
    name, case, k, seed = args
    catalog = _WORKER_CATALOG
    rng = _rng(seed, name, case, k)
    try:
        f = catalog.get_family(name, case)
        aid = sample_algebra(name, rng, catalog)
        params = sample_family_params(f, rng, k)
        rep = isometry_report(aid, f, params, catalog)
        return {"report": rep.to_json()}
    except (Isom4dError, AssertionError, ValueError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}", "algebra": name, "case": case}


def _family_items(catalog: Catalog, names: Sequence[str], samples: int, seed: int):
    for name in names:
        if name in EXPECTED_NON_TYPE_R:
            continue
        for f in catalog.list_metric_families(name):
            for k in range(samples):
                yield (name, f.case, k, seed)


def _map(fn, items, jobs: int, catalog: Catalog):
    # catalogs hold lambdas and cannot be pickled; forked workers inherit them
    if jobs <= 1 or "fork" not in mp.get_all_start_methods():
        _set_worker_catalog(catalog)
        try:
            return [fn(it) for it in items]
        finally:
            _set_worker_catalog(CATALOG)
    with ProcessPoolExecutor(max_workers=jobs, mp_context=mp.get_context("fork"),
                             initializer=_set_worker_catalog, initargs=(catalog,)) as ex:
        return list(ex.map(fn, items, chunksize=4))   # map keeps input order


def check_golden_catalog(catalog: Catalog, names: Sequence[str] | None = None) -> list[str]:
    if not GOLDEN_CATALOG.exists():
        return [f"golden catalog {GOLDEN_CATALOG.name} is missing"]
    golden = json.loads(GOLDEN_CATALOG.read_text())
    current = json.loads(catalog.dumps())
    if golden.get("version") != current["version"]:
        return [f"catalog version {current['version']} vs golden {golden.get('version')}"]
    by_name = {a["name"]: a for a in golden["algebras"]}
    bad = []
    for entry in current["algebras"]:
        if names is not None and entry["name"] not in names:
            continue
        if by_name.get(entry["name"]) != entry:
            bad.append(entry["name"])
    return bad


def verify_all(samples: int = 2, seed: int = 7, catalog: Catalog = CATALOG, jobs: int = 1,
               algebras: Sequence[str] | None = None, compare_golden: bool = True) -> VerifyOutcome:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    names = catalog.names() if algebras is None else [resolve_name(a) for a in algebras]
    out = VerifyOutcome()

    # golden catalog (catches any transcription edit, including ones no other check sees)
    if compare_golden:
        bad = check_golden_catalog(catalog, names)
        out.record(not bad, check="golden-catalog", algebra=", ".join(bad) or None, case=None, params=None,
                   expected=GOLDEN_CATALOG.name, got="changed" if bad else "identical")

    # algebra-level checks
    for name in names:
        for k in range(samples):
            rng = _rng(seed, name, "algebra", k)
            aid = sample_algebra(name, rng, catalog)
            sc = catalog.get_algebra(aid)
            viol = sc.jacobi_violations()
            out.record(not viol, check="jacobi", algebra=name, case=None,
                       params={p: str(v) for p, v in aid.values.items()}, expected="Jacobi", got=str(viol[:3]))
            want_r = name not in EXPECTED_NON_TYPE_R
            got_r = is_type_R(sc, seed=seed + k)
            out.record(got_r == want_r, check="type-r", algebra=name, case=None,
                       params={p: str(v) for p, v in aid.values.items()}, expected=want_r, got=got_r)
            if want_r:
                tmpl = catalog.get_aut_template(aid)
                A = tmpl.random_instance(rng)
                ok = is_automorphism(sc, A)
                out.record(ok, check="template", algebra=name, case=None,
                           params={p: str(v) for p, v in aid.values.items()}, expected="automorphism",
                           got=None if ok else A.to_strings())

    # metric families
    results = _map(_family_task, list(_family_items(catalog, names, samples, seed)), jobs, catalog)
    for res in results:
        if "error" in res:
            out.record(False, check="family", algebra=res["algebra"], case=res["case"], params=None,
                       expected=None, got=res["error"])
            continue
        rep = res["report"]
        out.reports.append(rep)
        complete = rep["completeness"] == COMPLETE
        if not complete:
            out.flagged_incomplete.append({"algebra": rep["algebra"], "case": rep["case"], "params": rep["params"]})
        out.record(bool(rep["match"]) and complete, check="family", algebra=rep["algebra"], case=rep["case"],
                   params=rep["params"], expected=rep["expected"], got=rep["label"])

    # golden reports, when a file exists for these settings
    gpath = golden_report_path(samples, seed)
    if compare_golden and algebras is None and gpath.exists():
        golden = json.loads(gpath.read_text())["reports"]
        same = golden == out.reports
        out.record(same, check="golden-reports", algebra=None, case=None, params=None,
                   expected=gpath.name, got="identical" if same else _first_diff(golden, out.reports))

    # realizations
    for g in REALIZED_GROUPS:
        alg = "A35a+A1" if g == "GcxR" else MODELS[g].algebra
        if alg not in names:
            continue
        for k in range(samples):
            rng = _rng(seed, g, "realization", k)
            aid = sample_algebra(alg, rng, catalog)
            if g == "GcxR":
                params = {"alpha": aid.values["alpha"]}
            else:
                params = {gp: aid.values[ap] for gp, ap in MODELS[g].param_map.items()}
            try:
                ok, got = verify_bracket_match(g, params, catalog), "match"
            except (Isom4dError, AssertionError) as exc:
                ok, got = False, str(exc)
            out.record(ok, check="realization", algebra=g, case=None,
                       params={p: str(v) for p, v in params.items()}, expected="match", got=got)
    return out


def _first_diff(golden: list, current: list) -> str:
    if len(golden) != len(current):
        return f"{len(current)} reports vs {len(golden)} golden"
    for i, (g, c) in enumerate(zip(golden, current)):
        if g != c:
            keys = sorted(k for k in set(g) | set(c) if g.get(k) != c.get(k))
            return f"report {i} ({c.get('algebra')}/{c.get('case')}) differs in {', '.join(keys)}"
    return "identical"


def write_golden(samples: int = 2, seed: int = 7) -> list[Path]:
    GOLDEN_DIR.mkdir(exist_ok=True)
    GOLDEN_CATALOG.write_text(CATALOG.dumps())
    res = verify_all(samples, seed, compare_golden=False)
    path = golden_report_path(samples, seed)
    path.write_text(json.dumps({"samples": samples, "seed": seed, "reports": res.reports},
                               indent=1, ensure_ascii=False) + "\n")
    return [GOLDEN_CATALOG, path]

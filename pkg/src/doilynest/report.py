"""Pipeline orchestration, published-data checks and JSON/DOT export."""
from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .cliques import DEFAULT_MAX_K, build_graph, enumerate_maximal_sets, predicted_set_count, set_violations
from .geometry import (Doily, GeometrySnapshot, Pencil, StructureError, build_geometry, detect_pencils,
                       enumerate_doilies, exceptional_subgeometry, full_structure, triad_reports)
from .isomorphism import isomorphic
from .pauli import Case, index_to_element

log = logging.getLogger(__name__)

COUNT_FIELDS = ("elements", "set_size", "sets", "ordinary", "doilies", "pencils", "exceptional")

# counts reported for k = 2..5
PUBLISHED = {
    2: dict(elements=63, set_size=7, sets=39, ordinary=36, doilies=3, pencils=1, exceptional=3),
    3: dict(elements=255, set_size=15, sets=87, ordinary=72, doilies=7, pencils=3, exceptional=15),
    4: dict(elements=1023, set_size=31, sets=183, ordinary=144, doilies=15, pencils=7, exceptional=39),
    5: dict(elements=4095, set_size=63, sets=375, ordinary=288, doilies=31, pencils=15, exceptional=87),
}


def expected_counts(k: int) -> dict[str, int]:
    """Counts predicted by the closed-form pattern; extrapolation for k >= 6."""
    if k < 2:
        raise ValueError("k must be >= 2")
    sets = predicted_set_count(k)
    ordinary = 36 * 2 ** (k - 2)
    return dict(elements=4 * 4 ** k - 1, set_size=2 ** (k + 1) - 1, sets=sets, ordinary=ordinary,
                doilies=2 ** k - 1, pencils=2 ** (k - 1) - 1, exceptional=sets - ordinary)


# --- published listings --------------------------------------------------

@dataclass
class ListingCheck:
    k: int
    ok: bool
    matched: int
    published: int
    computed: int
    missing: list[dict] = field(default_factory=list)
    extra: list[list[int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "matched": self.matched, "published": self.published,
                "computed": self.computed, "missing": self.missing, "extra": self.extra}


def load_listing(path) -> list[tuple[tuple[int, ...], str]]:
    """Parse a listing file: ``i,j,...  # label`` per line, ``#`` lines are comments."""
    rows = []
    for raw in Path(path).read_text().splitlines():
        body, _, label = raw.partition("#")
        body = body.strip()
        if not body:
            continue
        rows.append((tuple(sorted(int(x) for x in body.split(","))), label.strip()))
    return rows


def listing_path(k: int) -> Path:
    if k not in (2, 3):
        raise ValueError(f"published listings exist only for k=2 and k=3, not k={k}")
    return Path(str(resources.files("doilynest") / "data" / f"listings_k{k}.txt"))


def verify_published_listings(k: int, sets, path=None) -> ListingCheck:
    """Compare enumerated sets with a listing file as sets of index-sets."""
    published = load_listing(path or listing_path(k))
    computed = {tuple(s) for s in sets}
    labels = {s: lab for s, lab in published}
    missing = [{"label": lab, "set": list(s)} for s, lab in published if s not in computed]
    extra = [list(s) for s in sorted(computed - set(labels))]
    matched = sum(1 for s in labels if s in computed)
    ok = not missing and not extra and len(labels) == len(published)
    return ListingCheck(k, ok, matched, len(published), len(computed), missing, extra)


# --- pipeline ------------------------------------------------------------

@dataclass
class CaseReport:
    k: int
    mode: str
    counts: dict
    expected: dict
    matches: dict
    spectrum: dict
    nesting: dict
    triads: list
    violations: list
    timings: dict
    listings: dict | None = None
    snapshot: GeometrySnapshot | None = field(default=None, repr=False)
    doilies: list[Doily] = field(default_factory=list, repr=False)
    pencils: list[Pencil] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self, normalize_timings: bool = False) -> dict:
        snap = self.snapshot
        exceptional = set(snap.exceptional) if snap else set()
        out = {
            "k": self.k,
            "mode": self.mode,
            "counts": self.counts,
            "expected": self.expected,
            "matches": self.matches,
            "points": [{"id": i, "members": list(m), "exceptional": i in exceptional}
                       for i, m in enumerate(snap.points)] if snap else [],
            "lines": [list(line) for line in snap.lines] if snap else [],
            "doilies": [list(dl.points) for dl in self.doilies],
            "pencils": [{"carrier": list(pc.carrier), "doilies": list(pc.doilies)} for pc in self.pencils],
            "nesting": self.nesting,
            "spectrum": {str(c): n for c, n in self.spectrum.items()},
            "triads": self.triads,
            "violations": self.violations,
            "timings": {name: 0.0 for name in self.timings} if normalize_timings else self.timings,
        }
        if self.listings is not None:
            out["listings"] = self.listings
        return out


@contextmanager
def _timed(timings: dict, name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round(time.perf_counter() - start, 6)
        log.info("stage %s: %.3fs", name, timings[name])


def compute_snapshot(k: int, max_k: int = DEFAULT_MAX_K, threads: int | None = None,
                     contract_twins: bool = False, strict: bool = False) -> GeometrySnapshot:
    """Graph, maximal sets and geometry for one case, without doilies."""
    g = build_graph(k, max_k=max_k, threads=threads)
    return build_geometry(enumerate_maximal_sets(g, contract_twins), k, strict=strict)


def run_pipeline(k: int, *, max_k: int = DEFAULT_MAX_K, threads: int | None = None,
                 verify_paper: bool = False, contract_twins: bool = False,
                 check_subgroups: bool = True) -> CaseReport:
    """Run every stage for case ``k`` and collect counts, checks and violations.

    Raises :class:`~doilynest.cliques.CaseTooLarge` when ``k`` exceeds ``max_k``;
    structural failures are recorded in the report instead.
    """
    case = Case(k)
    timings: dict[str, float] = {}
    violations: list[dict] = []
    published = k in PUBLISHED
    expected = dict(PUBLISHED[k]) if published else expected_counts(k)

    with _timed(timings, "graph"):
        g = build_graph(case, max_k=max_k, threads=threads)
    with _timed(timings, "enumerate"):
        sets = enumerate_maximal_sets(g, contract_twins)
    with _timed(timings, "validate_sets"):
        violations += set_violations(g, sets, check_subgroups=check_subgroups)
    with _timed(timings, "geometry"):
        snap = build_geometry(sets, k, strict=False)
    with _timed(timings, "doilies"):
        doilies = enumerate_doilies(snap, strict=False)
    with _timed(timings, "pencils"):
        pencils = detect_pencils(snap, doilies, strict=False)
        triads = triad_reports(snap, doilies, pencils)
    violations += snap.violations
    violations += [{"stage": "triads", "kind": "carrier triad not tricentric", "detail": t}
                   for t in triads if t["exceptional_only"] and not t["tricentric"]]

    sizes = sorted({len(s) for s in sets})
    counts = dict(elements=g.n, set_size=sizes[0] if len(sizes) == 1 else sizes, sets=len(sets),
                  ordinary=len(snap.ordinary), doilies=len(doilies), pencils=len(pencils),
                  exceptional=len(snap.exceptional), lines=len(snap.lines))
    matches = {f: counts[f] == expected[f] for f in COUNT_FIELDS}
    if published:
        violations += [{"stage": "counts", "kind": "published count mismatch",
                        "detail": {"field": f, "expected": expected[f], "observed": counts[f]}}
                       for f in COUNT_FIELDS if not matches[f]]

    nesting = {"verified": "not-applicable", "against": None, "witness": []}
    if k >= 4:
        with _timed(timings, "nesting"):
            inner = compute_snapshot(k - 2, max_k=max_k, threads=threads, contract_twins=contract_twins)
            ok, witness = isomorphic(exceptional_subgeometry(snap), full_structure(inner))
            core = exceptional_subgeometry(snap)
            nesting = {"verified": "yes" if ok else "no", "against": k - 2,
                       "witness": [[core.labels[p], q] for p, q in sorted(witness.items())] if ok else []}
        if published and not ok:
            violations.append({"stage": "nesting", "kind": "exceptional core not isomorphic",
                               "detail": {"against": k - 2}})

    listings = None
    if verify_paper:
        if k in (2, 3):
            with _timed(timings, "listings"):
                check = verify_published_listings(k, sets)
            listings = check.to_json()
            if not check.ok:
                violations.append({"stage": "listings", "kind": "published listing mismatch",
                                   "detail": {"missing": check.missing, "extra": check.extra}})
        else:
            listings = {"ok": None, "note": "no published listing for this k"}

    return CaseReport(k=k, mode="published" if published else "conjecture", counts=counts,
                      expected=expected, matches=matches, spectrum=snap.spectrum, nesting=nesting,
                      triads=triads, violations=violations, timings=timings, listings=listings,
                      snapshot=snap, doilies=doilies, pencils=pencils)


# --- export --------------------------------------------------------------

def _check_path(path) -> Path:
    if path is None or str(path) == "":
        raise ValueError("output path must not be empty")
    return Path(path)


def dumps_json(report: CaseReport, normalize_timings: bool = False) -> str:
    return json.dumps(report.to_json(normalize_timings), indent=2) + "\n"


def emit_json(report: CaseReport, path, normalize_timings: bool = False) -> None:
    _check_path(path).write_text(dumps_json(report, normalize_timings))


def dot_text(snap: GeometrySnapshot, doilies: list[Doily] = ()) -> str:
    """Collinearity graph in DOT with an element legend and one comment block per line."""
    case = snap.case
    member_of: dict[int, list[int]] = {p: [] for p in range(snap.n)}
    for di, dl in enumerate(doilies):
        for p in dl.points:
            member_of[p].append(di)
    exceptional = set(snap.exceptional)
    out = [f"graph geometry_k{snap.k} {{", "  // legend: element index = operator (qubit (x) qudit)"]
    for i in range(1, case.n_elements + 1):
        out.append(f"  // element {i} = {index_to_element(i, case).label(case.d)}")
    out.append("  node [shape=circle];")
    for p, members in enumerate(snap.points):
        style = ', style=filled, fillcolor="gray80"' if p in exceptional else ""
        out.append(f'  p{p} [label="{p}", exceptional={str(p in exceptional).lower()}, '
                   f'doilies="{",".join(map(str, member_of[p]))}", '
                   f'members="{",".join(map(str, members))}"{style}];')
    for li, line in enumerate(snap.lines):
        core = ",".join(map(str, snap.line_core(line)))
        out.append(f"  /* line {li}: p{line[0]} p{line[1]} p{line[2]} core={{{core}}} */")
    out.append("  // 2-section of the lines (collinearity graph)")
    for p in range(snap.n):
        for q in sorted(snap.adjacency[p]):
            if q > p:
                out.append(f"  p{p} -- p{q};")
    out.append("}")
    return "\n".join(out) + "\n"


def emit_dot(snap: GeometrySnapshot, path, doilies: list[Doily] = ()) -> None:
    _check_path(path).write_text(dot_text(snap, doilies))


__all__ = ["CaseReport", "ListingCheck", "PUBLISHED", "StructureError", "compute_snapshot", "dot_text",
           "dumps_json", "emit_dot", "emit_json", "expected_counts", "load_listing", "run_pipeline",
           "verify_published_listings"]

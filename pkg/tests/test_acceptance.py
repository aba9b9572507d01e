"""Exit criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run."""
import itertools
import json
import time

import pytest

from doilynest.cli import main
from doilynest.geometry import doily_problems, tricentric_triad_check
from doilynest.oracle import agreement
from doilynest.pauli import commutes_index
from doilynest.report import run_pipeline

RESULTS = []

TABLE = {  # elements, sets, set size, exceptional, doilies, pencils, ordinary
    2: (63, 39, 7, 3, 3, 1, 36),
    3: (255, 87, 15, 15, 7, 3, 72),
    4: (1023, 183, 31, 39, 15, 7, 144),
    5: (4095, 375, 63, 87, 31, 15, 288),
}
K5_SECONDS = 60.0
K4_SECONDS = 5.0


def record(number, name, ok, detail=""):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, detail


@pytest.fixture(scope="module")
def reports():
    return {k: run_pipeline(k, verify_paper=k in (2, 3)) for k in TABLE}


def test_1_oracle_gate():
    details, ok = [], True
    for k, pairs in ((2, 1953), (3, 32385)):
        checked, bad = agreement(k, lambda i, j, k=k: commutes_index(i, j, k))
        ok &= checked == pairs and not bad
        details.append(f"k={k}: {checked - len(bad)}/{checked}")
    record(1, "combinatorial commutation agrees with matrix oracle", ok, "; ".join(details))


def test_2_listing_reproduction(reports):
    details, ok = [], True
    for k, n in ((2, 39), (3, 87)):
        lst = reports[k].listings
        ok &= lst["ok"] is True and lst["matched"] == n
        details.append(f"k={k}: {lst['matched']}/{lst['published']}")
    record(2, "published listings reproduced exactly", ok, "; ".join(details))


def test_3_count_table(reports):
    bad = []
    for k, row in TABLE.items():
        c = reports[k].counts
        got = (c["elements"], c["sets"], c["set_size"], c["exceptional"], c["doilies"], c["pencils"], c["ordinary"])
        if got != row:
            bad.append(f"k={k}: {got} != {row}")
    record(3, "count table k=2..5", not bad, "; ".join(bad))


def test_4_doily_validation(reports):
    problems = []
    for k, r in reports.items():
        struct = r.snapshot.structure()
        for i, dl in enumerate(r.doilies):
            problems += [f"k={k} doily {i}: {p}" for p in doily_problems(struct, dl.points)]
    total = sum(len(r.doilies) for r in reports.values())
    record(4, "every doily is a GQ(2,2)", not problems, f"{total} doilies, {len(problems)} violations")


def test_5_pencil_structure(reports):
    bad = []
    for k, r in reports.items():
        owners = {}
        for i, dl in enumerate(r.doilies):
            for line in dl.lines:
                owners.setdefault(line, []).append(i)
        if any(len(o) not in (1, 3) for o in owners.values()):
            bad.append(f"k={k}: line in 2 or >3 doilies")
        if len(r.pencils) != TABLE[k][5]:
            bad.append(f"k={k}: {len(r.pencils)} pencils")
    r3 = reports[3]
    exc = set(r3.snapshot.exceptional)
    (dist,) = [dl for dl in r3.doilies if set(dl.points) <= exc]
    carriers = [pc.carrier for pc in r3.pencils]
    skew = not any(set(a) & set(b) for a, b in itertools.combinations(carriers, 2))
    if not (skew and tricentric_triad_check(dist, carriers)):
        bad.append("k=3 carriers not a skew tricentric triad")
    record(5, "pencils and k=3 tricentric triad", not bad, "; ".join(bad))


def test_6_nesting(reports):
    verdicts = {k: reports[k].nesting["verified"] for k in (4, 5)}
    witnesses = {k: len(reports[k].nesting["witness"]) for k in (4, 5)}
    ok = verdicts == {4: "yes", 5: "yes"} and witnesses == {4: 39, 5: 87}
    record(6, "exceptional core of k isomorphic to full k-2 geometry", ok, f"{verdicts}, witness sizes {witnesses}")


def test_7_performance():
    t = time.perf_counter()
    r4 = run_pipeline(4)
    t4 = time.perf_counter() - t
    t = time.perf_counter()
    r5 = run_pipeline(5)
    t5 = time.perf_counter() - t
    ok = t4 < K4_SECONDS and t5 < K5_SECONDS and r4.ok and r5.ok
    record(7, "pipeline runtime", ok, f"k=4 {t4:.2f}s < {K4_SECONDS}s, k=5 {t5:.2f}s < {K5_SECONDS}s")


def test_8_conjecture_mode(tmp_path):
    out = tmp_path / "k6.json"
    code = main(["conjecture", "--k", "6", "--json", str(out)])
    data = json.loads(out.read_text())
    complete = code in (0, 2) and data["mode"] == "conjecture" and \
        set(data["matches"]) >= {"sets", "set_size", "exceptional", "doilies", "pencils"} and \
        data["nesting"]["verified"] in ("yes", "no") and isinstance(data["violations"], list)
    summary = ", ".join(f"{f}={data['counts'][f]}{'' if data['matches'][f] else '(!)'}"
                        for f in ("sets", "set_size", "exceptional", "doilies", "pencils"))
    record(8, "conjecture --k 6 completes with a full report", complete,
           f"{summary}, nesting vs k=4: {data['nesting']['verified']}, {len(data['violations'])} violations")


def test_9_determinism(tmp_path):
    bad = []
    for k in TABLE:
        blobs = []
        for run in range(2):
            path = tmp_path / f"k{k}_{run}.json"
            main(["geometry", "--k", str(k), "--json", str(path), "--normalize-timings"])
            blobs.append(path.read_bytes())
        if blobs[0] != blobs[1]:
            bad.append(f"k={k}")
    record(9, "byte-identical JSON across runs", not bad, "differs: " + ", ".join(bad) if bad else "k=2..5")

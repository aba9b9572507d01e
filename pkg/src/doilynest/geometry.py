"""Point-line geometry on maximal commuting sets.

Points are maximal commuting sets.  Two distinct points are collinear when
their sets share exactly ``2^k - 1`` elements; a line is a collinear triple
whose three pairwise intersections coincide.  On top of that we extract the
GQ(2,2) subgeometries (doilies), the pencils they form, and the induced
geometry on exceptional points.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field

from .cliques import to_mask
from .pauli import Case

log = logging.getLogger(__name__)

DOILY_SIZE = 15
DOILY_SRG = (15, 6, 1, 3)


class StructureError(RuntimeError):
    """A structural property the geometry is expected to have does not hold."""

    def __init__(self, kind: str, **detail):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail

    def as_violation(self, stage: str) -> dict:
        return {"stage": stage, "kind": self.kind, "detail": _jsonable(self.detail)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    return obj


@dataclass
class Structure:
    """Points ``0..n-1`` with a collinearity relation and lines (point triples)."""

    n: int
    adjacency: list[frozenset[int]]
    lines: list[tuple[int, int, int]]

    def collinear(self, p: int, q: int) -> bool:
        return q in self.adjacency[p]

    def lines_through(self) -> list[list[int]]:
        through: list[list[int]] = [[] for _ in range(self.n)]
        for li, line in enumerate(self.lines):
            for p in line:
                through[p].append(li)
        return through


@dataclass
class GeometrySnapshot:
    k: int
    points: list[tuple[int, ...]]
    masks: list[int]
    adjacency: list[frozenset[int]]
    spectrum: dict[int, int]
    lines: list[tuple[int, int, int]] = field(default_factory=list)
    exceptional: list[int] = field(default_factory=list)
    ordinary: list[int] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def case(self) -> Case:
        return Case(self.k)

    @property
    def n(self) -> int:
        return len(self.points)

    def collinear(self, p: int, q: int) -> bool:
        return q in self.adjacency[p]

    def line_core(self, line) -> tuple[int, ...]:
        a, b = line[0], line[1]
        return tuple(sorted(set(self.points[a]) & set(self.points[b])))

    def structure(self) -> Structure:
        return Structure(self.n, self.adjacency, self.lines)

    def is_exceptional(self, p: int) -> bool:
        return p in set(self.exceptional)


def build_geometry(sets, k: int, strict: bool = True) -> GeometrySnapshot:
    """Collinearity, lines and point classification for canonically ordered ``sets``.

    With ``strict=False`` line-axiom failures are recorded in ``violations``
    instead of raised.
    """
    case = Case(k)
    points = [tuple(s) for s in sets]
    masks = [to_mask(s) for s in points]
    n = len(points)
    core = case.core_size
    adjacency: list[set[int]] = [set() for _ in range(n)]
    spectrum: Counter[int] = Counter()
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            c = (mi & masks[j]).bit_count()
            spectrum[c] += 1
            if c == core:
                adjacency[i].add(j)
                adjacency[j].add(i)
    snap = GeometrySnapshot(k, points, masks, [frozenset(a) for a in adjacency],
                            dict(sorted(spectrum.items())))
    log.info("k=%d: intersection spectrum %s", k, snap.spectrum)
    try:
        snap.lines = detect_lines(snap)
    except StructureError as exc:
        if strict:
            raise
        snap.violations.append(exc.as_violation("lines"))
        snap.lines = detect_lines(snap, strict=False)
    snap.exceptional, snap.ordinary = classify_exceptional(snap)
    return snap


def detect_lines(snap: GeometrySnapshot, strict: bool = True) -> list[tuple[int, int, int]]:
    """Collinear triples with coinciding pairwise intersections.

    Every collinear pair has to lie on exactly one such triple.
    """
    lines = set()
    for p in range(snap.n):
        for q in snap.adjacency[p]:
            if q < p:
                continue
            core = snap.masks[p] & snap.masks[q]
            third = [r for r in snap.adjacency[p] & snap.adjacency[q]
                     if snap.masks[r] & snap.masks[p] == core and snap.masks[r] & snap.masks[q] == core]
            if len(third) != 1 and strict:
                raise StructureError("line axiom violated", pair=[p, q], thirds=sorted(third))
            for r in third:
                lines.add(tuple(sorted((p, q, r))))
    return sorted(lines)


def classify_exceptional(snap: GeometrySnapshot) -> tuple[list[int], list[int]]:
    """Exceptional points meet every other point in at least one element."""
    exceptional, ordinary = [], []
    for p, mp in enumerate(snap.masks):
        if all(mp & mq for q, mq in enumerate(snap.masks) if q != p):
            exceptional.append(p)
        else:
            ordinary.append(p)
    return exceptional, ordinary


# --- doilies -------------------------------------------------------------

@dataclass(frozen=True)
class Doily:
    points: tuple[int, ...]
    lines: tuple[tuple[int, int, int], ...]


def internal_lines(struct: Structure, points) -> list[tuple[int, int, int]]:
    pts = set(points)
    return [line for line in struct.lines if pts.issuperset(line)]


def doily_problems(struct: Structure, points) -> list[str]:
    """Reasons ``points`` is not a GQ(2,2) inside ``struct``; empty when it is one."""
    pts = sorted(set(points))
    problems = []
    if len(pts) != DOILY_SIZE:
        return [f"has {len(pts)} points"]
    lines = internal_lines(struct, pts)
    if len(lines) != DOILY_SIZE:
        problems.append(f"has {len(lines)} lines")
    per_point = Counter(p for line in lines for p in line)
    if any(per_point[p] != 3 for p in pts):
        problems.append("a point is not on exactly 3 lines")

    # induced collinearity: srg(15, 6, 1, 3)
    ptset = set(pts)
    nbr = {p: struct.adjacency[p] & ptset for p in pts}
    v, deg, lam, mu = DOILY_SRG
    if any(len(nbr[p]) != deg for p in pts):
        problems.append("induced collinearity graph is not 6-regular")
    for p, q in itertools.combinations(pts, 2):
        common = len(nbr[p] & nbr[q])
        if common != (lam if q in nbr[p] else mu):
            problems.append(f"srg parameter failure at {(p, q)}")
            break
    on_line = {frozenset(pair) for line in lines for pair in itertools.combinations(line, 2)}
    if any(frozenset((p, q)) not in on_line for p in pts for q in nbr[p]):
        problems.append("a collinear pair is not on an internal line")

    # axiom (iii): a point off a line is collinear with exactly one of its points
    for x in pts:
        for line in lines:
            if x not in line and sum(struct.collinear(x, y) for y in line) != 1:
                problems.append(f"axiom (iii) fails for point {x} and line {line}")
                break

    # no triangles: three lines pairwise meeting in three distinct points
    for l1, l2, l3 in itertools.combinations(lines, 3):
        m12, m13, m23 = set(l1) & set(l2), set(l1) & set(l3), set(l2) & set(l3)
        if m12 and m13 and m23 and len(m12 | m13 | m23) == 3:
            problems.append(f"triangle {l1}, {l2}, {l3}")
            break
    return problems


def _doily_search(struct: Structure, through: list[list[int]], seed: int):
    """Line-closed 15-point sets with min point ``seed`` where every point is on 3 inner lines."""
    lines = struct.lines
    seen: set[frozenset[int]] = set()
    found: list[frozenset[int]] = []

    def close(pts):
        # third point of any line with two points inside
        pts = set(pts)
        changed = True
        while changed:
            changed = False
            for p in list(pts):
                for li in through[p]:
                    line = lines[li]
                    inside = [x for x in line if x in pts]
                    if len(inside) == 2:
                        (out,) = set(line) - pts
                        if out < seed:
                            return None
                        pts.add(out)
                        changed = True
            if len(pts) > DOILY_SIZE:
                return None
        return frozenset(pts)

    def grow(pts):
        if pts is None or pts in seen:
            return
        seen.add(pts)
        count = Counter()
        for p in pts:
            for li in through[p]:
                if pts.issuperset(lines[li]):
                    count[p] += 1
        if any(c > 3 for c in count.values()):
            return
        short = [p for p in sorted(pts) if count[p] < 3]
        if not short:
            if len(pts) == DOILY_SIZE:
                found.append(pts)
            return
        q = short[0]
        for li in through[q]:
            line = lines[li]
            if pts.issuperset(line) or min(line) < seed:
                continue
            grow(close(pts | set(line)))

    grow(frozenset([seed]))
    return found


def enumerate_doilies(snap: GeometrySnapshot, strict: bool = True) -> list[Doily]:
    """All GQ(2,2) subgeometries, sorted by point tuple.

    Candidates that close up to 15 points but fail validation are logged and
    recorded as violations; so is incomplete coverage of the point set.
    """
    struct = snap.structure()
    through = struct.lines_through()
    doilies = []
    for seed in range(snap.n):
        for pts in _doily_search(struct, through, seed):
            problems = doily_problems(struct, pts)
            if problems:
                log.info("rejected 15-point candidate %s: %s", sorted(pts), problems)
                continue
            doilies.append(Doily(tuple(sorted(pts)), tuple(internal_lines(struct, pts))))
    doilies.sort(key=lambda dl: dl.points)
    covered = set().union(*(dl.points for dl in doilies)) if doilies else set()
    if len(covered) != snap.n:
        err = StructureError("doilies do not cover all points",
                             uncovered=sorted(set(range(snap.n)) - covered))
        if strict:
            raise err
        snap.violations.append(err.as_violation("doilies"))
    return doilies


# --- pencils -------------------------------------------------------------

@dataclass(frozen=True)
class Pencil:
    carrier: tuple[int, int, int]
    doilies: tuple[int, int, int]


def detect_pencils(snap: GeometrySnapshot, doilies: list[Doily], strict: bool = True) -> list[Pencil]:
    """Lines shared by several doilies; each must lie in exactly three."""
    owners: dict[tuple, list[int]] = {}
    for di, dl in enumerate(doilies):
        for line in dl.lines:
            owners.setdefault(line, []).append(di)
    pencils = []
    for line, ds in sorted(owners.items()):
        if len(ds) < 2:
            continue
        problem = None
        if len(ds) != 3:
            problem = StructureError("carrier line not in exactly 3 doilies", line=line, doilies=ds)
        else:
            for a, b in itertools.combinations(ds, 2):
                if set(doilies[a].points) & set(doilies[b].points) != set(line):
                    problem = StructureError("pencil doilies meet outside carrier", line=line,
                                             doilies=[a, b])
                    break
        if problem is not None:
            if strict:
                raise problem
            snap.violations.append(problem.as_violation("pencils"))
            if len(ds) != 3:
                continue
        pencils.append(Pencil(line, tuple(ds)))
    return pencils


# --- exceptional core ----------------------------------------------------

@dataclass
class Subgeometry(Structure):
    labels: list[int] = field(default_factory=list)


def exceptional_subgeometry(snap: GeometrySnapshot) -> Subgeometry:
    """Collinearity and lines induced on the exceptional points, relabelled ``0..m-1``.

    ``labels[i]`` is the snapshot point id of subgeometry point ``i``.
    """
    labels = sorted(snap.exceptional)
    pos = {p: i for i, p in enumerate(labels)}
    adjacency = [frozenset(pos[q] for q in snap.adjacency[p] if q in pos) for p in labels]
    lines = sorted(tuple(sorted(pos[p] for p in line)) for line in snap.lines
                   if all(p in pos for p in line))
    return Subgeometry(len(labels), adjacency, lines, labels)


def full_structure(snap: GeometrySnapshot) -> Subgeometry:
    return Subgeometry(snap.n, snap.adjacency, snap.lines, list(range(snap.n)))


# --- triads --------------------------------------------------------------

def tricentric_triad_check(doily: Doily, carriers) -> bool:
    """Three pairwise skew lines of ``doily`` met by exactly three of its lines.

    In the dual quadrangle these lines are a triad of points with three centres.
    """
    carriers = [tuple(sorted(c)) for c in carriers]
    if len(carriers) != 3:
        raise ValueError(f"need exactly 3 carrier lines, got {len(carriers)}")
    own = set(doily.lines)
    missing = [c for c in carriers if c not in own]
    if missing:
        raise ValueError(f"carrier lines not in the doily: {missing}")
    if any(set(a) & set(b) for a, b in itertools.combinations(carriers, 2)):
        return False
    return triad_centres(doily, carriers) == 3


def triad_centres(doily: Doily, carriers) -> int:
    """Number of doily lines meeting all of ``carriers``."""
    return sum(all(set(line) & set(c) for c in carriers) for line in doily.lines
               if line not in carriers)


def triad_reports(snap: GeometrySnapshot, doilies: list[Doily], pencils: list[Pencil]) -> list[dict]:
    """Triad check for every doily carrying exactly three pencil carriers."""
    carriers = {pc.carrier for pc in pencils}
    out = []
    for di, dl in enumerate(doilies):
        own = sorted(carriers & set(dl.lines))
        if len(own) != 3:
            continue
        skew = not any(set(a) & set(b) for a, b in itertools.combinations(own, 2))
        out.append({"doily": di, "carriers": [list(c) for c in own],
                    "exceptional_only": all(p in set(snap.exceptional) for p in dl.points),
                    "skew": skew, "centres": triad_centres(dl, own),
                    "tricentric": tricentric_triad_check(dl, own)})
    return out

"""Combinatorial quilted surfaces.

A patch is a compact surface of some genus with boundary circles; each circle
carries a cyclic list of boundary marked points (strip-like ends) and each
patch may carry interior punctures (cylindrical ends).  Boundary components
are either the intervals between consecutive marked points or whole circles
without marked points.  A *side* names such a component as
``(patch_id, circle_id, start)`` where ``start`` is the marked point the
interval leaves from, or ``None`` for a circle with no marked points.

A seam identifies two sides, reversing orientation: the interval
``p -> q`` seamed to ``p' -> q'`` matches ``p`` with ``q'`` and ``q`` with
``p'``.  Every side is either seamed exactly once or carries a boundary label.

For a marked point ``m`` the strip-like end has a ``t = 0`` side and a
``t = delta`` side.  An incoming end has its ``0`` side on the interval after
``m`` and its ``delta`` side on the interval before ``m``; for an outgoing end
the roles are swapped.  Quilted ends are the chains obtained by crossing seams
from a ``delta`` side to the matched ``0`` side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from . import symplectic as sp
from .errors import (
    BothSidesBoundary,
    CompositionNotEmbedded,
    EndMismatch,
    InvalidQuilt,
    ModulusMismatch,
    NotAStrip,
    QuiltError,
)

IN, OUT = "in", "out"
COMPOSE = "∘"

Side = tuple  # (patch_id, circle_id, start_mp_id | None)
Point = tuple  # (patch_id, mp_id)


@dataclass(frozen=True)
class MarkedPoint:
    id: str
    dir: str
    width: Fraction = Fraction(1)


@dataclass(frozen=True)
class Circle:
    id: str
    marked: tuple = ()


@dataclass(frozen=True)
class PatchLabel:
    name: str
    dim: int
    space: sp.SymplecticSpace | None = None


@dataclass(frozen=True)
class Patch:
    id: str
    label: PatchLabel
    circles: tuple = ()
    genus: int = 0
    interior: tuple = ()

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - len(self.circles)


def _top_level_compose(name: str) -> bool:
    depth = 0
    for ch in name:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == COMPOSE and depth == 0:
            return True
    return False


def transpose_name(name: str) -> str:
    if name.endswith("^t"):
        inner = name[:-2]
        if inner.startswith("(") and inner.endswith(")"):
            return inner[1:-1]
        if not _top_level_compose(inner):
            return inner
    if _top_level_compose(name):
        return f"({name})^t"
    return name + "^t"


@dataclass(frozen=True)
class Label:
    """Seam or boundary label; ``dims`` is ``(dim_a, dim_b)`` or ``(dim,)``."""

    name: str
    dims: tuple | None = None
    concrete: object = None

    def transposed(self) -> "Label":
        dims = tuple(reversed(self.dims)) if self.dims is not None else None
        conc = self.concrete
        if isinstance(conc, sp.LagrangianCorrespondence):
            conc = sp.transpose(conc)
        return Label(transpose_name(self.name), dims, conc)


@dataclass(frozen=True)
class Seam:
    a: Side
    b: Side
    label: Label


@dataclass(frozen=True)
class ShiftRecord:
    n: int
    d: int


@dataclass(frozen=True)
class QuiltedEnd:
    dir: str
    cyclic: bool
    points: tuple
    widths: tuple
    labels: tuple

    @property
    def length(self) -> int:
        return len(self.points)

    def label_names(self) -> tuple:
        return tuple(lab.name for lab in self.labels)


@dataclass(frozen=True)
class QuiltedSurface:
    patches: tuple = ()
    seams: tuple = ()
    boundary: tuple = ()  # ((side, Label), ...)
    incoming: tuple = ()  # representatives (patch_id, mp_id), in order
    outgoing: tuple = ()
    modulus: int = 2

    def patch(self, pid: str) -> Patch:
        for p in self.patches:
            if p.id == pid:
                return p
        raise KeyError(pid)


# ---------------------------------------------------------------- topology


class _Topology:
    """Lookup tables for a structurally sound quilt."""

    def __init__(self, q: QuiltedSurface):
        self.q = q
        self.patch_index = {p.id: i for i, p in enumerate(q.patches)}
        self.patches = {p.id: p for p in q.patches}
        self.mp: dict[Point, MarkedPoint] = {}
        self.circle_of: dict[Point, str] = {}
        self.succ: dict[Point, Point] = {}
        self.pred: dict[Point, Point] = {}
        self.sides: list[Side] = []
        for p in q.patches:
            for c in p.circles:
                ids = [m.id for m in c.marked]
                for i, m in enumerate(c.marked):
                    key = (p.id, m.id)
                    self.mp[key] = m
                    self.circle_of[key] = c.id
                    self.succ[key] = (p.id, ids[(i + 1) % len(ids)])
                    self.pred[key] = (p.id, ids[i - 1])
                    self.sides.append((p.id, c.id, m.id))
                if not ids:
                    self.sides.append((p.id, c.id, None))
        self.partner: dict[Side, tuple[Side, Seam]] = {}
        for s in q.seams:
            self.partner[s.a] = (s.b, s)
            self.partner[s.b] = (s.a, s)
        self.boundary = {side: lab for side, lab in q.boundary}

    def after(self, pt: Point) -> Side:
        return (pt[0], self.circle_of[pt], pt[1])

    def before(self, pt: Point) -> Side:
        prev = self.pred[pt]
        return (pt[0], self.circle_of[pt], prev[1])

    def zero_side(self, pt: Point) -> Side:
        return self.after(pt) if self.mp[pt].dir == IN else self.before(pt)

    def delta_side(self, pt: Point) -> Side:
        return self.before(pt) if self.mp[pt].dir == IN else self.after(pt)

    def interval_end(self, side: Side) -> Point:
        return self.succ[(side[0], side[2])]

    def read(self, side: Side) -> Label:
        other, seam = self.partner[side]
        return seam.label if seam.a == side else seam.label.transposed()

    def matched(self, side: Side, at_start: bool) -> Point:
        """The point matched across the seam with the start (or end) of ``side``."""
        other, _ = self.partner[side]
        return self.interval_end(other) if at_start else (other[0], other[2])

    def next_point(self, pt: Point) -> Point | None:
        side = self.delta_side(pt)
        if side not in self.partner:
            return None
        # an outgoing end leaves along its delta side, an incoming one arrives
        return self.matched(side, at_start=self.mp[pt].dir == OUT)

    def point_order(self) -> list[Point]:
        out = []
        for p in self.q.patches:
            for c in p.circles:
                out.extend((p.id, m.id) for m in c.marked)
        return out

    def raw_ends(self) -> list[tuple[tuple, bool]]:
        seen: set = set()
        ends = []
        order = self.point_order()
        for pt in order:
            if pt in seen or self.zero_side(pt) in self.partner:
                continue
            chain = [pt]
            seen.add(pt)
            nxt = self.next_point(pt)
            while nxt is not None:
                chain.append(nxt)
                seen.add(nxt)
                nxt = self.next_point(nxt)
            ends.append((tuple(chain), False))
        for pt in order:
            if pt in seen:
                continue
            chain = [pt]
            seen.add(pt)
            nxt = self.next_point(pt)
            while nxt != pt:
                chain.append(nxt)
                seen.add(nxt)
                nxt = self.next_point(nxt)
            ends.append((tuple(chain), True))
        return ends

    def build_end(self, chain: tuple, cyclic: bool) -> QuiltedEnd:
        labels = []
        if not cyclic:
            labels.append(self.boundary[self.zero_side(chain[0])])
        for pt in chain[:-1] if not cyclic else chain:
            labels.append(self.read(self.delta_side(pt)))
        if not cyclic:
            labels.append(self.boundary[self.delta_side(chain[-1])])
        return QuiltedEnd(
            dir=self.mp[chain[0]].dir,
            cyclic=cyclic,
            points=tuple(chain),
            widths=tuple(self.mp[pt].width for pt in chain),
            labels=tuple(labels),
        )


# ---------------------------------------------------------------- validation


def _structural_violations(q: QuiltedSurface) -> list[str]:
    out: list[str] = []
    if not isinstance(q.modulus, int) or q.modulus <= 0 or q.modulus % 2:
        out.append(f"grading modulus {q.modulus} must be an even positive integer")
    pids = [p.id for p in q.patches]
    if len(set(pids)) != len(pids):
        out.append("duplicate patch id")
    for p in q.patches:
        if p.genus < 0:
            out.append(f"patch {p.id}: negative genus")
        if p.label.dim < 0 or p.label.dim % 2:
            out.append(f"patch {p.id}: label dimension must be even and nonnegative")
        if p.label.space is not None and p.label.space.dim != p.label.dim:
            out.append(f"patch {p.id}: concrete space has the wrong dimension")
        cids = [c.id for c in p.circles]
        if len(set(cids)) != len(cids):
            out.append(f"patch {p.id}: duplicate circle id")
        mids = [m.id for c in p.circles for m in c.marked]
        if len(set(mids)) != len(mids):
            out.append(f"patch {p.id}: duplicate marked point id")
        for c in p.circles:
            for m in c.marked:
                if m.dir not in (IN, OUT):
                    out.append(f"patch {p.id}: marked point {m.id} has unknown direction {m.dir!r}")
                if not m.width > 0:
                    out.append(f"patch {p.id}: marked point {m.id} has nonpositive width")
        for d in p.interior:
            if d not in (IN, OUT):
                out.append(f"patch {p.id}: interior puncture has unknown direction {d!r}")
    return out


def _side_exists(q: QuiltedSurface, side: Side) -> bool:
    try:
        pid, cid, start = side
        patch = q.patch(pid)
    except (KeyError, ValueError, TypeError):
        return False
    for c in patch.circles:
        if c.id == cid:
            if start is None:
                return not c.marked
            return any(m.id == start for m in c.marked)
    return False


def validate(q: QuiltedSurface) -> list[str]:
    """Violations of the quilt invariants; empty iff the quilt is valid."""
    out = _structural_violations(q)
    if out:
        return out
    used: dict[Side, str] = {}
    for s in q.seams:
        for side in (s.a, s.b):
            if not _side_exists(q, side):
                out.append(f"seam references unknown side {side}")
        if s.a == s.b:
            out.append(f"seam joins side {s.a} to itself")
    for side, _ in q.boundary:
        if not _side_exists(q, side):
            out.append(f"boundary label on unknown side {side}")
    if out:
        return out
    for s in q.seams:
        for side in (s.a, s.b):
            if side in used:
                out.append(f"circle doubly seamed at side {side}")
            used[side] = "seam"
    for side, _ in q.boundary:
        if side in used:
            kind = used[side]
            out.append(f"side {side} is both {kind}ed and boundary-labeled" if kind == "seam" else f"side {side} labeled twice")
        used[side] = "boundary"
    if out:
        return out

    topo = _Topology(q)
    for side in topo.sides:
        if side not in used:
            out.append(f"unlabeled boundary side {side}")
    for s in q.seams:
        if (s.a[2] is None) != (s.b[2] is None):
            out.append(f"seam {s.a}~{s.b}: marked point count mismatch")
            continue
        pa, pb = topo.patches[s.a[0]], topo.patches[s.b[0]]
        if s.label.dims is not None and tuple(s.label.dims) != (pa.label.dim, pb.label.dim):
            out.append(f"seam {s.a}~{s.b}: label dimensions {s.label.dims} do not match patches")
        conc = s.label.concrete
        if conc is not None:
            if not isinstance(conc, sp.LagrangianCorrespondence):
                out.append(f"seam {s.a}~{s.b}: concrete label is not a correspondence")
            elif (conc.source.dim, conc.target.dim) != (pa.label.dim, pb.label.dim):
                out.append(f"seam {s.a}~{s.b}: concrete label dimension mismatch")
            elif (pa.label.space is not None and conc.source != pa.label.space) or (
                pb.label.space is not None and conc.target != pb.label.space
            ):
                out.append(f"seam {s.a}~{s.b}: concrete label lives in the wrong spaces")
        if s.a[2] is None:
            continue
        a0, a1 = (s.a[0], s.a[2]), topo.interval_end(s.a)
        b0, b1 = (s.b[0], s.b[2]), topo.interval_end(s.b)
        for x, y in ((a0, b1), (a1, b0)):
            if topo.mp[x].dir != topo.mp[y].dir:
                out.append(f"direction mismatch across seam {s.a}~{s.b}: {x} vs {y}")
    for side, lab in q.boundary:
        dim = topo.patches[side[0]].label.dim
        if lab.dims is not None and tuple(lab.dims) != (dim,):
            out.append(f"boundary label {lab.name} on {side}: dimension mismatch")
        conc = lab.concrete
        if conc is not None:
            if not isinstance(conc, sp.LagrangianSubspace) or conc.space.dim != dim:
                out.append(f"boundary label {lab.name} on {side}: concrete label does not fit the patch")
    if out:
        return out

    raw = topo.raw_ends()
    owner = {pt: i for i, (chain, _) in enumerate(raw) for pt in chain}
    hits = [0] * len(raw)
    for key, want in (("incoming", IN), ("outgoing", OUT)):
        for rep in getattr(q, key):
            rep = tuple(rep)
            if rep not in owner:
                out.append(f"{key} ordering references unknown marked point {rep}")
                continue
            if topo.mp[rep].dir != want:
                out.append(f"{key} ordering lists {rep} of the wrong direction")
            hits[owner[rep]] += 1
    for i, (chain, cyclic) in enumerate(raw):
        if hits[i] == 0:
            kind = "cyclic end without basepoint" if cyclic else "end missing from ordering"
            out.append(f"{kind}: {chain}")
        elif hits[i] > 1:
            out.append(f"end ordered more than once: {chain}")
    return out


def validation_warnings(q: QuiltedSurface) -> list[str]:
    """Soft issues: cylindrical ends are only meaningful on compact targets."""
    return [f"patch {p.id} has interior punctures; its label must be a compact target" for p in q.patches if p.interior]


def _require_valid(q: QuiltedSurface) -> _Topology:
    v = validate(q)
    if v:
        raise InvalidQuilt(v)
    return _Topology(q)


# ---------------------------------------------------------------- ends and counts


def _ordered_ends(q: QuiltedSurface, topo: _Topology) -> tuple[list[QuiltedEnd], list[QuiltedEnd]]:
    raw = topo.raw_ends()
    owner = {pt: (chain, cyc) for chain, cyc in raw for pt in chain}
    result = []
    for key in ("incoming", "outgoing"):
        ends = []
        for rep in getattr(q, key):
            chain, cyc = owner[tuple(rep)]
            if cyc:
                k = chain.index(tuple(rep))
                chain = chain[k:] + chain[:k]
            ends.append(topo.build_end(chain, cyc))
        result.append(ends)
    return result[0], result[1]


def ends(q: QuiltedSurface) -> tuple[list[QuiltedEnd], list[QuiltedEnd]]:
    """Incoming and outgoing quilted ends in the stored orderings."""
    return _ordered_ends(q, _require_valid(q))


def extract_ends(q: QuiltedSurface) -> list[QuiltedEnd]:
    inc, out = ends(q)
    return inc + out


def euler(q: QuiltedSurface) -> tuple[dict, int]:
    per = {p.id: p.euler for p in q.patches}
    return per, sum(per.values())


def outgoing_count(p: Patch) -> int:
    boundary = sum(1 for c in p.circles for m in c.marked if m.dir == OUT)
    return boundary + 2 * sum(1 for d in p.interior if d == OUT)


def degree_shift(q: QuiltedSurface) -> int:
    _require_valid(q)
    total = sum((p.label.dim // 2) * (outgoing_count(p) - p.euler) for p in q.patches)
    return total % q.modulus


# ---------------------------------------------------------------- disjoint union


def _rename_patch(q: QuiltedSurface, old: str, new: str) -> QuiltedSurface:
    def side(s):
        return (new if s[0] == old else s[0],) + tuple(s[1:])

    return replace(
        q,
        patches=tuple(replace(p, id=new) if p.id == old else p for p in q.patches),
        seams=tuple(Seam(side(s.a), side(s.b), s.label) for s in q.seams),
        boundary=tuple((side(s), lab) for s, lab in q.boundary),
        incoming=tuple(side(r) for r in q.incoming),
        outgoing=tuple(side(r) for r in q.outgoing),
    )


def empty_quilt(modulus: int = 2) -> QuiltedSurface:
    return QuiltedSurface(modulus=modulus)


def disjoint_union(q1: QuiltedSurface, q2: QuiltedSurface) -> QuiltedSurface:
    if q1.modulus != q2.modulus:
        raise ModulusMismatch(f"grading moduli differ: {q1.modulus} vs {q2.modulus}")
    taken = {p.id for p in q1.patches} | {p.id for p in q2.patches}
    for p in q2.patches:
        if p.id in {x.id for x in q1.patches}:
            new = p.id + "'"
            while new in taken:
                new += "'"
            taken.add(new)
            q2 = _rename_patch(q2, p.id, new)
    return QuiltedSurface(
        patches=q1.patches + q2.patches,
        seams=q1.seams + q2.seams,
        boundary=q1.boundary + q2.boundary,
        incoming=tuple(q1.incoming) + tuple(q2.incoming),
        outgoing=tuple(q1.outgoing) + tuple(q2.outgoing),
        modulus=q1.modulus,
    )


# ---------------------------------------------------------------- gluing


def _check_glueable(e_minus: QuiltedEnd, e_plus: QuiltedEnd) -> None:
    if e_minus.dir != IN or e_plus.dir != OUT:
        raise EndMismatch("glue needs an incoming end and an outgoing end")
    if e_minus.length != e_plus.length:
        raise EndMismatch(f"end lengths differ: {e_minus.length} vs {e_plus.length}")
    if e_minus.cyclic != e_plus.cyclic:
        raise EndMismatch("cannot glue a cyclic end to a noncyclic end")
    if e_minus.labels != e_plus.labels:
        raise EndMismatch(f"label sequences differ: {e_minus.label_names()} vs {e_plus.label_names()}")
    if e_minus.widths != e_plus.widths:
        raise EndMismatch("width vectors differ")


def _fresh(base: str, used: set) -> str:
    name, k = base, 1
    while name in used:
        name = f"{base}~{k}"
        k += 1
    used.add(name)
    return name


def _same_end(a: QuiltedEnd, b: QuiltedEnd) -> bool:
    return a.dir == b.dir and a.cyclic == b.cyclic and set(a.points) == set(b.points)


def glue(q: QuiltedSurface, e_minus: QuiltedEnd, e_plus: QuiltedEnd) -> QuiltedSurface:
    """Glue an incoming quilted end of ``q`` to an outgoing one.

    The ``i``-th strip-like end of ``e_plus`` is identified with the ``i``-th
    of ``e_minus``.  Boundary components are retraced: an interval running
    into a glued point continues with the interval leaving its partner.
    """
    topo = _require_valid(q)
    inc, out = _ordered_ends(q, topo)
    if not any(_same_end(e_minus, e) for e in inc + out) or not any(_same_end(e_plus, e) for e in inc + out):
        raise EndMismatch("ends do not belong to this quilt")
    _check_glueable(e_minus, e_plus)

    partner: dict[Point, Point] = {}
    for a, b in zip(e_minus.points, e_plus.points):
        partner[a] = b
        partner[b] = a
    removed = set(partner)

    # patch groups
    parent = {p.id: p.id for p in q.patches}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = topo.patch_index
    for a, b in zip(e_minus.points, e_plus.points):
        ra, rb = find(a[0]), find(b[0])
        if ra != rb:
            if order[ra] < order[rb]:
                parent[rb] = ra
            else:
                parent[ra] = rb
        if topo.patches[a[0]].label != topo.patches[b[0]].label:
            raise EndMismatch(f"patches {a[0]} and {b[0]} carry different labels")

    groups: dict[str, list[Patch]] = {}
    for p in q.patches:
        groups.setdefault(find(p.id), []).append(p)

    # identifier renaming inside merged patches
    mp_name: dict[Point, str] = {}
    for root, members in groups.items():
        used: set = set()
        for p in members:
            for c in p.circles:
                for m in c.marked:
                    if (p.id, m.id) in removed:
                        continue
                    base = m.id if m.id not in used else f"{p.id}.{m.id}"
                    mp_name[(p.id, m.id)] = _fresh(base, used)

    # retrace boundary circles
    owner: dict[Side, tuple] = {}  # original side -> (new patch, circle key, start or None)
    new_circles: dict[str, list] = {root: [] for root in groups}
    circle_names: dict[str, set] = {root: set() for root in groups}
    pieces: dict[tuple, list[Side]] = {}

    touched_keys = {(pt[0], topo.circle_of[pt]) for pt in removed}
    for root, members in groups.items():
        for p in members:
            for c in p.circles:
                if (p.id, c.id) in touched_keys:
                    continue
                cname = _fresh(c.id if c.id not in circle_names[root] else f"{p.id}.{c.id}", circle_names[root])
                marks = tuple(replace(m, id=mp_name[(p.id, m.id)]) for m in c.marked)
                new_circles[root].append(Circle(cname, marks))
                if c.marked:
                    for m in c.marked:
                        key = (root, cname, mp_name[(p.id, m.id)])
                        pieces[key] = [(p.id, c.id, m.id)]
                        owner[(p.id, c.id, m.id)] = key
                else:
                    key = (root, cname, None)
                    pieces[key] = [(p.id, c.id, None)]
                    owner[(p.id, c.id, None)] = key

    def chain_from(start: Point) -> tuple[list[Side], Point]:
        segs = [topo.after(start)]
        x = topo.succ[start]
        while x in removed:
            y = partner[x]
            segs.append(topo.after(y))
            x = topo.succ[y]
        return segs, x

    surviving = [pt for pt in topo.point_order() if (pt[0], topo.circle_of[pt]) in touched_keys and pt not in removed]
    next_surv: dict[Point, Point] = {}
    chains: dict[Point, list[Side]] = {}
    for s in surviving:
        segs, e = chain_from(s)
        chains[s] = segs
        next_surv[s] = e
    done: set = set()
    for s in surviving:
        if s in done:
            continue
        cyc = [s]
        done.add(s)
        x = next_surv[s]
        while x != s:
            cyc.append(x)
            done.add(x)
            x = next_surv[x]
        root = find(s[0])
        orig = topo.circle_of[s]
        base = orig if orig not in circle_names[root] else f"{s[0]}.{orig}"
        cname = _fresh(base, circle_names[root])
        marks = tuple(replace(topo.mp[pt], id=mp_name[pt]) for pt in cyc)
        new_circles[root].append(Circle(cname, marks))
        for pt in cyc:
            key = (root, cname, mp_name[pt])
            pieces[key] = chains[pt]
            for seg in chains[pt]:
                owner[seg] = key

    # closed cycles made only of intervals leaving glued points
    leftovers = [topo.after(pt) for pt in topo.point_order() if pt in removed]
    k = 0
    for seg in leftovers:
        if seg in owner:
            continue
        cyc = [seg]
        x = partner[topo.interval_end(seg)]
        while topo.after(x) != seg:
            cyc.append(topo.after(x))
            x = partner[topo.interval_end(topo.after(x))]
        root = find(seg[0])
        cname = _fresh(f"g{k}", circle_names[root])
        k += 1
        new_circles[root].append(Circle(cname, ()))
        key = (root, cname, None)
        pieces[key] = cyc
        for s in cyc:
            owner[s] = key

    # seams and boundary labels on the new sides
    new_seams: list[Seam] = []
    new_boundary: list = []
    emitted: set = set()
    for key, segs in pieces.items():
        seamed = [s in topo.partner for s in segs]
        if not any(seamed):
            labs = {topo.boundary[s] for s in segs}
            if len(labs) != 1:
                raise EndMismatch("boundary labels disagree across the glued ends")
            new_boundary.append((key, labs.pop()))
            continue
        if not all(seamed):
            raise EndMismatch("a retraced boundary component is partly seamed")
        others = {owner[topo.partner[s][0]] for s in segs}
        if len(others) != 1:
            raise EndMismatch("seams do not merge consistently")
        other = others.pop()
        reads = {topo.read(s) for s in segs}
        if len(reads) != 1:
            raise EndMismatch("seam labels disagree across the glued ends")
        pair = frozenset((key, other))
        if pair in emitted:
            continue
        emitted.add(pair)
        first = segs[0]
        seam = topo.partner[first][1]
        if seam.a == first:
            new_seams.append(Seam(key, other, seam.label))
        else:
            new_seams.append(Seam(other, key, seam.label))

    # assemble patches
    n_glued: dict[str, int] = {root: 0 for root in groups}
    for a in e_minus.points:
        n_glued[find(a[0])] += 1
    new_patches = []
    for p in q.patches:
        if find(p.id) != p.id:
            continue
        members = groups[p.id]
        chi = sum(m.euler for m in members) - n_glued[p.id]
        b = len(new_circles[p.id])
        two_g = 2 - chi - b
        if two_g < 0 or two_g % 2:
            raise InvalidQuilt([f"gluing produced an impossible surface (chi={chi}, b={b})"])
        interior = tuple(d for m in members for d in m.interior)
        new_patches.append(Patch(p.id, p.label, tuple(new_circles[p.id]), two_g // 2, interior))

    def rep(r):
        r = tuple(r)
        return (find(r[0]), mp_name[r])

    gone = set(e_minus.points) | set(e_plus.points)
    result = QuiltedSurface(
        patches=tuple(new_patches),
        seams=tuple(new_seams),
        boundary=tuple(new_boundary),
        incoming=tuple(rep(r) for r in q.incoming if tuple(r) not in gone),
        outgoing=tuple(rep(r) for r in q.outgoing if tuple(r) not in gone),
        modulus=q.modulus,
    )
    v = validate(result)
    if v:
        raise InvalidQuilt(v)
    return result


def glue_by_index(q: QuiltedSurface, i_minus: int, i_plus: int) -> QuiltedSurface:
    inc, out = ends(q)
    if not (0 <= i_minus < len(inc)) or not (0 <= i_plus < len(out)):
        raise EndMismatch(f"no end pair ({i_minus}, {i_plus}): {len(inc)} incoming, {len(out)} outgoing")
    return glue(q, inc[i_minus], out[i_plus])


# ---------------------------------------------------------------- strip shrinking


def _compose_labels(left: Label, right: Label, target_dims: tuple) -> Label:
    name = f"{left.name}{COMPOSE}{right.name}"
    conc = None
    if left.concrete is not None and right.concrete is not None:
        r_conc = right.concrete
        point_target = isinstance(r_conc, sp.LagrangianSubspace)
        if point_target:
            r_conc = sp.subspace_as_correspondence(r_conc, into=False)
        res = sp.compose(left.concrete, r_conc)
        if not res.embedded:
            raise CompositionNotEmbedded(f"{name} is not an embedded composition (kernel dimension {res.kernel_dim})")
        conc = sp.correspondence_as_subspace(res.composition) if point_target else res.composition
    return Label(name, target_dims, conc)


def is_strip(p: Patch) -> bool:
    if p.genus or p.interior:
        return False
    if len(p.circles) == 1 and len(p.circles[0].marked) == 2:
        return True
    return len(p.circles) == 2 and not p.circles[0].marked and not p.circles[1].marked


def shrink_strip(q: QuiltedSurface, patch_id: str, *, allow_both_boundary: bool = False) -> tuple[QuiltedSurface, ShiftRecord]:
    """Remove a strip (or a markless annulus) and compose across it.

    The two sides of the strip become a single seam labeled by the composite
    of the labels read across the strip, or a boundary labeled by the
    composite with the boundary label when one side was a true boundary.
    """
    topo = _require_valid(q)
    if patch_id not in topo.patches:
        raise NotAStrip(f"no patch {patch_id!r}")
    strip = topo.patches[patch_id]
    if not is_strip(strip):
        raise NotAStrip(f"patch {patch_id!r} is not a strip")

    if strip.circles[0].marked:
        c = strip.circles[0]
        m1, m2 = c.marked
        sides = [(patch_id, c.id, m1.id), (patch_id, c.id, m2.id)]
        dirs = {m1.dir, m2.dir}
        d = 1 if dirs == {OUT} else -1 if dirs == {IN} else 0
    else:
        sides = [(patch_id, c.id, None) for c in strip.circles]
        d = 0
    n = strip.label.dim // 2

    across = []
    for s in sides:
        if s in topo.partner:
            other = topo.partner[s][0]
            if other[0] == patch_id:
                raise NotAStrip("strip is seamed to itself")
            across.append(other)
        else:
            across.append(None)
    if across[0] is None and across[1] is None and not allow_both_boundary:
        raise BothSidesBoundary(f"both sides of {patch_id!r} are true boundaries")

    new_seams = [s for s in q.seams if s.a[0] != patch_id and s.b[0] != patch_id]
    new_boundary = [(s, lab) for s, lab in q.boundary if s[0] != patch_id]

    if across[0] is not None and across[1] is not None:
        x1, x2 = across
        # label from x1's patch through the strip to x2's patch, or the reverse
        l1, r1 = topo.read(x1), topo.read(sides[1])
        l2, r2 = topo.read(x2), topo.read(sides[0])
        transposes = lambda a, b: a.name.endswith("^t") + b.name.endswith("^t")
        dims1 = (topo.patches[x1[0]].label.dim, topo.patches[x2[0]].label.dim)
        if transposes(l1, r1) <= transposes(l2, r2):
            new_seams.append(Seam(x1, x2, _compose_labels(l1, r1, dims1)))
        else:
            new_seams.append(Seam(x2, x1, _compose_labels(l2, r2, tuple(reversed(dims1)))))
    elif across[0] is not None or across[1] is not None:
        i = 0 if across[0] is not None else 1
        x = across[i]
        lb = topo.boundary[sides[1 - i]]
        new_boundary.append((x, _compose_labels(topo.read(x), lb, (topo.patches[x[0]].label.dim,))))

    removed_pts = {(patch_id, m.id) for c in strip.circles for m in c.marked}
    raw_old = {pt: (chain, cyc) for chain, cyc in topo.raw_ends() for pt in chain}

    def new_rep(r):
        r = tuple(r)
        chain, cyc = raw_old[r]
        k = chain.index(r)
        seq = chain[k:] + chain[:k] if cyc else chain[k:] + chain[:k][::-1]
        for pt in seq:
            if pt not in removed_pts:
                return pt
        return None

    incoming = tuple(x for x in (new_rep(r) for r in q.incoming) if x is not None)
    outgoing = tuple(x for x in (new_rep(r) for r in q.outgoing) if x is not None)
    result = QuiltedSurface(
        patches=tuple(p for p in q.patches if p.id != patch_id),
        seams=tuple(new_seams),
        boundary=tuple(new_boundary),
        incoming=incoming,
        outgoing=outgoing,
        modulus=q.modulus,
    )
    v = validate(result)
    if v:
        raise InvalidQuilt(v)
    return result, ShiftRecord(n, d)


# ---------------------------------------------------------------- combinatorial type


def _rotations_min(tokens: list) -> list:
    if not tokens:
        return tokens
    enc = [json.dumps(t, ensure_ascii=False) for t in tokens]
    best = min(range(len(enc)), key=lambda k: enc[k:] + enc[:k])
    return tokens[best:] + tokens[:best]


def combinatorial_type(q: QuiltedSurface) -> str:
    """Identifier-free canonical encoding.

    Marked points are named by their quilted end and position in it, so the
    encoding depends on the stored orderings but not on ids, on where a
    circle's cyclic list starts, or on which side of a seam is called ``a``.
    """
    topo = _require_valid(q)
    inc, out = _ordered_ends(q, topo)
    name: dict[Point, str] = {}
    for tag, group in (("i", inc), ("o", out)):
        for i, e in enumerate(group):
            for j, pt in enumerate(e.points):
                name[pt] = f"{tag}{i}.{j}"

    def side_token(side: Side) -> list:
        if side in topo.boundary:
            return ["B", topo.boundary[side].name]
        other, _ = topo.partner[side]
        tok = ["S", topo.read(side).name, topo.patch_index[other[0]]]
        if other[2] is not None:
            tok.append(name[(other[0], other[2])])
        return tok

    patches = []
    for p in q.patches:
        circles = []
        for c in p.circles:
            if c.marked:
                toks = [
                    [name[(p.id, m.id)], m.dir, str(m.width), side_token((p.id, c.id, m.id))]
                    for m in c.marked
                ]
                circles.append(_rotations_min(toks))
            else:
                circles.append(side_token((p.id, c.id, None)))
        circles.sort(key=lambda t: json.dumps(t, ensure_ascii=False))
        patches.append(
            {
                "genus": p.genus,
                "label": [p.label.name, p.label.dim],
                "interior": sorted(p.interior),
                "circles": circles,
            }
        )
    return json.dumps({"modulus": q.modulus, "patches": patches}, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def combinatorial_eq(q1: QuiltedSurface, q2: QuiltedSurface) -> bool:
    return combinatorial_type(q1) == combinatorial_type(q2)


__all__ = [
    "IN",
    "OUT",
    "MarkedPoint",
    "Circle",
    "PatchLabel",
    "Patch",
    "Label",
    "Seam",
    "ShiftRecord",
    "QuiltedEnd",
    "QuiltedSurface",
    "QuiltError",
    "validate",
    "validation_warnings",
    "ends",
    "extract_ends",
    "euler",
    "degree_shift",
    "empty_quilt",
    "disjoint_union",
    "glue",
    "glue_by_index",
    "is_strip",
    "shrink_strip",
    "combinatorial_type",
    "combinatorial_eq",
    "transpose_name",
]

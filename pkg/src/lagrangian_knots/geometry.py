"""Exact planar realisation of a family of diameter-crossing words.

Every crossing of an interval gets an x-coordinate from a total order obtained
by walking the strands in parallel until they separate. Each segment becomes a
rectangle (up or down from the diameter, across, back) whose height is its rank
by horizontal span within its half, so nested segments never meet and
interleaved ones meet exactly once. All coordinates are Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import lcm

from .curves import DOWN, UP, Component, CurveError, CurveWord, PunctureLayout, axis_key

Pt = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Segment:
    comp: int
    index: int
    xa: Fraction
    xb: Fraction
    height: Fraction  # signed: positive in the upper half

    def vertices(self) -> list[Pt]:
        z = Fraction(0)
        return [(self.xa, z), (self.xa, self.height), (self.xb, self.height), (self.xb, z)]

    def length(self) -> Fraction:
        return 2 * abs(self.height) + abs(self.xb - self.xa)

    def param(self, pt: Pt) -> Fraction:
        """Arc-length position of a point of this rectangle, from its start."""
        x, y = pt
        h = abs(self.height)
        if y == self.height:
            return h + abs(x - self.xa)
        if x == self.xa:
            return abs(y)
        if x == self.xb:
            return h + abs(self.xb - self.xa) + (h - abs(y))
        raise CurveError("point is not on the segment")

    def tangent(self, pt: Pt) -> tuple[int, int]:
        x, y = pt
        if y == self.height and y != 0:
            return (1 if self.xb > self.xa else -1, 0)
        up = 1 if self.height > 0 else -1
        if x == self.xa:
            return (0, up)
        return (0, -up)


@dataclass(frozen=True)
class Crossing:
    """Transverse intersection of a red and a green component."""

    red: int
    green: int
    point: Pt
    red_pos: tuple[int, Fraction]  # (segment, parameter) along the red word
    green_pos: tuple[int, Fraction]
    sign: int  # sign of (red tangent x green tangent)


class Realisation:
    def __init__(self, layout: PunctureLayout, comps: tuple[Component, ...]):
        self.layout = layout
        self.comps = comps
        self.words = [c.word for c in comps]
        self._x: dict[tuple[int, int], Fraction] = {}
        self._place()
        self.segments: list[list[Segment]] = []
        self._heights()

    # -- ordering -----------------------------------------------------------

    def _step(self, ci: int, idx: int, d: int) -> int | None:
        w = self.words[ci]
        j = idx + d
        if w.kind == "circle":
            return j % len(w.points)
        if 0 <= j < len(w.points):
            return j
        return None

    def _half_towards(self, ci: int, idx: int, d: int) -> int:
        w = self.words[ci]
        seg = idx if d == 1 else idx - 1
        if w.kind == "circle":
            seg %= len(w.points)
        return w.half(seg)

    def _walk(self, a: tuple[int, int, int], b: tuple[int, int, int], center: float) -> bool | None:
        (ca, ia, da), (cb, ib, db) = a, b
        flip = False
        limit = sum(len(w.points) for w in self.words) + 2
        for _ in range(limit):
            na, nb = self._step(ca, ia, da), self._step(cb, ib, db)
            if na is None or nb is None:
                return None
            pa, pb = self.words[ca].points[na], self.words[cb].points[nb]
            if pa[0] == "c" and pb[0] == "c" and pa[1] == pb[1]:
                flip = not flip
                center = pa[1] + 0.5
                ia, ib = na, nb
                continue
            ka, kb = axis_key(pa), axis_key(pb)
            if ka == kb:
                return None
            same = (ka > center) == (kb > center)
            left = (ka > kb) if same else (ka < kb)
            return left != flip
        return None

    def _copy_rule(self, a: tuple[int, int, int], b: tuple[int, int, int]) -> bool:
        ca, cb = self.comps[a[0]], self.comps[b[0]]
        if ca.role != cb.role or ca.family != cb.family or ca.copy == cb.copy:
            raise CurveError("strands fellow-travel but are not parallel copies")
        forward = a[2] == 1
        down = self._half_towards(*a) == DOWN
        east = down == forward
        return (ca.copy < cb.copy) if east else (ca.copy > cb.copy)

    def _cmp_crossing(self, u: tuple[int, int], v: tuple[int, int]) -> int:
        def port(o: tuple[int, int], want: int) -> tuple[int, int, int]:
            ci, idx = o
            d = 1 if self._half_towards(ci, idx, 1) == want else -1
            return (ci, idx, d)

        center = self.words[u[0]].points[u[1]][1] + 0.5
        a, b = port(u, DOWN), port(v, DOWN)
        res = self._walk(a, b, center)
        if res is None:
            res = self._walk(port(u, UP), port(v, UP), center)
        if res is None:
            res = self._copy_rule(a, b)
        return -1 if res else 1

    def _cmp_slot(self, a: tuple[int, int, int], b: tuple[int, int, int]) -> int:
        center = axis_key(self.words[a[0]].points[a[1]])
        res = self._walk(a, b, center)
        if res is None:
            res = self._copy_rule(a, b)
        return -1 if res else 1

    def _place(self) -> None:
        m = self.layout.total
        by_interval: dict[int, list[tuple[int, int]]] = {}
        slots: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}
        for ci, w in enumerate(self.words):
            for idx, (kind, j) in enumerate(w.points):
                if kind == "c":
                    by_interval.setdefault(j, []).append((ci, idx))
                else:
                    d = 1 if idx == 0 else -1
                    nxt = w.points[idx + d]
                    side = 1 if axis_key(nxt) > j + 1 else -1
                    half = self._half_towards(ci, idx, d)
                    slots.setdefault((j, side, half), []).append((ci, idx, d))
        for j, occ in by_interval.items():
            if not 0 <= j <= m:
                raise CurveError(f"interval {j} out of range")
            occ.sort(key=cmp_to_key(self._cmp_crossing))
            k = len(occ)
            for r, o in enumerate(occ):
                self._x[o] = j + Fraction(1, 4) + Fraction(r + 1, 2 * (k + 1))
        for (p, side, half), ports in slots.items():
            ports.sort(key=cmp_to_key(self._cmp_slot))
            k = len(ports)
            band = 0 if half == DOWN else 1
            for r, (ci, idx, _) in enumerate(ports):
                off = Fraction(band, 20) + Fraction(r + 1, 20 * (k + 1))
                if side < 0:
                    off = Fraction(band + 1, 20) - Fraction(r + 1, 20 * (k + 1))
                    self._x[(ci, idx)] = p + 1 - off
                else:
                    self._x[(ci, idx)] = p + 1 + off

    def _heights(self) -> None:
        raw: list[tuple[int, int, Fraction, Fraction, int]] = []
        for ci, w in enumerate(self.words):
            for s in range(w.n_segments):
                a = s
                b = (s + 1) % len(w.points)
                raw.append((ci, s, self._x[(ci, a)], self._x[(ci, b)], w.half(s)))
        # parallel copies are ranked by their first copy's span, so that no
        # other segment can slip between them, then nested among themselves
        group: dict[int, int] = {}
        for ci, c in enumerate(self.comps):
            group[ci] = min(cj for cj, d in enumerate(self.comps)
                            if (d.role, d.family, d.word) == (c.role, c.family, c.word))
        span = {(r[0], r[1]): (abs(r[3] - r[2]), min(r[2], r[3])) for r in raw}
        rank: dict[tuple[int, int], int] = {}
        for half in (UP, DOWN):
            segs = [r for r in raw if r[4] == half]
            segs.sort(key=lambda r: (span[(group[r[0]], r[1])], group[r[0]], span[(r[0], r[1])]))
            for k, r in enumerate(segs, start=1):
                rank[(r[0], r[1])] = k * half
        self.segments = [[] for _ in self.words]
        for ci, s, xa, xb, _ in raw:
            self.segments[ci].append(Segment(ci, s, xa, xb, Fraction(rank[(ci, s)])))
        self.max_height = max((abs(r) for r in rank.values()), default=0)

    # -- queries ------------------------------------------------------------

    def x_of(self, ci: int, idx: int) -> Fraction:
        return self._x[(ci, idx)]

    def crossings(self, red: list[int], green: list[int]) -> list[Crossing]:
        out = []
        for ri in red:
            for gi in green:
                for rs in self.segments[ri]:
                    for gs in self.segments[gi]:
                        pt = _meet(rs, gs)
                        if pt is None:
                            continue
                        tr, tg = rs.tangent(pt), gs.tangent(pt)
                        cross = tr[0] * tg[1] - tr[1] * tg[0]
                        out.append(Crossing(ri, gi, pt, (rs.index, rs.param(pt)),
                                            (gs.index, gs.param(pt)), 1 if cross > 0 else -1))
        return out

    def location(self, ci: int, pt: Pt) -> tuple[int, Fraction]:
        memo = self.__dict__.setdefault("_memo_loc", {})
        if (ci, pt) not in memo:
            memo[(ci, pt)] = self._locate(ci, pt)
        return memo[(ci, pt)]

    def _locate(self, ci: int, pt: Pt) -> tuple[int, Fraction]:
        for seg in self.segments[ci]:
            try:
                return (seg.index, seg.param(pt))
            except CurveError:
                continue
        raise CurveError("point not on component")

    def arc_path(self, ci: int, start: tuple[int, Fraction], end: tuple[int, Fraction]) -> list[Pt]:
        """Polyline along an arc component between two locations."""
        if self.words[ci].kind != "arc":
            raise CurveError("arc_path needs an arc")
        if start <= end:
            return self._forward(ci, start, end)
        return list(reversed(self._forward(ci, end, start)))

    def _point_at(self, ci: int, loc: tuple[int, Fraction]) -> Pt:
        seg = self.segments[ci][loc[0]]
        t = loc[1]
        h = abs(seg.height)
        sgn = 1 if seg.height > 0 else -1
        dx = abs(seg.xb - seg.xa)
        if t <= h:
            return (seg.xa, sgn * t)
        if t <= h + dx:
            step = 1 if seg.xb > seg.xa else -1
            return (seg.xa + step * (t - h), seg.height)
        return (seg.xb, sgn * (2 * h + dx - t))

    def _offsets(self, ci: int) -> list[Fraction]:
        memo = self.__dict__.setdefault("_memo_offs", {})
        if ci not in memo:
            offs = [Fraction(0)]
            for seg in self.segments[ci]:
                offs.append(offs[-1] + seg.length())
            memo[ci] = offs
        return memo[ci]

    def _forward(self, ci: int, start: tuple[int, Fraction], end: tuple[int, Fraction]) -> list[Pt]:
        memo = self.__dict__.setdefault("_memo_fwd", {})
        key = (ci, start, end)
        if key not in memo:
            memo[key] = self._trace_polyline(ci, start, end)
        return list(memo[key])

    def _trace_polyline(self, ci: int, start: tuple[int, Fraction], end: tuple[int, Fraction]) -> list[Pt]:
        segs = self.segments[ci]
        pts = [self._point_at(ci, start)]
        s, t = start
        first = True
        while True:
            seg = segs[s]
            h = abs(seg.height)
            corners = [(h, seg.vertices()[1]), (h + abs(seg.xb - seg.xa), seg.vertices()[2]),
                       (seg.length(), seg.vertices()[3])]
            at_end = s == end[0] and not (first and end[1] < t)
            stop = end[1] if at_end else None
            for tc, v in corners:
                if tc > t and (stop is None or tc < stop):
                    pts.append(v)
            if at_end:
                break
            first = False
            s = (s + 1) % len(segs)
            t = Fraction(0)
        last = self._point_at(ci, end)
        if pts[-1] != last:
            pts.append(last)
        return _dedupe(pts)

    def circle_path(self, ci: int, start: tuple[int, Fraction], end: tuple[int, Fraction],
                    cut: tuple[int, Fraction]) -> list[Pt]:
        """Polyline along a circle from start to end avoiding the cut point."""
        offs = self._offsets(ci)
        total = offs[-1]

        def lin(loc: tuple[int, Fraction]) -> Fraction:
            return (offs[loc[0]] + loc[1] - offs[cut[0]] - cut[1]) % total

        if lin(start) <= lin(end):
            return self._forward(ci, start, end)
        return list(reversed(self._forward(ci, end, start)))

    def circle_order_key(self, ci: int, loc: tuple[int, Fraction], cut: tuple[int, Fraction]) -> Fraction:
        """Position on the circle minus the cut point, read against the orientation."""
        offs = self._offsets(ci)
        total = offs[-1]
        return (offs[cut[0]] + cut[1] - offs[loc[0]] - loc[1]) % total


def _dedupe(pts: list[Pt]) -> list[Pt]:
    out: list[Pt] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return out


def _meet(a: Segment, b: Segment) -> Pt | None:
    if (a.height > 0) != (b.height > 0):
        return None
    alo, ahi = sorted((a.xa, a.xb))
    blo, bhi = sorted((b.xa, b.xb))
    if not ((alo < blo < ahi < bhi) or (blo < alo < bhi < ahi)):
        return None
    tall, short = (a, b) if abs(a.height) > abs(b.height) else (b, a)
    slo, shi = sorted((short.xa, short.xb))
    x = tall.xa if slo < tall.xa < shi else tall.xb
    return (x, short.height)


# ---------------------------------------------------------------------------
# loops traced by particles

# shear factors tried in turn; a shear is a linear isotopy of the plane, so the
# counts below do not depend on it, it only removes accidental alignments
_SHEARS = (Fraction(1, 9973), Fraction(3, 7919), Fraction(7, 6007), Fraction(11, 4001))


class DegenerateTrace(ArithmeticError):
    pass


@dataclass(frozen=True)
class LoopTrace:
    """A loop in the symmetric power as a serial schedule of particle moves.

    ``start`` maps particle ids to their basepoints; each move carries one
    particle along a polyline while all others stay put.
    """

    start: tuple[tuple[object, Pt], ...]
    moves: tuple[tuple[object, tuple[Pt, ...]], ...]
    punctures: tuple[tuple[Fraction, int, int], ...] = ()  # (x, x-weight, y-weight)

    def final_positions(self) -> dict:
        pos = dict(self.start)
        for pid, path in self.moves:
            if pos[pid] != path[0]:
                raise DegenerateTrace(f"move of {pid!r} does not start at its position")
            pos[pid] = path[-1]
        return pos

    def is_closed(self) -> bool:
        return sorted(map(_key, self.final_positions().values())) == sorted(_key(p) for _, p in self.start)

    def then(self, other: LoopTrace) -> LoopTrace:
        return LoopTrace(self.start, self.moves + other.moves, self.punctures)


def _key(p: Pt) -> tuple[Fraction, Fraction]:
    return (p[0], p[1])


def _crossing_events(path: list[tuple[int, int]], sx: int, sy: int, p: int, q: int) -> list[tuple[int, int]]:
    """(direction, below) for each time the sheared x of the mover passes sx.

    Coordinates are integers on a common scale and the shear is x + (p/q) y,
    so everything stays exact without Fractions.
    """
    out = []
    ref = q * sx + p * sy
    fs = [q * x + p * y - ref for x, y in path]
    for i in range(len(path) - 1):
        f1, f2 = fs[i], fs[i + 1]
        if f1 == 0 or f2 == 0:
            if path[i] == (sx, sy) or path[i + 1] == (sx, sy):
                raise DegenerateTrace("particle collision")
            raise DegenerateTrace("aligned")
        if (f1 > 0) == (f2 > 0):
            continue
        # sign of (y - sy) at the passage, scaled by f1 - f2
        y1, y2 = path[i][1], path[i + 1][1]
        num = (y1 - sy) * (f1 - f2) + f1 * (y2 - y1)
        if num == 0:
            raise DegenerateTrace("particle collision")
        below = (num < 0) == (f1 - f2 > 0)
        out.append((1 if f2 > 0 else -1, 1 if below else 0))
    return out


def _num_den(v) -> tuple[int, int]:
    if isinstance(v, int):
        return v, 1
    return v.numerator, v.denominator


def _scaled(t: LoopTrace) -> tuple[list, list, list]:
    pts = [p for _, p in t.start] + [p for _, path in t.moves for p in path]
    dens = {_num_den(v)[1] for pt in pts for v in pt}
    dens.update(_num_den(px)[1] for px, _, _ in t.punctures)
    den = lcm(*dens) if dens else 1

    def one(v) -> int:
        num, d = _num_den(v)
        return num * (den // d)

    def sc(pt: Pt) -> tuple[int, int]:
        return (one(pt[0]), one(pt[1]))

    start = [(pid, sc(p)) for pid, p in t.start]
    moves = [(pid, [sc(p) for p in path]) for pid, path in t.moves]
    punct = [(one(px), wx, wy) for px, wx, wy in t.punctures]
    return start, moves, punct


def _profile(t: LoopTrace, eps: Fraction, scaled: tuple | None = None) -> tuple[int, int, int]:
    start, moves, punct = scaled or _scaled(t)
    p, q = eps.numerator, eps.denominator
    pos = dict(start)
    xw = yw = ex = 0
    for pid, path in moves:
        for px, wx, wy in punct:
            for d, below in _crossing_events(path, px, 0, p, q):
                if below:
                    xw += d * wx
                    yw += d * wy
        for other, (sx, sy) in pos.items():
            if other == pid:
                continue
            for d, below in _crossing_events(path, sx, sy, p, q):
                ex += d if below else -d
        pos[pid] = path[-1]
    return xw, yw, ex


def trace_counts(t: LoopTrace) -> tuple[int, int, int]:
    """(x winding, y winding, exponent sum) of a closed trace."""
    if not t.is_closed():
        raise DegenerateTrace("trace is not closed as a set")
    last: Exception | None = None
    scaled = _scaled(t)
    for eps in _SHEARS:
        try:
            return _profile(t, eps, scaled)
        except DegenerateTrace as exc:
            if "collision" in str(exc):
                raise
            last = exc
    raise DegenerateTrace(f"could not find a generic projection: {last}")


def winding_profile(t: LoopTrace) -> tuple[int, int]:
    xw, yw, _ = trace_counts(t)
    return xw, yw


def braid_exponent(t: LoopTrace) -> int:
    return trace_counts(t)[2]

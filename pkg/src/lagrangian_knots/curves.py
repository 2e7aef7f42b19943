"""Curves in the punctured disc encoded by their crossings with the diameter.

Punctures sit on the horizontal diameter, puncture ``i`` at x = i + 1.
Interval ``j`` is the open segment (j, j + 1) of the diameter, so interval
``i`` is just left of puncture ``i`` and interval ``i + 1`` just right of it.

A curve in minimal position with the diameter is determined up to isotopy by
the sequence of diameter points it visits and the half (upper/lower) of its
first segment; consecutive segments alternate halves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

UP, DOWN = 1, -1

# axis points: ("p", i) is puncture i, ("c", j) a crossing of interval j
Point = tuple[str, int]


def P(i: int) -> Point:
    return ("p", i)


def C(j: int) -> Point:
    return ("c", j)


def axis_key(pt: Point) -> float:
    """Position on the diameter: punctures at integers, intervals at half-integers."""
    kind, i = pt
    return i + 1 if kind == "p" else i + 0.5


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CurveWord:
    """Arc (puncture to puncture) or circle, as a diameter-crossing word.

    ``points`` for an arc starts and ends with punctures; for a circle it is
    the cyclic list of crossings. ``first_half`` is the half of the segment
    from ``points[0]`` to ``points[1]``.
    """

    kind: str
    points: tuple[Point, ...]
    first_half: int

    def __post_init__(self) -> None:
        if self.kind not in ("arc", "circle"):
            raise CurveError(f"unknown curve kind {self.kind!r}")
        if self.kind == "arc":
            if len(self.points) < 2 or self.points[0][0] != "p" or self.points[-1][0] != "p":
                raise CurveError("an arc must start and end at punctures")
            if any(p[0] != "c" for p in self.points[1:-1]):
                raise CurveError("interior arc points must be crossings")
        else:
            if len(self.points) % 2 or not self.points:
                raise CurveError("a circle needs an even, positive number of crossings")
            if any(p[0] != "c" for p in self.points):
                raise CurveError("circle points must be crossings")

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1 if self.kind == "arc" else len(self.points)

    def half(self, seg: int) -> int:
        return self.first_half if seg % 2 == 0 else -self.first_half

    def segment(self, seg: int) -> tuple[Point, Point, int]:
        a = self.points[seg]
        b = self.points[(seg + 1) % len(self.points)]
        return a, b, self.half(seg)

    def crossings(self) -> tuple[int, ...]:
        return tuple(j for kind, j in self.points if kind == "c")

    def reversed(self) -> CurveWord:
        if self.kind == "arc":
            return CurveWord("arc", tuple(reversed(self.points)), self.half(self.n_segments - 1))
        pts = (self.points[0],) + tuple(reversed(self.points[1:]))
        return CurveWord("circle", pts, -self.first_half)

    def dump(self) -> str:
        """Debug form ``arc(p_start,p_end;U|L): c1 c2 ...``."""
        h = "U" if self.first_half == UP else "L"
        cs = " ".join(str(j) for j in self.crossings())
        if self.kind == "arc":
            return f"arc({self.points[0][1]},{self.points[-1][1]};{h}): {cs}".rstrip()
        return f"circle({h}): {cs}"


# ---------------------------------------------------------------------------
# reduction


def reduce_word(w: CurveWord) -> CurveWord:
    """Remove bigons with the diameter until none remain (idempotent)."""
    pts = list(w.points)
    h0 = w.first_half
    if w.kind == "arc":
        changed = True
        while changed:
            changed = False
            for t in range(1, len(pts) - 2):
                if pts[t] == pts[t + 1]:
                    del pts[t:t + 2]
                    changed = True
                    break
            if changed:
                continue
            if len(pts) > 2:
                s = pts[0][1]
                if pts[1][1] in (s, s + 1):
                    del pts[1]
                    h0 = -h0
                    changed = True
                    continue
                e = pts[-1][1]
                if pts[-2][1] in (e, e + 1):
                    del pts[-2]
                    changed = True
        if len(pts) == 2 and abs(pts[0][1] - pts[1][1]) <= 1:
            # nothing separates the two halves: both are the same arc
            h0 = DOWN
        return CurveWord("arc", tuple(pts), h0)
    # circle: cyclic cancellation; dropping the pair (last, first) shifts the
    # start by one, which flips the first half
    changed = True
    while changed and len(pts) > 2:
        changed = False
        k = len(pts)
        for t in range(k):
            if pts[t] == pts[(t + 1) % k]:
                if t == k - 1:
                    pts = pts[1:-1]
                    h0 = -h0
                else:
                    del pts[t:t + 2]
                changed = True
                break
    if len(pts) == 2 and pts[0] == pts[1]:
        raise CurveError("circle reduced to a trivial loop")
    return CurveWord("circle", tuple(pts), h0)


def is_reduced(w: CurveWord) -> bool:
    return reduce_word(w) == w


def canonical_circle(w: CurveWord) -> CurveWord:
    """Rotate a circle word to its lexicographically smallest rotation."""
    if w.kind != "circle":
        return w
    k = len(w.points)
    best = None
    for r in range(k):
        pts = w.points[r:] + w.points[:r]
        h = w.half(r)
        key = (pts, h)
        if best is None or key < best:
            best = key
    assert best is not None
    return CurveWord("circle", best[0], best[1])


# ---------------------------------------------------------------------------
# half twists


def twist(w: CurveWord, gen: int, sign: int, ccw_positive: bool = True) -> CurveWord:
    """Image of a reduced word under the half twist exchanging punctures gen-1 and gen.

    ``gen`` is the 1-based braid generator index. The positive generator is a
    counter-clockwise half twist when ``ccw_positive``.
    """
    a_p, b_p = gen - 1, gen
    left, mid, right = a_p, a_p + 1, a_p + 2
    ccw = (sign > 0) == ccw_positive

    def inside(pt: Point) -> bool:
        return pt in (P(a_p), P(b_p), C(mid))

    def image(pt: Point) -> Point:
        if pt == P(a_p):
            return P(b_p)
        if pt == P(b_p):
            return P(a_p)
        return pt

    def spiral(h: int) -> Point:
        return C(left) if (h == UP) == ccw else C(right)

    out_pts: list[Point] = []
    out_halves: list[int] = []
    for seg in range(w.n_segments):
        a, b, h = w.segment(seg)
        ia, ib = inside(a), inside(b)
        if not ia and not ib:
            out_pts.append(a)
            out_halves.append(h)
        elif not ia and ib:
            out_pts += [a, spiral(h)]
            out_halves += [h, -h]
        elif ia and not ib:
            out_pts += [image(a), spiral(h)]
            out_halves += [-h, h]
        else:
            out_pts.append(image(a))
            out_halves.append(-h)
    if w.kind == "arc":
        out_pts.append(image(w.points[-1]))
    for t in range(1, len(out_halves)):
        if out_halves[t] != -out_halves[t - 1]:
            raise CurveError("internal error: halves do not alternate")
    return reduce_word(CurveWord(w.kind, tuple(out_pts), out_halves[0]))


def act_braid_word(w: CurveWord, letters: Iterable[int], ccw_positive: bool = True) -> CurveWord:
    """Apply letters left to right (the first letter acts first)."""
    for g in letters:
        w = twist(w, abs(g), 1 if g > 0 else -1, ccw_positive)
    return w


# ---------------------------------------------------------------------------
# layouts


@dataclass(frozen=True)
class Puncture:
    color: str  # "black", "blue" or "white" (an ungraded puncture)
    label: str


@dataclass(frozen=True)
class PunctureLayout:
    mode: str
    n: int
    entries: tuple[Puncture, ...]

    @property
    def total(self) -> int:
        return len(self.entries)

    def index_of(self, label: str) -> int:
        for i, e in enumerate(self.entries):
            if e.label == label:
                return i
        raise KeyError(label)

    def black(self, k: int) -> int:
        """Position of the black puncture labelled k (0..2n-2)."""
        return self.index_of(f"p{k}")

    @property
    def braid_active(self) -> tuple[int, ...]:
        return tuple(self.black(k) for k in range(self.n))

    def x_sign(self, pos: int) -> int:
        """Weight of a puncture in the x grading: +1 first n black, -1 last n-1."""
        e = self.entries[pos]
        if e.color != "black":
            return 0
        k = int(e.label[1:])
        return 1 if k < self.n else -1

    def is_blue(self, pos: int) -> bool:
        return self.entries[pos].color == "blue"

    def middle_x(self) -> float:
        """x-coordinate separating the left (braid) half from the right half."""
        return (self.black(self.n - 1) + self.black(self.n)) / 2 + 1


def make_layout(n: int, mode: str = "gamma") -> PunctureLayout:
    """Deterministic puncture layout.

    gamma:     p0 .. p_{n-1}, q0, then p_b q_k for b = n .. 2n-2 (k = 2n-1-b)
    alexander: p0 .. p_{n-1}, w, p_n .. p_{2n-2}
    lambda:    same as alexander; w is the endpoint of the state-sum arcs

    The ungraded puncture w keeps the tube of every circle pinched above the
    red arcs; without it the first circle would enclose its arc entirely.
    """
    if n < 2:
        raise ValueError("layouts need n >= 2")
    blacks = [Puncture("black", f"p{k}") for k in range(2 * n - 1)]
    if mode == "gamma":
        entries = blacks[:n] + [Puncture("blue", "q0")]
        for b in range(n, 2 * n - 1):
            entries += [blacks[b], Puncture("blue", f"q{2 * n - 1 - b}")]
    elif mode in ("alexander", "lambda"):
        entries = blacks[:n] + [Puncture("white", "w")] + blacks[n:]
    else:
        raise ValueError(f"unknown layout mode {mode!r}")
    return PunctureLayout(mode, n, tuple(entries))


# ---------------------------------------------------------------------------
# supports


@dataclass(frozen=True)
class Component:
    word: CurveWord
    role: str  # "red" or "green"
    family: int  # red: curve index k; green: circle index k
    copy: int = 0  # parallel copy index (red only)


@dataclass(frozen=True)
class CurveDiagram:
    layout: PunctureLayout
    components: tuple[Component, ...] = field(default=())

    def red(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.role == "red")

    def green(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.role == "green")


def peanut(layout: PunctureLayout, a: int, b: int) -> CurveWord:
    """Circle around punctures a < b only: lobes under a and b, tube over the rest.

    Oriented so that the topmost chord is traversed eastwards.
    """
    word = CurveWord("circle", (C(a), C(b + 1), C(b), C(a + 1)), UP)
    return reduce_word(word)


def green_circles(layout: PunctureLayout) -> list[CurveWord]:
    n = layout.n
    return [peanut(layout, layout.black(k), layout.black(2 * n - 1 - k)) for k in range(1, n)]


def red_arc(layout: PunctureLayout, k: int) -> CurveWord:
    """Red curve k: from black puncture k under everything to black 2n-1-k."""
    n = layout.n
    return CurveWord("arc", (P(layout.black(k)), P(layout.black(2 * n - 1 - k))), DOWN)


def standard_supports(layout: PunctureLayout, n: int, N: int) -> tuple[CurveDiagram, CurveDiagram]:
    """Red arcs (each with N-1 parallel copies) and green circles."""
    if layout.mode not in ("gamma", "alexander"):
        raise ValueError("standard supports live in the gamma or alexander layout")
    reds = tuple(Component(red_arc(layout, k), "red", k, s)
                 for k in range(1, n) for s in range(1, N))
    greens = tuple(Component(w, "green", k) for k, w in enumerate(green_circles(layout), start=1))
    return CurveDiagram(layout, reds), CurveDiagram(layout, greens)


def statesum_supports(layout: PunctureLayout, n: int, N: int,
                      state: tuple[int, ...]) -> tuple[CurveDiagram, CurveDiagram]:
    """Red arcs of the state-sum classes.

    For curve k, copies 1..i_k run from black k to w and copies i_k+1..N-1
    run from w to black 2n-1-k.
    """
    if layout.mode != "lambda":
        raise ValueError("state-sum supports live in the lambda layout")
    if len(state) != n - 1 or any(not 0 <= i <= N - 1 for i in state):
        raise ValueError(f"state {state} out of range for n={n}, N={N}")
    w = layout.index_of("w")
    reds = []
    for k, i_k in enumerate(state, start=1):
        for s in range(1, N):
            if s <= i_k:
                pts = (P(layout.black(k)), P(w))
            else:
                pts = (P(w), P(layout.black(2 * n - 1 - k)))
            reds.append(Component(CurveWord("arc", pts, DOWN), "red", k, s))
    greens = tuple(Component(c, "green", k) for k, c in enumerate(green_circles(layout), start=1))
    return CurveDiagram(layout, tuple(reds)), CurveDiagram(layout, greens)


def act_generator(d: CurveDiagram, gen: int, sign: int, ccw_positive: bool = True) -> CurveDiagram:
    if not 1 <= gen < d.layout.n:
        raise CurveError(f"generator {gen} outside the braid-active zone")
    comps = tuple(Component(twist(c.word, gen, sign, ccw_positive), c.role, c.family, c.copy)
                  for c in d.components)
    return CurveDiagram(d.layout, comps)


def act_braid(d: CurveDiagram, letters: Iterable[int], ccw_positive: bool = True) -> CurveDiagram:
    for g in letters:
        d = act_generator(d, abs(g), 1 if g > 0 else -1, ccw_positive)
    return d


reduce = reduce_word


# ---------------------------------------------------------------------------
# intersections


@dataclass(frozen=True)
class IntersectionPoint:
    """A crossing of a red arc with a green curve after bigon removal.

    Positions count crossings from the start of each word, starting at 0.
    ``local_sign`` is the calibrated sign of (red tangent, green tangent).
    """

    pos_on_red: int
    pos_on_green: int
    side: str
    local_sign: int
    point: tuple


def curve_intersections(red: CurveWord, green: CurveWord, layout: PunctureLayout) -> list[IntersectionPoint]:
    """Intersections of one red arc with one green curve, ordered along the red arc."""
    from .geometry import Realisation
    from .intersect import CALIBRATION, remove_bigons

    if not (is_reduced(red) and is_reduced(green)):
        raise CurveError("curve_intersections needs reduced words")
    comps = (Component(red, "red", 0), Component(green, "green", 0))
    R = Realisation(layout, comps)
    live = remove_bigons(R, R.crossings([0], [1]), layout.total)
    mid = layout.middle_x()
    by_green = sorted(live, key=lambda c: c.green_pos)
    green_rank = {id(c): i for i, c in enumerate(by_green)}
    out = []
    for i, c in enumerate(sorted(live, key=lambda c: c.red_pos)):
        out.append(IntersectionPoint(i, green_rank[id(c)], "left" if c.point[0] < mid else "right",
                                     CALIBRATION["crossing_sign"] * c.sign, c.point))
    return out


def __getattr__(name: str):
    # loop tracing lives with the planar geometry; re-exported lazily to avoid a cycle
    if name in ("LoopTrace", "winding_profile", "braid_exponent"):
        from . import geometry
        return getattr(geometry, name)
    raise AttributeError(name)


# ---------------------------------------------------------------------------
# drawing

_COLOURS = {"black": "#000000", "blue": "#1f4fd1", "white": "#888888", "red": "#c8102e", "green": "#1a8a3a"}


def render_svg(letters: Iterable[int], n: int, scale: int = 40) -> str:
    """SVG 1.1 drawing of the braided red arcs, the green circles and their crossings.

    Each crossing left after bigon removal gets one marker labelled
    ``curve.ordinal``, numbered along the red arc. Base points are drawn as
    small squares.
    """
    from xml.sax.saxutils import escape

    from .braid import BraidWord
    from .intersect import Model

    model = Model(BraidWord(n, tuple(letters)), 2, "gamma")
    layout, R, comps, live = model.layout, model.R, model.comps, model.crossings
    ridx = model.red_idx

    pad = 1
    h = R.max_height + pad
    width = (layout.total + 1 + pad) * scale
    height = 2 * h * scale

    def X(x) -> str:
        return f"{float(x) * scale:.3f}"

    def Y(y) -> str:
        return f"{float(h - y) * scale:.3f}"

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<line class="axis" x1="0" y1="{Y(0)}" x2="{width}" y2="{Y(0)}" stroke="#cccccc"/>']
    for ci, comp in enumerate(comps):
        pts = []
        for seg in R.segments[ci]:
            for v in seg.vertices():
                if not pts or pts[-1] != v:
                    pts.append(v)
        tag = "polygon" if comp.word.kind == "circle" else "polyline"
        coords = " ".join(f"{X(x)},{Y(y)}" for x, y in pts)
        out.append(f'<{tag} class="{comp.role}" data-family="{comp.family}" points="{coords}" '
                   f'fill="none" stroke="{_COLOURS[comp.role]}" stroke-width="2"/>')
    for pos, p in enumerate(layout.entries):
        out.append(f'<circle class="puncture" cx="{X(pos + 1)}" cy="{Y(0)}" r="4" fill="{_COLOURS[p.color]}"/>')
        out.append(f'<text class="puncture-label" x="{X(pos + 1)}" y="{float(Y(0)) + 16:.3f}" '
                   f'font-size="11" text-anchor="middle">{escape(p.label)}</text>')
    for ci in ridx:
        bx, by = model.basepoint(ci)
        out.append(f'<rect class="basepoint" x="{float(X(bx)) - 3:.3f}" y="{float(Y(by)) - 3:.3f}" '
                   f'width="6" height="6" fill="#c8102e"/>')
    for ci in ridx:
        k = comps[ci].family
        for t, c in enumerate(sorted((c for c in live if c.red == ci), key=lambda c: c.red_pos)):
            x, y = c.point
            out.append(f'<g class="marker" data-curve="{k}" data-circle="{comps[c.green].family}">'
                       f'<circle cx="{X(x)}" cy="{Y(y)}" r="5" fill="#ffd400" stroke="#000000"/>'
                       f'<text x="{float(X(x)) + 7:.3f}" y="{float(Y(y)) - 7:.3f}" font-size="11">{k}.{t}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

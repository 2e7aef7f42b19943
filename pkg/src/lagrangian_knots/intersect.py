"""Graded intersection of the braided red supports with the green circles.

Parallel copies of a red arc are materialised, so an intersection point of
multiplicity m together with a colouring becomes m honest crossings, one on
each copy that the colouring sends there. Every coloured point then yields a
closed trace of particle moves whose windings give the monomial.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import factorial

from .braid import BraidWord, closure_components
from .curves import (
    Component,
    CurveDiagram,
    UP,
    CurveError,
    CurveWord,
    act_braid,
    green_circles,
    make_layout,
    standard_supports,
    statesum_supports,
)
from .geometry import Crossing, LoopTrace, Realisation, trace_counts
from .oracles import CapExceeded
from .ring import LaurentPoly, invariant_monomial, single

# Orientation conventions, fixed once against the trefoil and then frozen.
# crossing_sign multiplies the raw (red x green) tangent sign, ray and
# diagonal multiply the puncture and particle winding counts, twist_ccw says
# whether a positive generator is a counter-clockwise half twist.
CALIBRATION = {"crossing_sign": -1, "ray": 1, "diagonal": 1, "twist_ccw": True}

Pt = tuple[Fraction, Fraction]


def _memo(fn):
    """Per-instance cache for pure methods of a model."""
    name = fn.__name__

    def wrapper(self, *args):
        cache = self.__dict__.setdefault("_cache", {})
        key = (name, args)
        if key not in cache:
            cache[key] = fn(self, *args)
        return cache[key]

    wrapper.__name__ = name
    wrapper.__doc__ = fn.__doc__
    return wrapper


@dataclass(frozen=True)
class RedPoint:
    """A crossing of red curve ``family`` with green circle ``circle``.

    ``crossings`` holds the realisation of the point on every parallel copy
    of the curve, in copy order.
    """

    family: int
    circle: int
    ordinal: int
    side: str
    sign: int
    crossings: tuple[Crossing, ...]

    @property
    def point(self) -> Pt:
        return self.crossings[0].point


@dataclass(frozen=True)
class MultiPoint:
    """Points on each red curve (left to right) with their multiplicities."""

    assignment: tuple[tuple[tuple[RedPoint, int], ...], ...]

    def loads(self) -> Counter:
        c: Counter = Counter()
        for pts in self.assignment:
            for p, m in pts:
                c[p.circle] += m
        return c

    def sign(self) -> int:
        s = 1
        for pts in self.assignment:
            for p, m in pts:
                s *= p.sign ** m
        return s

    def label(self) -> str:
        parts = []
        for pts in self.assignment:
            parts.append("+".join(f"{p.family}.{p.ordinal}" + (f"^{m}" if m > 1 else "")
                                  for p, m in pts))
        return " | ".join(parts)


@dataclass(frozen=True)
class Colouring:
    """f^k as a tuple: entry s-1 is the point index (0-based) of base point s."""

    maps: tuple[tuple[int, ...], ...]

    def blocks(self, k: int) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s, i in enumerate(self.maps[k], start=1):
            out.setdefault(i, []).append(s)
        return out


@dataclass
class GradedResult:
    gamma: LaurentPoly
    per_point: list[tuple[MultiPoint, int, LaurentPoly]]
    n: int
    N: int
    braid: BraidWord
    elapsed: float = 0.0
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# model


class Model:
    """Braided red supports, green circles and their planar realisation."""

    def __init__(self, braid: BraidWord, N: int, mode: str, state: tuple[int, ...] | None = None,
                 calibration: dict | None = None):
        self.cal = dict(CALIBRATION if calibration is None else calibration)
        self.braid = braid
        self.n = n = braid.strands
        self.N = N
        self.mode = mode
        self.layout = make_layout(n, "alexander" if mode == "alexander" else
                                  "lambda" if mode == "lambda" else "gamma")
        if mode == "lambda":
            assert state is not None
            red, green = statesum_supports(self.layout, n, N, state)
        else:
            red, green = standard_supports(self.layout, n, N)
        red = act_braid(red, braid.letters, self.cal["twist_ccw"])
        if mode == "lambda":
            red = _land_from_below(red, self.layout.index_of("w"))
        self.red_diagram, self.green_diagram = red, green
        self.comps: tuple[Component, ...] = red.components + green.components
        self.R = Realisation(self.layout, self.comps)
        self.red_idx = list(range(len(red.components)))
        self.green_idx = list(range(len(red.components), len(self.comps)))
        self.copy_index = {(c.family, c.copy): i for i, c in enumerate(self.comps) if c.role == "red"}
        self.circle_index = {self.comps[i].family: i for i in self.green_idx}
        self.crossings = remove_bigons(self.R, self.R.crossings(self.red_idx, self.green_idx),
                                       self.layout.total)
        self.mid = Fraction(self.layout.black(n - 1) + self.layout.black(n) + 2, 2)
        self._cuts = {}
        for k, ci in self.circle_index.items():
            top = self.R.segments[ci][0]
            self._cuts[k] = self.R.location(ci, (Fraction(n + 1), top.height))

    # signs and sides --------------------------------------------------------

    def side(self, pt: Pt) -> str:
        return "left" if pt[0] < self.mid else "right"

    def sign(self, c: Crossing) -> int:
        s = self.cal["crossing_sign"] * c.sign
        word = self.comps[c.red].word
        if self.layout.mode == "lambda" and word.points[0] == ("p", self.layout.index_of("w")):
            s = -s
        return s

    def copy_crossings(self, ci: int) -> list[Crossing]:
        return sorted((c for c in self.crossings if c.red == ci), key=lambda c: c.red_pos)

    def points(self) -> dict[int, list[RedPoint]]:
        """Intersection points of each red curve, ordered from its left end."""
        out: dict[int, list[RedPoint]] = {}
        for k in range(1, self.n):
            lists = [self.copy_crossings(self.copy_index[(k, s)]) for s in range(1, self.N)]
            if any(len(l) != len(lists[0]) for l in lists):
                raise CurveError("parallel copies meet the circles differently")
            pts = []
            for t, group in enumerate(zip(*lists)):
                circles = {self.comps[c.green].family for c in group}
                if len(circles) != 1:
                    raise CurveError("parallel copies meet different circles")
                c0 = group[0]
                pts.append(RedPoint(k, circles.pop(), t, self.side(c0.point),
                                             self.sign(c0), tuple(group)))
            out[k] = pts
        return out

    # loops ----------------------------------------------------------------------

    @_memo
    def basepoint(self, ci: int) -> Pt:
        comp = self.comps[ci]
        n, N = self.n, self.N
        off = Fraction(comp.family * N + comp.copy, 64 * N * n)
        w = ("p", self.layout.index_of("w")) if self.layout.mode != "gamma" else None
        word = comp.word
        if w is not None and word.points[0] == w:
            seg = self.R.segments[ci][0]
            x = Fraction(n + 1) + Fraction(1, 16) + off
        else:
            seg = self.R.segments[ci][-1]
            x = Fraction(n + 1) - Fraction(1, 8) + off
        lo, hi = sorted((seg.xa, seg.xb))
        if not lo < x < hi:
            raise CurveError("base point does not sit on the expected red segment")
        return (x, seg.height)

    @_memo
    def eta(self, ci: int, k: int) -> tuple[list[Pt], tuple[int, Fraction]]:
        """Connector from the base point of copy ci to the west end of circle k's tube.

        It runs below everything and rises just right of black puncture k.
        """
        comp = self.comps[ci]
        n, N = self.n, self.N
        d = self.basepoint(ci)
        gi = self.circle_index[k]
        tube = self.R.segments[gi][2]
        y1 = -Fraction(self.R.max_height + 2) + Fraction(comp.copy, N)
        x_e = Fraction(self.layout.black(k) + 1) + Fraction(13, 16) + Fraction(k * N + comp.copy, 64 * N * n)
        lo, hi = sorted((tube.xa, tube.xb))
        if not lo < x_e < hi:
            raise CurveError("connector misses the tube")
        entry = (x_e, tube.height)
        return [d, (d[0], y1), (x_e, y1), entry], self.R.location(gi, entry)

    @_memo
    def eta_prime(self, ci: int, k: int) -> tuple[list[Pt], tuple[int, Fraction]]:
        """Connector passing under the right half, then back west over blue q_k
        (or the gap after black 2n-1-k when there are no blue punctures)."""
        comp = self.comps[ci]
        s, N = comp.copy, self.N
        d = self.basepoint(ci)
        gi = self.circle_index[k]
        y1 = -Fraction(self.R.max_height + 2) + Fraction(s, N)
        if self.layout.mode == "gamma":
            x_up = Fraction(self.layout.index_of(f"q{k}") + 1) + Fraction(1, 8) - Fraction(s, 16 * N)
        else:
            x_up = Fraction(self.layout.black(2 * self.n - 1 - k) + 1) + Fraction(13, 16) - Fraction(s, 16 * N)
        y_e = Fraction(1, 2) - Fraction(s, 4 * N)
        x_rb = self.R.x_of(gi, 1)
        path = [d, (d[0], y1), (x_up, y1), (x_up, y_e), (x_rb, y_e)]
        return path, self.R.location(gi, (x_rb, y_e))

    def trace(self, targets: dict[int, Crossing]) -> LoopTrace:
        """Loop through the configuration given by copy -> crossing."""
        R = self.R
        start = tuple((ci, self.basepoint(ci)) for ci in sorted(targets))
        moves: list[tuple[object, tuple[Pt, ...]]] = []
        slides: list[tuple[object, tuple[Pt, ...]]] = []
        for k, gi in sorted(self.circle_index.items()):
            family = sorted(ci for ci in targets if self.comps[ci].family == k)
            here = [c for c in targets.values() if c.green == gi]
            cut = self._cuts[k]
            here.sort(key=lambda c: R.circle_order_key(gi, c.green_pos, cut))
            if len(here) != len(family):
                raise CurveError("circle load differs from its family size")
            # the highest copies take the right-hand targets; inside each
            # group particles keep their order along the circle
            right = [c for c in here if self.side(c.point) == "right"]
            left = [c for c in here if self.side(c.point) != "right"]
            legs = []
            for movers, tgts, conn in ((family[:len(left)], left, self.eta),
                                       (family[len(left):], right, self.eta_prime)):
                ends = sorted((conn(ci, k) + (ci,) for ci in movers),
                              key=lambda e: R.circle_order_key(gi, e[1], cut))
                for (path, entry, ci), tgt in zip(ends, tgts):
                    ke = R.circle_order_key(gi, entry, cut)
                    kt = R.circle_order_key(gi, tgt.green_pos, cut)
                    legs.append((ke, kt, ci, path, entry, tgt))
            up = sorted((l for l in legs if l[1] >= l[0]), key=lambda l: -l[0])
            down = sorted((l for l in legs if l[1] < l[0]), key=lambda l: l[0])
            for ke, kt, ci, path, entry, tgt in up + down:
                slides.append((ci, tuple(R.circle_path(gi, entry, tgt.green_pos, cut))))
            for leg in sorted(legs, key=lambda l: l[2]):
                moves.append((leg[2], tuple(leg[3])))
        # every connector is travelled before anyone slides along a circle, so a
        # parked particle never sits where a later connector lands
        moves.sort(key=lambda m: m[0])
        moves += slides
        for ci, tgt in sorted(targets.items()):
            end = R.location(ci, self.basepoint(ci))
            path = R.arc_path(ci, tgt.red_pos, end)
            holder = next(m for m in moves if m[1][-1] == tgt.point)[0]
            moves.append((holder, tuple(path)))
        punct = []
        ray = self.cal["ray"]
        for pos in range(self.layout.total):
            xw = ray * self.layout.x_sign(pos)
            yw = ray if self.layout.is_blue(pos) else 0
            if xw or yw:
                punct.append((Fraction(pos + 1), xw, yw))
        return LoopTrace(start, tuple(moves), tuple(punct))

    def grade(self, targets: dict[int, Crossing]) -> LaurentPoly:
        xw, yw, ex = trace_counts(self.trace(targets))
        return invariant_monomial(x=xw, y=yw, d=self.cal["diagonal"] * ex)


def _land_from_below(d: CurveDiagram, w: int) -> CurveDiagram:
    """Rotate arc ends at w so that they arrive through the lower half.

    Swinging an arc's end around its own puncture is an isotopy, but reduced
    words always drop the crossing next to the end; realising the unreduced
    form keeps the base points below the diameter as in the gamma picture.
    """
    comps = []
    for c in d.components:
        wd = c.word
        if wd.points[-1] == ("p", w) and wd.half(wd.n_segments - 1) == UP:
            wd = CurveWord("arc", wd.points[:-1] + (("c", w), ("p", w)), wd.first_half)
        comps.append(Component(wd, c.role, c.family, c.copy))
    return CurveDiagram(d.layout, tuple(comps))


def _winds(poly: list[Pt], px: Fraction) -> bool:
    """Whether a closed rectilinear polyline winds around the axis point (px, 0)."""
    w = 0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        if y1 == y2 and y1 > 0 and min(x1, x2) < px < max(x1, x2):
            w += 1 if x2 < x1 else -1
    return w != 0


def remove_bigons(R: Realisation, crossings: list[Crossing], total: int) -> list[Crossing]:
    """Drop pairs of red/green crossings that bound a puncture-free bigon.

    Words reduced against the diameter can still form a bigon with a circle
    when both curves cross the same interval next to each other. Removing an
    innermost bigon is an isotopy of the red curve, so it changes neither the
    other crossings nor the homotopy classes of the loops through them.
    """
    live = list(crossings)
    changed = True
    while changed:
        changed = False
        for c1, c2 in _bigon_candidates(R, live):
            poly = _bigon_polygon(R, c1, c2, live)
            if poly is None:
                continue
            if any(_winds(poly, Fraction(pos + 1)) for pos in range(total)):
                continue
            live = [c for c in live if c is not c1 and c is not c2]
            changed = True
            break
    return live


def _bigon_candidates(R: Realisation, live: list[Crossing]):
    by_red: dict[int, list[Crossing]] = {}
    for c in live:
        by_red.setdefault(c.red, []).append(c)
    for ci in sorted(by_red):
        seq = sorted(by_red[ci], key=lambda c: c.red_pos)
        for a, b in zip(seq, seq[1:]):
            if a.green == b.green:
                yield a, b


def _bigon_polygon(R: Realisation, a: Crossing, b: Crossing, live: list[Crossing]) -> list[Pt] | None:
    gi = a.green
    segs = R.segments[gi]
    offs = [Fraction(0)]
    for seg in segs:
        offs.append(offs[-1] + seg.length())
    total = offs[-1]

    def lin(loc):
        return offs[loc[0]] + loc[1]

    la, lb = lin(a.green_pos), lin(b.green_pos)
    others = [lin(c.green_pos) for c in live if c.green == gi and c is not a and c is not b]
    red = R.arc_path(a.red, a.red_pos, b.red_pos)
    # circle arc from b forward to a, or from a forward to b (then reversed)
    if not any(0 < (o - lb) % total < (la - lb) % total for o in others):
        circ = R._forward(gi, b.green_pos, a.green_pos)
    elif not any(0 < (o - la) % total < (lb - la) % total for o in others):
        circ = list(reversed(R._forward(gi, a.green_pos, b.green_pos)))
    else:
        return None
    return red + circ[1:-1]


def _join(a: list[Pt], b: list[Pt]) -> list[Pt]:
    if a[-1] != b[0]:
        raise CurveError("connector and circle path do not meet")
    return a + b[1:]


# ---------------------------------------------------------------------------
# multipoints and colourings


def enumerate_multipoints(points: dict[int, list[RedPoint]], n: int, N: int) -> list[MultiPoint]:
    """All multipoints: N-1 points per red curve and per circle, counted with multiplicity."""
    per_curve: list[list[tuple[tuple[tuple[RedPoint, int], ...], Counter]]] = []
    for k in range(1, n):
        pts = points.get(k, [])
        opts = []
        for combo in combinations_with_replacement(range(len(pts)), N - 1):
            mult = Counter(combo)
            chosen = tuple((pts[i], mult[i]) for i in sorted(mult))
            if sum(1 for p, _ in chosen if p.side == "right") > 1:
                continue
            load: Counter = Counter()
            for p, m in chosen:
                load[p.circle] += m
            if any(v > N - 1 for v in load.values()):
                continue
            opts.append((chosen, load))
        per_curve.append(opts)
    out: list[MultiPoint] = []

    def rec(k: int, acc: list, load: Counter) -> None:
        if k == len(per_curve):
            if all(load[j] == N - 1 for j in range(1, n)):
                mp = MultiPoint(tuple(acc))
                assert all(sum(m for _, m in pts) == N - 1 for pts in mp.assignment)
                out.append(mp)
            return
        for chosen, l in per_curve[k]:
            new = load + l
            if any(v > N - 1 for v in new.values()):
                continue
            rec(k + 1, acc + [chosen], new)

    rec(0, [], Counter())
    return out


def colourings(mp: MultiPoint, N: int) -> list[Colouring]:
    """All colourings of a multipoint (top block forced onto a right-side last point)."""
    per_curve = []
    for pts in mp.assignment:
        mults = [m for _, m in pts]
        right_last = bool(pts) and pts[-1][0].side == "right"
        free = N - 1 - (mults[-1] if right_last else 0)
        labels = []
        for i, m in enumerate(mults):
            if right_last and i == len(mults) - 1:
                continue
            labels += [i] * m
        maps = sorted(set(permutations(labels)))
        if right_last:
            maps = [tuple(m) + (len(mults) - 1,) * mults[-1] for m in maps]
        assert all(len(m) == N - 1 for m in maps) and (free >= 0)
        per_curve.append(maps)
    return [Colouring(tuple(c)) for c in product(*per_curve)]


def colouring_count(mp: MultiPoint, N: int) -> int:
    total = 1
    for pts in mp.assignment:
        mults = [m for _, m in pts]
        if pts and pts[-1][0].side == "right":
            mults = mults[:-1]
        c = factorial(sum(mults))
        for m in mults:
            c //= factorial(m)
        total *= c
    return total


def build_loop(model: Model, mp: MultiPoint, F: Colouring) -> LoopTrace:
    return model.trace(_targets(model, mp, F))


def _targets(model: Model, mp: MultiPoint, F: Colouring) -> dict[int, Crossing]:
    targets = {}
    for k, (pts, fk) in enumerate(zip(mp.assignment, F.maps), start=1):
        for s, i in enumerate(fk, start=1):
            if sum(1 for j in fk if j == i) != pts[i][1]:
                raise ValueError("colouring does not match the multiplicities")
            targets[model.copy_index[(k, s)]] = pts[i][0].crossings[s - 1]
    return targets


def grade_point(model: Model, mp: MultiPoint, N: int) -> tuple[int, LaurentPoly]:
    total = LaurentPoly.zero()
    for F in colourings(mp, N):
        total = total + model.grade(_targets(model, mp, F))
    return mp.sign(), total


# ---------------------------------------------------------------------------
# invariants


def _prefactor(b: BraidWord) -> int:
    return -b.writhe() - (b.strands - 1)


def _check(b: BraidWord, N: int) -> None:
    if N < 2:
        raise ValueError("colour N must be at least 2")


def gamma(b: BraidWord, N: int, calibration: dict | None = None,
          max_points: int | None = None) -> GradedResult:
    """Gamma_N of the closure of b, with its per-point decomposition.

    ``max_points`` caps the number of multipoints; CapExceeded is raised
    before any grading work when the budget is exceeded.
    """
    _check(b, N)
    t0 = time.perf_counter()
    n = b.strands
    if n == 1:
        return GradedResult(LaurentPoly.one(), [], n, N, b, time.perf_counter() - t0)
    model = Model(b, N, "gamma", calibration=calibration)
    pts = model.points()
    total = LaurentPoly.zero()
    per_point = []
    mps = enumerate_multipoints(pts, n, N)
    if max_points is not None and len(mps) > max_points:
        raise CapExceeded(f"{len(mps)} multipoints exceeds budget {max_points}")
    for mp in mps:
        eps, P = grade_point(model, mp, N)
        per_point.append((mp, eps, P))
        total = total + P * eps
    m = (n - 1) * (N - 1)
    # (-y)^-m = (-1)^m y^-m
    pre = invariant_monomial(u=_prefactor(b), y=-m, coeff=-1 if m % 2 else 1)
    return GradedResult(pre * total, per_point, n, N, b, time.perf_counter() - t0,
                        {"points": sum(len(v) for v in pts.values())})


def statesum_term(b: BraidWord, N: int, state: tuple[int, ...],
                  calibration: dict | None = None) -> LaurentPoly:
    """Graded intersection of the braided F_i supports with L_i (no prefactors)."""
    model = Model(b, N, "lambda", state=state, calibration=calibration)
    by_copy: dict[int, list[Crossing]] = {ci: model.copy_crossings(ci) for ci in model.red_idx}
    order = sorted(by_copy)
    total = LaurentPoly.zero()
    n = b.strands

    def rec(i: int, chosen: dict[int, Crossing], load: Counter) -> None:
        nonlocal total
        if i == len(order):
            if all(load[gi] == N - 1 for gi in model.green_idx):
                eps = 1
                for c in chosen.values():
                    eps *= model.sign(c)
                total = total + model.grade(dict(chosen)) * eps
            return
        ci = order[i]
        for c in by_copy[ci]:
            if load[c.green] >= N - 1:
                continue
            chosen[ci] = c
            load[c.green] += 1
            rec(i + 1, chosen, load)
            load[c.green] -= 1
            del chosen[ci]

    rec(0, {}, Counter())
    assert len(model.green_idx) == n - 1
    return total


def lambda_(b: BraidWord, N: int, calibration: dict | None = None) -> LaurentPoly:
    """Lambda_N: the state sum over the classes F_i, L_i, in (u, x, d)."""
    _check(b, N)
    n = b.strands
    if n == 1:
        return LaurentPoly.one()
    total = LaurentPoly.zero()
    for state in product(range(N), repeat=n - 1):
        term = statesum_term(b, N, state, calibration)
        total = total + term * invariant_monomial(d=-sum(state))
    return invariant_monomial(u=_prefactor(b)) * total


def alexander_fast(b: BraidWord, calibration: dict | None = None) -> LaurentPoly:
    """Alexander polynomial from the N=2 intersection in the disc without blue punctures.

    Returned in x with scale 2 (exponents are halved on display) when the
    prefactor exponent (w + n - 1)/2 is a half-integer.
    """
    n = b.strands
    if n == 1:
        return single({0: 1}, "x")
    model = Model(b, 2, "alexander", calibration=calibration)
    pts = model.points()
    half = b.writhe() + n - 1
    acc: Counter = Counter()
    for mp in enumerate_multipoints(pts, n, 2):
        F = colourings(mp, 2)[0]
        xw, _, ex = trace_counts(model.trace(_targets(model, mp, F)))
        acc[2 * xw + half] += mp.sign() * (-1 if ex % 2 else 1) * (-1 if (n - 1) % 2 else 1)
    out = {e: c for e, c in acc.items() if c}
    if all(e % 2 == 0 for e in out):
        return single({e // 2: c for e, c in out.items()}, "x")
    if closure_components(b) == 1:
        raise ArithmeticError("half-integer exponents for a knot closure")
    return single(out, "x", scale=2)


@dataclass
class IdentityReport:
    braid: BraidWord
    N: int
    equal: bool
    gamma_restricted: LaurentPoly
    lam: LaurentPoly

    def difference(self) -> LaurentPoly:
        return self.gamma_restricted - self.lam


def restrict_y(p: LaurentPoly) -> LaurentPoly:
    """Substitute y = -d."""
    iy, idd = p.names.index("y"), p.names.index("d")
    out: Counter = Counter()
    for e, c in p.terms.items():
        e2 = list(e)
        e2[idd] += e2[iy]
        sign = -1 if e2[iy] % 2 else 1
        e2[iy] = 0
        out[tuple(e2)] += sign * c
    return LaurentPoly(dict(out), p.names)


def verify_identity(b: BraidWord, N: int, calibration: dict | None = None) -> IdentityReport:
    g = restrict_y(gamma(b, N, calibration).gamma)
    lam = lambda_(b, N, calibration)
    return IdentityReport(b, N, g == lam, g, lam)

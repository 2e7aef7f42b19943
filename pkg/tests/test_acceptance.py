"""Acceptance criteria 1-7, one test per criterion.

Each test records a single pass/fail line which is repeated in the terminal
summary under "acceptance criteria".
"""
import itertools
import random
import time
from collections import Counter

import pytest

from lagrangian_knots.braid import BraidWord, closure_components, parse_braid
from lagrangian_knots.cli import sample_braids
from lagrangian_knots.curves import (
    CurveWord,
    act_braid,
    canonical_circle,
    make_layout,
    reduce,
    standard_supports,
    statesum_supports,
)
from lagrangian_knots.geometry import braid_exponent, winding_profile
from lagrangian_knots.intersect import (
    Model,
    _targets,
    alexander_fast,
    colourings,
    enumerate_multipoints,
    gamma,
    restrict_y,
    verify_identity,
)
from lagrangian_knots.oracles import alexander_burau, colored_jones_rmatrix, jones_kauffman
from lagrangian_knots.ring import (
    CycloInt,
    LaurentPoly,
    specialize_ado,
    specialize_generic,
    specialize_jones,
)

import reference_data as ref
from schedules import commuting_shuffle


def test_criterion_1_trefoil(acceptance):
    t0 = time.perf_counter()
    b = parse_braid(ref.TREFOIL, 2)
    g = gamma(b, 2).gamma
    jones = specialize_jones(g, 2)
    alex = specialize_ado(g, 2).in_x()
    fast = alexander_fast(b)
    elapsed = time.perf_counter() - t0
    ok = (g == ref.TREFOIL_GAMMA and jones == ref.TREFOIL_JONES
          and alex == ref.TREFOIL_ALEXANDER and fast == ref.TREFOIL_ALEXANDER and elapsed < 1)
    acceptance(1, ok, f"trefoil gamma/jones/alexander exact, {elapsed:.2f}s (< 1s)")
    assert g == ref.TREFOIL_GAMMA
    assert jones == ref.TREFOIL_JONES
    assert alex == ref.TREFOIL_ALEXANDER and fast == ref.TREFOIL_ALEXANDER
    assert elapsed < 1


def test_criterion_2_knot_8_19(acceptance):
    t0 = time.perf_counter()
    b = parse_braid(ref.KNOT_8_19, 3)
    res = gamma(b, 2)
    ours = Counter()
    for _, eps, P in res.per_point:
        ((e, c),) = P.terms.items()
        ours[(e, eps * c)] += 1
    restricted = restrict_y(res.gamma)
    jones = specialize_jones(res.gamma, 2)
    alex = specialize_ado(res.gamma, 2).in_x()
    fast = alexander_fast(b)
    elapsed = time.perf_counter() - t0
    table_ok = ours == ref.table_8_19() and len(res.per_point) == 35
    # the printed three-variable form differs from the restriction of the
    # printed four-variable form in exactly one coefficient
    typo = restricted - ref.restricted_8_19_printed()
    ok = (table_ok and res.gamma == ref.GAMMA_8_19 and restricted == restrict_y(ref.GAMMA_8_19)
          and typo == LaurentPoly({(-10, -6, 0, -3): 4})
          and jones == ref.JONES_8_19 and alex == ref.ALEXANDER_8_19 and fast == ref.ALEXANDER_8_19
          and elapsed < 10)
    acceptance(2, ok, f"8_19: 35/35 point gradings, gamma|y=-d, jones, alexander exact, {elapsed:.2f}s (< 10s)")
    assert table_ok
    assert res.gamma == ref.GAMMA_8_19
    assert restricted == restrict_y(ref.GAMMA_8_19)
    assert typo == LaurentPoly({(-10, -6, 0, -3): 4})
    assert jones == ref.JONES_8_19
    assert alex == ref.ALEXANDER_8_19 and fast == ref.ALEXANDER_8_19
    assert elapsed < 10


def test_criterion_3_gamma_lambda_identity(acceptance):
    seed = 20240611
    t0 = time.perf_counter()
    sample = sample_braids(seed, 60, 3, 6, [2, 3])
    bad = [(b.word(), b.strands, N) for b, N in sample if not verify_identity(b, N).equal]
    elapsed = time.perf_counter() - t0
    colours = Counter(N for _, N in sample)
    ok = not bad and elapsed < 300
    acceptance(3, ok, f"gamma|y=-d == lambda on {len(sample)} braids (seed {seed}, N=2: {colours[2]}, "
                      f"N=3: {colours[3]}), {len(bad)} mismatches, {elapsed:.1f}s (< 300s)")
    assert not bad
    assert elapsed < 300


def _sweep_words():
    seen = set()
    for n in (2, 3):
        gens = [g for i in range(1, n) for g in (i, -i)]
        for length in range(7):
            for w in itertools.product(gens, repeat=length):
                b = BraidWord(n, w)
                key = (n, b.free_reduction().letters)
                if key in seen:
                    continue
                seen.add(key)
                if closure_components(b) == 1:
                    yield b


@pytest.mark.slow
def test_criterion_4_oracles_n2(acceptance):
    t0 = time.perf_counter()
    braids = list(_sweep_words()) + [parse_braid(ref.FIGURE_EIGHT, 3)]
    bad = []
    for b in braids:
        g = gamma(b, 2).gamma
        oracle = alexander_burau(b)
        if (specialize_jones(g, 2) != jones_kauffman(b) or specialize_ado(g, 2).in_x() != oracle
                or alexander_fast(b) != oracle):
            bad.append((b.strands, b.word()))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 600
    acceptance(4, ok, f"N=2 jones == kauffman and alexander == burau on {len(braids)} knot closures, "
                      f"{len(bad)} mismatches, {elapsed:.1f}s (< 600s)")
    assert not bad, bad[:5]
    assert elapsed < 600


@pytest.mark.slow
def test_criterion_5_oracles_n3(acceptance):
    t0 = time.perf_counter()
    rng = random.Random(5)
    braids = [parse_braid(ref.TREFOIL, 2), parse_braid(ref.FIGURE_EIGHT, 3)]
    for _ in range(10):
        length = rng.randint(1, 6)
        braids.append(BraidWord(3, tuple(rng.choice((1, -1)) * rng.randint(1, 2) for _ in range(length))))
    bad = [(b.strands, b.word()) for b in braids
           if specialize_jones(gamma(b, 3).gamma, 3) != colored_jones_rmatrix(b, 3)]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 600
    acceptance(5, ok, f"N=3 jones == R-matrix on trefoil, figure-eight and 10 random 3-braids, "
                      f"{len(bad)} mismatches, {elapsed:.1f}s (< 600s)")
    assert not bad, bad
    assert elapsed < 600


# ---------------------------------------------------------------------------
# criterion 6


def _random_diagram(rng: random.Random):
    n = rng.choice((3, 4))
    mode = rng.choice(("gamma", "alexander", "lambda"))
    layout = make_layout(n, mode)
    N = rng.choice((2, 3))
    if mode == "lambda":
        red, green = statesum_supports(layout, n, N, tuple(rng.randrange(N) for _ in range(n - 1)))
    else:
        red, green = standard_supports(layout, n, N)
    prefix = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 5))]
    red = act_braid(red, prefix)
    green = act_braid(green, prefix)
    return n, red, green


def _canon(d):
    return tuple((canonical_circle(c.word), c.role, c.family, c.copy) for c in d.components)


def braid_relation_case(rng: random.Random) -> bool:
    n, red, green = _random_diagram(rng)
    kind = rng.choice(("braid", "inverse", "far") if n == 4 else ("braid", "inverse"))
    if kind == "braid":
        i = rng.randint(1, n - 2)
        s = rng.choice((1, -1))
        lhs, rhs = [s * i, s * (i + 1), s * i], [s * (i + 1), s * i, s * (i + 1)]
    elif kind == "inverse":
        g = rng.choice((1, -1)) * rng.randint(1, n - 1)
        lhs, rhs = [g, -g], []
    else:
        lhs = [rng.choice((1, -1)) * 1, rng.choice((1, -1)) * 3]
        rhs = lhs[::-1]
    return all(_canon(act_braid(d, lhs)) == _canon(act_braid(d, rhs)) for d in (red, green))


def random_word(rng: random.Random, kind: str) -> CurveWord:
    m = rng.randint(3, 8)
    if kind == "arc":
        k = rng.randint(0, 12)
        pts = (("p", rng.randrange(m)),) + tuple(("c", rng.randint(0, m)) for _ in range(k)) + (("p", rng.randrange(m)),)
    else:
        k = 2 * rng.randint(2, 7)
        pts = tuple(("c", rng.randint(0, m)) for _ in range(k))
    return CurveWord(kind, pts, rng.choice((1, -1)))


def random_order_reduce(w: CurveWord, rng: random.Random) -> CurveWord:
    """Apply the elementary reductions one at a time in random order."""
    pts, h = list(w.points), w.first_half
    while True:
        options = []
        if w.kind == "arc":
            for t in range(1, len(pts) - 2):
                if pts[t] == pts[t + 1]:
                    options.append(("pair", t))
            if len(pts) > 2 and pts[1][1] in (pts[0][1], pts[0][1] + 1):
                options.append(("start", 1))
            if len(pts) > 2 and pts[-2][1] in (pts[-1][1], pts[-1][1] + 1):
                options.append(("end", len(pts) - 2))
        elif len(pts) > 2:
            k = len(pts)
            options = [("cyc", t) for t in range(k) if pts[t] == pts[(t + 1) % k]]
        if not options:
            break
        op, t = rng.choice(options)
        if op == "pair":
            del pts[t:t + 2]
        elif op == "start":
            del pts[1]
            h = -h
        elif op == "end":
            del pts[-2]
        elif t == len(pts) - 1:
            pts, h = pts[1:-1], -h
        else:
            del pts[t:t + 2]
    if w.kind == "arc" and len(pts) == 2 and abs(pts[0][1] - pts[1][1]) <= 1:
        h = -1  # both halves of a crossing-free arc between neighbours agree
    return CurveWord(w.kind, tuple(pts), h)


def _schedule_traces():
    out = []
    for word, n, N in ((ref.KNOT_8_19, 3, 2), (ref.TREFOIL, 2, 3), (ref.FIGURE_EIGHT, 3, 3)):
        model = Model(parse_braid(word, n), N, "gamma")
        for mp in enumerate_multipoints(model.points(), n, N):
            for F in colourings(mp, N):
                out.append(model.trace(_targets(model, mp, F)))
    return out


def test_criterion_6_curve_properties(acceptance):
    rng = random.Random(6)
    relations = sum(braid_relation_case(rng) for _ in range(1000))

    words = [random_word(rng, rng.choice(("arc", "circle"))) for _ in range(500)]
    words = [w for w in words if _reducible(w)]
    idempotent = sum(reduce(reduce(w)) == reduce(w) for w in words)
    confluent = sum(all(canonical_circle(random_order_reduce(w, rng)) == canonical_circle(reduce(w))
                        for _ in range(5)) for w in words)

    traces = _schedule_traces()
    invariant = swapped = 0
    for _ in range(100):
        t = rng.choice(traces)
        shuffled, swaps = commuting_shuffle(t, rng)
        swapped += swaps > 0
        invariant += (braid_exponent(shuffled) == braid_exponent(t)
                      and winding_profile(shuffled) == winding_profile(t))
    ok = relations == 1000 and idempotent == confluent == len(words) and invariant == 100 and swapped > 50
    acceptance(6, ok, f"braid relations/inverses {relations}/1000, reduce idempotent {idempotent}/{len(words)}, "
                      f"confluent {confluent}/{len(words)}, schedule-invariant {invariant}/100 "
                      f"({swapped} schedules actually reordered)")
    assert relations == 1000
    assert idempotent == confluent == len(words)
    assert invariant == 100 and swapped > 50


def _reducible(w: CurveWord) -> bool:
    try:
        reduce(w)
    except ValueError:  # circles that collapse to a trivial loop
        return False
    return True


# ---------------------------------------------------------------------------
# criterion 7


def random_poly(rng: random.Random, terms: int = 5) -> LaurentPoly:
    return LaurentPoly({tuple(rng.randint(-4, 4) for _ in range(4)): rng.randint(-9, 9) for _ in range(terms)})


def homomorphism_case(rng: random.Random) -> bool:
    p, r = random_poly(rng), random_poly(rng)
    one = LaurentPoly.one()
    c, N = rng.randint(-3, 3), rng.randint(2, 6)
    maps = (lambda f: specialize_generic(f, c), lambda f: specialize_jones(f, N),
            lambda f: specialize_ado(f, N))
    ok = True
    for sigma in maps:
        ok &= sigma(p + r) == sigma(p) + sigma(r)
        ok &= sigma(p * r) == sigma(p) * sigma(r)
    ok &= specialize_generic(one, c) == LaurentPoly.one(("q", "A"))
    ok &= specialize_jones(one, N) == LaurentPoly.one(("q",))
    ok &= specialize_ado(one, N).terms == {0: CycloInt.integer(2 * N, 1)}
    return ok


def test_criterion_7_ring_properties(acceptance):
    rng = random.Random(7)
    laws = sum(homomorphism_case(rng) for _ in range(500))
    roots = []
    for N in range(2, 7):
        z = CycloInt.zeta_power(2 * N, 1)
        power = CycloInt.integer(2 * N, 1)
        for k in range(1, 2 * N + 1):
            power = power * z
            if k == N:
                half = power
        roots.append(power == 1 and half == -1)
    ok = laws == 500 and all(roots)
    acceptance(7, ok, f"homomorphism laws {laws}/500 random pairs x 3 specialisations, "
                      f"zeta^(2N)=1 and zeta^N=-1 for N=2..6: {sum(roots)}/5")
    assert laws == 500
    assert all(roots)

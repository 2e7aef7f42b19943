"""Classical invariants used to cross-check the intersection model.

Nothing here touches the curve engine: the bracket works on braid smoothings,
the Alexander polynomial on the Burau matrix, and the coloured Jones
polynomial on the R-matrix of the N-dimensional U_q(sl2) module.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import sympy

from .braid import BraidWord, closure_components
from .ring import LaurentPoly, single


class CapExceeded(RuntimeError):
    """Raised when an oracle would exceed its configured resource cap."""


class UnsupportedLink(ValueError):
    pass


def _poly1(terms: dict[int, int], name: str = "q") -> LaurentPoly:
    return single(terms, name)


# ---------------------------------------------------------------------------
# Kauffman bracket


def _count_loops(braid: BraidWord, state: int) -> int:
    n, letters = braid.strands, braid.letters
    length = len(letters)
    parent = list(range(n * (length + 1)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        parent[find(a)] = find(b)

    def node(level: int, pos: int) -> int:
        return (level % length) * n + pos if length else pos

    for t, g in enumerate(letters):
        a = abs(g) - 1
        vertical = (state >> t) & 1
        for i in range(n):
            if i not in (a, a + 1):
                union(node(t, i), node(t + 1, i))
        if vertical:
            union(node(t, a), node(t + 1, a))
            union(node(t, a + 1), node(t + 1, a + 1))
        else:
            union(node(t, a), node(t, a + 1))
            union(node(t + 1, a), node(t + 1, a + 1))
    roots = {find(node(t, i)) for t in range(max(length, 1)) for i in range(n)}
    return len(roots)


def kauffman_bracket(braid: BraidWord, max_letters: int = 16) -> LaurentPoly:
    """Bracket of the closure in the variable A, with <O> = 1."""
    if len(braid.letters) > max_letters:
        raise CapExceeded(f"{len(braid.letters)} letters exceeds bracket cap {max_letters}")
    delta = _poly1({2: -1, -2: -1}, "A")
    total = LaurentPoly.zero(("A",))
    cache: dict[int, LaurentPoly] = {}
    for state in range(1 << len(braid.letters)):
        a_exp = 0
        for t, g in enumerate(braid.letters):
            vertical = (state >> t) & 1
            # positive letter: A-smoothing is the vertical one
            a_exp += (1 if vertical else -1) * (1 if g > 0 else -1)
        loops = _count_loops(braid, state)
        if loops not in cache:
            cache[loops] = delta ** (loops - 1)
        total = total + cache[loops].shift((a_exp,))
    return total


def jones_kauffman(braid: BraidWord, max_letters: int = 16) -> LaurentPoly:
    """Jones polynomial of the closure, in the convention of the intersection model.

    The normalised bracket (-A^3)^-w <L> is rewritten with q = A^2 and then
    multiplied by (-1)^(components - 1), i.e. the unknot is 1 and the unlink
    of two components is q + q^-1.
    """
    br = kauffman_bracket(braid, max_letters)
    w = braid.writhe()
    norm = br.shift((-3 * w,), -1 if w % 2 else 1)
    comps = closure_components(braid)
    sign = -1 if (comps - 1) % 2 else 1
    out: dict[int, int] = {}
    for (e,), c in norm.terms.items():
        if e % 2:
            raise ArithmeticError("odd A-exponent in normalised bracket")
        out[e // 2] = out.get(e // 2, 0) + sign * c
    return _poly1(out, "q")


# ---------------------------------------------------------------------------
# Burau / Alexander

_t = sympy.Symbol("t")


def burau_matrix(braid: BraidWord) -> sympy.Matrix:
    """Unreduced Burau matrix of the braid (column convention)."""
    n = braid.strands
    m = sympy.eye(n)
    for g in braid.letters:
        i = abs(g) - 1
        gen = sympy.eye(n)
        if g > 0:
            gen[i, i], gen[i, i + 1], gen[i + 1, i], gen[i + 1, i + 1] = 1 - _t, _t, 1, 0
        else:
            gen[i, i], gen[i, i + 1], gen[i + 1, i], gen[i + 1, i + 1] = 0, 1, 1 / _t, 1 - 1 / _t
        m = m * gen
    return m


def alexander_burau(braid: BraidWord) -> LaurentPoly:
    """Alexander polynomial of a knot closure, symmetric with Delta(1) = 1."""
    if closure_components(braid) != 1:
        raise UnsupportedLink("Alexander oracle supports knot closures only")
    n = braid.strands
    if n == 1:
        return _poly1({0: 1}, "x")
    mat = sympy.eye(n) - burau_matrix(braid)
    minor = mat[: n - 1, : n - 1]
    det = sympy.factor(sympy.cancel(minor.det()))
    num, den = sympy.fraction(sympy.cancel(det))
    num_poly = sympy.Poly(sympy.expand(num), _t)
    den_poly = sympy.Poly(sympy.expand(den), _t)
    if len(den_poly.terms()) != 1:
        raise ArithmeticError(f"non-monomial denominator {den}")
    (den_exp,), den_c = den_poly.terms()[0]
    terms: dict[int, int] = {}
    for (e,), c in num_poly.terms():
        if c % den_c:
            raise ArithmeticError("non-integral Alexander coefficient")
        terms[e - den_exp] = int(c // den_c)
    return normalize_alexander(_poly1(terms, "x"))


def normalize_alexander(p: LaurentPoly) -> LaurentPoly:
    """Multiply by a unit +-x^k so that p(x) = p(1/x) and p(1) = 1."""
    if p.is_zero():
        return p
    lo, hi = p.degree_range(p.names[0])
    if (lo + hi) % 2:
        raise ArithmeticError("Alexander polynomial cannot be symmetrised")
    shift = -(lo + hi) // 2
    value = sum(p.terms.values())
    sign = -1 if value < 0 else 1
    return p.shift((shift,), sign)


# ---------------------------------------------------------------------------
# R-matrix coloured Jones; exponents are in units of q^(1/2)

_H = ("h",)


def _h(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly({(e,): c for e, c in terms.items()}, _H)


@lru_cache(maxsize=None)
def _qbinom(n: int, k: int) -> LaurentPoly:
    """Symmetric Gaussian binomial in h = q^(1/2) units."""
    if k < 0 or k > n:
        return LaurentPoly.zero(_H)
    if k == 0 or k == n:
        return LaurentPoly.one(_H)
    return _qbinom(n - 1, k).shift((2 * k,)) + _qbinom(n - 1, k - 1).shift((-2 * (n - k),))


@lru_cache(maxsize=None)
def _rmatrix(N: int, inverse: bool) -> dict[tuple[int, int], list[tuple[tuple[int, int], LaurentPoly]]]:
    """Braiding c = P o R on V (x) V for the N-dimensional module, or its inverse.

    Basis v_0..v_{N-1} with K v_j = q^(lam - 2j) v_j, lam = N - 1,
    F v_j = v_{j+1}, E v_j = [j][lam - j + 1] v_{j-1}.
    """
    lam = N - 1
    table: dict[tuple[int, int], list[tuple[tuple[int, int], LaurentPoly]]] = {}
    for i, j in product(range(N), repeat=2):
        out = []
        for n in range(0, min(i, lam - j) + 1):
            coeff = _qbinom(i, n).shift((n * (n - 1),))  # q^{n(n-1)/2}
            for k in range(n):
                m = lam - i + k + 1
                coeff = coeff * _h({2 * m: 1, -2 * m: -1})
            a, b = i - n, j + n
            coeff = coeff.shift(((lam - 2 * a) * (lam - 2 * b),))  # q^{H(x)H/2}
            out.append(((b, a), coeff))
        table[(i, j)] = out
    if not inverse:
        return table
    return _invert(table, N)


def _invert(table, N):
    # c preserves total weight, so invert it block by block, exactly
    inv: dict[tuple[int, int], list] = {}
    weights: dict[int, list[tuple[int, int]]] = {}
    for i, j in product(range(N), repeat=2):
        weights.setdefault(i + j, []).append((i, j))
    for total, basis in weights.items():
        size = len(basis)
        idx = {b: k for k, b in enumerate(basis)}
        mat = sympy.zeros(size, size)
        hsym = sympy.Symbol("h")
        for (i, j) in basis:
            for (tgt, coeff) in table[(i, j)]:
                mat[idx[tgt], idx[(i, j)]] += sum(c * hsym ** e[0] for e, c in coeff.terms.items())
        minv = mat.inv()
        for (i, j) in basis:
            col = []
            for tgt in basis:
                val = sympy.expand(sympy.cancel(minv[idx[tgt], idx[(i, j)]]))
                if val == 0:
                    continue
                terms: dict[int, int] = {}
                for term in sympy.Add.make_args(val):
                    c, e = term.as_coeff_exponent(hsym)
                    terms[int(e)] = terms.get(int(e), 0) + int(c)
                col.append((tgt, _h(terms)))
            inv[(i, j)] = col
    return inv


def colored_jones_rmatrix(braid: BraidWord, N: int, max_dim: int = 10**6) -> LaurentPoly:
    """N-th coloured Jones polynomial of the closure via the R-matrix.

    The closure is opened at the first strand (highest weight vector in, its
    coefficient out), so the unknot evaluates to 1 without dividing by [N].
    """
    if N < 2:
        raise ValueError("colour N must be at least 2")
    n = braid.strands
    if N ** n > max_dim:
        raise CapExceeded(f"tensor dimension {N}^{n} exceeds cap {max_dim}")
    lam = N - 1
    fwd, bwd = _rmatrix(N, False), _rmatrix(N, True)
    total = LaurentPoly.zero(_H)
    for rest in product(range(N), repeat=n - 1):
        start = (0, *rest)
        vec: dict[tuple[int, ...], LaurentPoly] = {start: LaurentPoly.one(_H)}
        for g in braid.letters:
            a = abs(g) - 1
            table = fwd if g > 0 else bwd
            new: dict[tuple[int, ...], LaurentPoly] = {}
            for state, coeff in vec.items():
                for (b0, b1), c in table[(state[a], state[a + 1])]:
                    s = state[:a] + (b0, b1) + state[a + 2:]
                    val = coeff * c
                    new[s] = new[s] + val if s in new else val
            vec = {s: c for s, c in new.items() if not c.is_zero()}
        if start in vec:
            # pivotal element K on the traced strands
            weight = sum(lam - 2 * j for j in rest)
            total = total + vec[start].shift((2 * weight,))
    w = braid.writhe()
    twist = lam * (lam + 2)  # theta = q^{lam(lam+2)/2}, in h units
    total = total.shift((-w * twist,))
    out: dict[int, int] = {}
    for (e,), c in total.terms.items():
        if e % 2:
            raise ArithmeticError("half-integer power of q in coloured Jones")
        out[e // 2] = c
    return _poly1(out, "q")

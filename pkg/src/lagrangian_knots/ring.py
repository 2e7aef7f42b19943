"""Exact Laurent polynomial arithmetic and the specialisation maps.

Every value here is immutable and uses Python integers, so results are exact.
"""
from __future__ import annotations

import json
import re
from functools import lru_cache
from typing import Iterable, Mapping

Exponent = tuple[int, ...]

INVARIANT_VARS = ("u", "x", "y", "d")


class LaurentPoly:
    """Sparse multivariate Laurent polynomial with integer coefficients.

    ``scale`` divides every exponent on display; it is used for half-integer
    exponents (scale 2) and must match between operands.
    """

    __slots__ = ("names", "terms", "scale", "_hash")

    def __init__(
        self,
        terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = (),
        names: tuple[str, ...] = INVARIANT_VARS,
        scale: int = 1,
    ) -> None:
        acc: dict[Exponent, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        nv = len(names)
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match variables {names}")
            acc[exp] = acc.get(exp, 0) + c
        self.terms = {e: c for e, c in sorted(acc.items()) if c}
        self.names = tuple(names)
        self.scale = scale
        self._hash: int | None = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, names: tuple[str, ...] = INVARIANT_VARS, scale: int = 1) -> LaurentPoly:
        return cls({}, names, scale)

    @classmethod
    def one(cls, names: tuple[str, ...] = INVARIANT_VARS, scale: int = 1) -> LaurentPoly:
        return cls({(0,) * len(names): 1}, names, scale)

    @classmethod
    def monomial(cls, exp: Exponent, coeff: int = 1, names: tuple[str, ...] = INVARIANT_VARS,
                 scale: int = 1) -> LaurentPoly:
        return cls({tuple(exp): coeff}, names, scale)

    @classmethod
    def var(cls, name: str, power: int = 1, names: tuple[str, ...] = INVARIANT_VARS) -> LaurentPoly:
        exp = [0] * len(names)
        exp[names.index(name)] = power
        return cls({tuple(exp): 1}, names)

    # arithmetic -------------------------------------------------------
    def _check(self, other: LaurentPoly) -> None:
        if self.names != other.names or self.scale != other.scale:
            raise ValueError("incompatible polynomial rings")

    def _coerce(self, other: object) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly({(0,) * len(self.names): other}, self.names, self.scale)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc, self.names, self.scale)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.names, self.scale)

    def __sub__(self, other: object) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: object) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly(acc, self.names, self.scale)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("monomial coefficient is not a unit")
            return LaurentPoly({tuple(a * k for a in e): c ** (-k)}, self.names, self.scale)
        result = LaurentPoly.one(self.names, self.scale)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exp: Exponent, coeff: int = 1) -> LaurentPoly:
        """Multiply by the monomial ``coeff * vars**exp``."""
        return LaurentPoly(
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
            self.names, self.scale)

    # comparison -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({(0,) * len(self.names): other}, self.names, self.scale)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.names, self.scale, self.terms) == (other.names, other.scale, other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.names, self.scale, tuple(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # substitution -----------------------------------------------------
    def substitute(self, images: Mapping[str, LaurentPoly]) -> LaurentPoly:
        """Ring homomorphism sending each variable to a unit of the target ring.

        Every image must be a signed monomial (so negative powers are defined).
        """
        target = next(iter(images.values()))
        powers: dict[tuple[str, int], LaurentPoly] = {}
        acc = LaurentPoly.zero(target.names, target.scale)
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            term_exp = [0] * len(target.names)
            sign = c
            for name, k in zip(self.names, e):
                if k == 0:
                    continue
                img = images[name]
                key = (name, k)
                if key not in powers:
                    powers[key] = img ** k
                (pe, pc), = powers[key].terms.items()
                sign *= pc
                for i, a in enumerate(pe):
                    term_exp[i] += a
            t = tuple(term_exp)
            out[t] = out.get(t, 0) + sign
        return acc + LaurentPoly(out, target.names, target.scale)

    def map_exponents(self, fn, names: tuple[str, ...], scale: int = 1) -> LaurentPoly:
        acc: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            ne = tuple(fn(e))
            acc[ne] = acc.get(ne, 0) + c
        return LaurentPoly(acc, names, scale)

    def degree_range(self, var: str) -> tuple[int, int]:
        i = self.names.index(var)
        exps = [e[i] for e in self.terms]
        return min(exps), max(exps)

    # serialisation ----------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            factors = [str(c)]
            for name, k in zip(self.names, e):
                if k:
                    factors.append(f"{name}^{_fmt_exp(k, self.scale)}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self) -> list[dict[str, object]]:
        rows = []
        for e, c in self.terms.items():
            row: dict[str, object] = {n: _json_exp(k, self.scale) for n, k in zip(self.names, e)}
            row["c"] = str(c)
            rows.append(row)
        return rows

    @classmethod
    def from_json(cls, rows: list[dict[str, object]], names: tuple[str, ...] = INVARIANT_VARS,
                  scale: int = 1) -> LaurentPoly:
        terms = []
        for row in rows:
            exp = tuple(int(round(float(row.get(n, 0)) * scale)) for n in names)  # type: ignore[arg-type]
            terms.append((exp, int(str(row["c"]))))
        return cls(terms, names, scale)

    @classmethod
    def parse(cls, text: str, names: tuple[str, ...] = INVARIANT_VARS) -> LaurentPoly:
        """Inverse of :meth:`to_text` (integer exponents only)."""
        text = text.strip()
        if text == "0":
            return cls.zero(names)
        terms = []
        for chunk in text.split(" + "):
            factors = chunk.split("*")
            coeff = int(factors[0])
            exp = [0] * len(names)
            for f in factors[1:]:
                m = re.fullmatch(r"([a-zA-Z]+)\^(-?\d+)", f)
                if not m:
                    raise ValueError(f"malformed factor {f!r}")
                exp[names.index(m.group(1))] += int(m.group(2))
            terms.append((tuple(exp), coeff))
        return cls(terms, names)

    def pretty(self) -> str:
        """Human readable single-line form, highest degree first for one variable."""
        if not self.terms:
            return "0"
        out = []
        items = sorted(self.terms.items(), reverse=len(self.names) == 1)
        for e, c in items:
            mono = "*".join(
                n if k == self.scale else f"{n}^{_fmt_exp(k, self.scale)}"
                for n, k in zip(self.names, e) if k)
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            out.append(("-" if c < 0 else "+") + s)
        res = "".join(out)
        return res[1:] if res.startswith("+") else res

    def __repr__(self) -> str:
        return f"LaurentPoly({self.pretty()!r}, names={self.names})"


def _fmt_exp(k: int, scale: int) -> str:
    if k % scale == 0:
        return str(k // scale)
    return f"{k}/{scale}"


def _json_exp(k: int, scale: int) -> object:
    return k // scale if k % scale == 0 else k / scale


def invariant_monomial(u: int = 0, x: int = 0, y: int = 0, d: int = 0, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly({(u, x, y, d): coeff})


def single(terms: Mapping[int, int], name: str = "q", scale: int = 1) -> LaurentPoly:
    """Single variable Laurent polynomial from ``{exponent: coefficient}``."""
    return LaurentPoly({(e,): c for e, c in terms.items()}, (name,), scale)


# ---------------------------------------------------------------------------
# specialisations

QA = ("q", "A")


def specialize_generic(p: LaurentPoly, c: int) -> LaurentPoly:
    """u -> A^c, x -> A^2, y -> -q^-2, d -> q^-2, where A stands for q^lambda."""
    images = {
        "u": LaurentPoly({(0, c): 1}, QA),
        "x": LaurentPoly({(0, 2): 1}, QA),
        "y": LaurentPoly({(-2, 0): -1}, QA),
        "d": LaurentPoly({(-2, 0): 1}, QA),
    }
    return p.substitute(images)


def specialize_jones(p: LaurentPoly, N: int) -> LaurentPoly:
    if N < 2:
        raise ValueError("colour N must be at least 2")
    two = specialize_generic(p, 1)
    return two.map_exponents(lambda e: (e[0] + (N - 1) * e[1],), ("q",))


def mirror(p: LaurentPoly) -> LaurentPoly:
    """q -> q^-1 on a single-variable polynomial."""
    return p.map_exponents(lambda e: (-e[0],), p.names, p.scale)


# ---------------------------------------------------------------------------
# cyclotomic integers


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = num[i + len(den) - 1] // den[-1]
        out[i] = coef
        for j, dj in enumerate(den):
            num[i + j] -= coef * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


class CycloInt:
    """Element of Z[zeta] for zeta a primitive ``order``-th root of unity."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[int]) -> None:
        self.order = order
        self.coeffs = _reduce_cyclo(order, list(coeffs))

    @classmethod
    def zeta_power(cls, order: int, k: int) -> CycloInt:
        k %= order
        return cls(order, [0] * k + [1])

    @classmethod
    def integer(cls, order: int, n: int) -> CycloInt:
        return cls(order, [n])

    def __add__(self, other: CycloInt) -> CycloInt:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return CycloInt(self.order, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> CycloInt:
        return CycloInt(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: CycloInt) -> CycloInt:
        return self + (-other)

    def __mul__(self, other: CycloInt) -> CycloInt:
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return CycloInt(self.order, out)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycloInt(self.order, [other])
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_integer(self) -> int | None:
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0] if self.coeffs else 0
        return None

    def __repr__(self) -> str:
        return f"CycloInt({self.order}, {list(self.coeffs)})"


def _reduce_cyclo(order: int, coeffs: list[int]) -> tuple[int, ...]:
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    coeffs = coeffs[:]
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            # phi is monic: zeta^deg = -(phi[0] + ... + phi[deg-1] zeta^(deg-1))
            for j in range(deg):
                coeffs[i - deg + j] -= c * phi[j]
            coeffs[i] = 0
    coeffs = coeffs[:deg] + [0] * max(0, deg - len(coeffs))
    return tuple(coeffs)


class CyclotomicPoly:
    """Laurent polynomial in A = q^lambda with coefficients in Z[zeta_order]."""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Mapping[int, CycloInt] | None = None) -> None:
        self.order = order
        self.terms = {e: c for e, c in sorted((terms or {}).items()) if not c.is_zero()}

    def __add__(self, other: CyclotomicPoly) -> CyclotomicPoly:
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc[e] + c if e in acc else c
        return CyclotomicPoly(self.order, acc)

    def __neg__(self) -> CyclotomicPoly:
        return CyclotomicPoly(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: CyclotomicPoly) -> CyclotomicPoly:
        return self + (-other)

    def __mul__(self, other: CyclotomicPoly) -> CyclotomicPoly:
        acc: dict[int, CycloInt] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                prod = c1 * c2
                acc[e] = acc[e] + prod if e in acc else prod
        return CyclotomicPoly(self.order, acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclotomicPoly):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def in_x(self) -> LaurentPoly | None:
        """Rewrite in x = A^2 when all exponents are even and coefficients rational."""
        out: dict[int, int] = {}
        for e, c in self.terms.items():
            n = c.as_integer()
            if e % 2 or n is None:
                return None
            out[e // 2] = n
        return single(out, "x")

    def to_json(self) -> dict[str, object]:
        return {
            "order": self.order,
            "terms": [{"A": e, "c": [str(v) for v in c.coeffs]} for e, c in self.terms.items()],
        }

    def __repr__(self) -> str:
        return f"CyclotomicPoly({self.order}, {self.terms})"


def specialize_ado(p: LaurentPoly, N: int) -> CyclotomicPoly:
    """u -> A^(1-N), x -> A^2, y -> -zeta^-2, d -> zeta^-2 with zeta = exp(2 pi i / 2N)."""
    if N < 2:
        raise ValueError("colour N must be at least 2")
    order = 2 * N
    iu, ix, iy, idd = (p.names.index(v) for v in INVARIANT_VARS)
    acc: dict[int, CycloInt] = {}
    for e, c in p.terms.items():
        a_exp = (1 - N) * e[iu] + 2 * e[ix]
        z_exp = -2 * (e[iy] + e[idd])
        sign = -1 if e[iy] % 2 else 1
        val = CycloInt(order, [0] * (z_exp % order) + [sign * c])
        acc[a_exp] = acc[a_exp] + val if a_exp in acc else val
    return CyclotomicPoly(order, acc)


def dumps_poly(p: LaurentPoly) -> str:
    return json.dumps(p.to_json(), sort_keys=True)

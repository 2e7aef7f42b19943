"""Published test vectors for the trefoil and 8_19 closures, as plain data."""
import re
from collections import Counter

from lagrangian_knots.ring import LaurentPoly, single

TREFOIL = "1 1 1"
KNOT_8_19 = "1 1 1 2 1 1 1 2"
FIGURE_EIGHT = "1 -2 1 -2"


def mono(text: str) -> LaurentPoly:
    """Parse a signed monomial such as ``-d^-2x^-5`` or ``yx^-1``."""
    sign = -1 if text.startswith("-") else 1
    exp = dict.fromkeys("uxyd", 0)
    for var, e in re.findall(r"([uxyd])(?:\^(-?\d+))?", text.lstrip("-")):
        exp[var] += int(e) if e else 1
    return LaurentPoly({(exp["u"], exp["x"], exp["y"], exp["d"]): sign})


def poly(text: str) -> LaurentPoly:
    total = LaurentPoly.zero()
    for tok in text.split():
        total = total + mono(tok)
    return total


# u^-4 (-y)^-1 (-x^-3 + x^-2 - x^-1 + 1 - y)
TREFOIL_GAMMA = poly("-u^-4y^-1") * poly("-x^-3 x^-2 -x^-1 1 -y")
TREFOIL_JONES = single({-8: -1, -2: 1, -6: 1}, "q")
TREFOIL_ALEXANDER = single({1: 1, 0: -1, -1: 1}, "x")

# signed per-point gradings eps * P, five points per row
TABLE_8_19 = """
y^2 -y yx^-1 -yx^-3 yx^-4
-yx^-1 x^-1 -x^-2 d^-2x^-4 -d^-2x^-5
yx^-2 -x^-2 x^-3 -d^-2x^-5 d^-2x^-6
-yx^-3 x^-3 -x^-4 d^-2x^-6 -d^-2x^-7
yx^-4 -x^-4 x^-5 -d^-2x^-7 d^-2x^-8
d^-1x^-1 -d^-1x^-2 d^-1x^-4 -d^-1x^-5 d^-1x^-6
-d^-1x^-2 d^-1x^-3 -d^-1x^-5 d^-1x^-6 -d^-1x^-7
"""


def table_8_19() -> Counter:
    """Multiset of signed monomials (exponent, coefficient) of the 35 points."""
    out: Counter = Counter()
    for tok in TABLE_8_19.split():
        ((e, c),) = mono(tok).terms.items()
        out[(e, c)] += 1
    return out


# u^-10 y^-2 times the sum of the table
GAMMA_8_19 = poly("u^-10y^-2") * poly(TABLE_8_19)

# three-variable form after y = -d, as printed; the x^-6 d^-3 coefficient is
# printed as -2 but the four-variable sum above gives +2 (see the ledger)
_RESTRICTED_8_19_PRINTED = {
    (0, 0): 1, (-1, 0): 1, (-2, -1): 1, (-3, -1): 1,
    (-1, -2): -1, (-2, -2): -2, (-3, -2): -2,
    (-1, -3): 2, (-2, -3): 2, (-3, -3): 1,
    (-1, -4): -2, (-2, -4): -2, (-3, -4): 1, (-4, -4): 1,
    (-2, -5): 1, (-3, -5): -2, (-4, -5): -2,
    (-3, -6): -2, (-4, -6): 2,
    (-3, -7): -1, (-4, -7): -2,
    (-4, -8): 1,
}


def restricted_8_19_printed() -> LaurentPoly:
    return LaurentPoly({(-10, x, 0, d): c for (d, x), c in _RESTRICTED_8_19_PRINTED.items()})


JONES_8_19 = single({-6: 1, -10: 1, -16: -1}, "q")
ALEXANDER_8_19 = single({3: 1, 2: -1, 0: 1, -2: -1, -3: 1}, "x")

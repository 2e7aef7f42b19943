"""Braid words: parsing, writhe and the underlying permutation."""
from __future__ import annotations

import re
from dataclasses import dataclass


class BraidParseError(ValueError):
    def __init__(self, token: str, reason: str) -> None:
        super().__init__(f"bad braid token {token!r}: {reason}")
        self.token = token


@dataclass(frozen=True)
class BraidWord:
    """Element of B_n as a word in the standard generators.

    Letter ``i`` is sigma_i and ``-i`` its inverse, with 1 <= i <= strands - 1.
    """

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for g in self.letters:
            if g == 0 or abs(g) >= self.strands:
                raise BraidParseError(str(g), f"generator out of range for B_{self.strands}")

    def writhe(self) -> int:
        return sum(1 if g > 0 else -1 for g in self.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-g for g in reversed(self.letters)))

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.strands != other.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def free_reduction(self) -> BraidWord:
        out: list[int] = []
        for g in self.letters:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
        return BraidWord(self.strands, tuple(out))

    def word(self) -> str:
        return " ".join(str(g) for g in self.letters)

    def __str__(self) -> str:
        return f"B{self.strands}[{self.word()}]"


_TOKEN = re.compile(r"[sS]?(-?\d+)")


def parse_braid(text: str, strands: int) -> BraidWord:
    """Parse whitespace separated signed generator indices (``s`` prefix allowed)."""
    letters = []
    for tok in text.replace(",", " ").split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise BraidParseError(tok, "expected a signed integer")
        g = int(m.group(1))
        if g == 0:
            raise BraidParseError(tok, "generator index 0")
        if abs(g) >= strands:
            raise BraidParseError(tok, f"index >= strand count {strands}")
        letters.append(g)
    return BraidWord(strands, tuple(letters))


def underlying_permutation(b: BraidWord) -> tuple[int, ...]:
    """Permutation of {0..n-1}: position i at the bottom came from perm[i] at the top."""
    perm = list(range(b.strands))
    for g in b.letters:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return tuple(perm)


def cycles(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for s in range(len(perm)):
        if s in seen:
            continue
        cyc = []
        j = s
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(tuple(cyc))
    return out


def closure_components(b: BraidWord) -> int:
    return len(cycles(underlying_permutation(b)))


def writhe(b: BraidWord) -> int:
    return b.writhe()

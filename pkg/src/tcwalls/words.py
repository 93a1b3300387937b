"""Brute-force enumeration of the constrained word classes A, B, C and H.

Letters are the integers ``1..n``.  A word is valid when every prefix is
dominance ordered: for ``i < j``, once letter ``i`` has appeared its
(effective) number of occurrences is at least that of ``j``.

A letter whose effective count has reached two must be dominated by every
smaller letter even if that letter has not appeared yet; for classes A and C
this changes only how early a doomed prefix is rejected.

* ``A``: every letter occurs three times.
* ``C``: letters ``1..k`` occur three times, ``k+1..n`` twice.
* ``B``: some ``k`` letters occur three times, the others twice; the first and
  second occurrence of a twice-letter count as its second and third.
* ``H``: the subset of ``C`` where, at each third occurrence, the letters seen
  so far have all occurred at least twice (``h_all_letters=True`` asks the
  same of all ``n`` letters instead).
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceededError, InvalidInputError

CLASS_TAGS = ("A", "B", "C", "H")

#: Longest word the enumerator accepts unless told otherwise.
DEFAULT_MAX_LENGTH = 24


@dataclass(frozen=True)
class WordClassSpec:
    class_tag: str
    n: int
    k: int | None = None
    h_all_letters: bool = False

    def __post_init__(self):
        if self.class_tag not in CLASS_TAGS:
            raise InvalidInputError(f"unknown word class {self.class_tag!r}")
        if self.n < 1:
            raise InvalidInputError("alphabet size n must be positive")
        if self.class_tag == "A":
            if self.k is None:
                object.__setattr__(self, "k", self.n)
            elif self.k != self.n:
                raise InvalidInputError("class A requires k == n")
        elif self.k is None:
            raise InvalidInputError(f"class {self.class_tag} requires k")
        if not 0 <= self.k <= self.n:
            raise InvalidInputError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def length(self) -> int:
        return 2 * self.n + self.k

    def fixed_multiplicity(self) -> dict[int, int] | None:
        """Letter multiplicities for classes A/C/H; ``None`` for class B."""
        if self.class_tag == "B":
            return None
        return {i: 3 if i <= self.k else 2 for i in range(1, self.n + 1)}


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    multiplicity: dict[int, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        object.__setattr__(self, "multiplicity", dict(sorted(Counter(self.letters).items())))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return render_letters(self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"aabba"`` or a comma/space separated list of integers."""
        text = text.strip()
        if not text:
            return cls(())
        if text.isalpha():
            if not text.islower():
                raise InvalidInputError(f"letters must be lowercase: {text!r}")
            return cls(tuple(ord(ch) - ord("a") + 1 for ch in text))
        try:
            return cls(tuple(int(tok) for tok in text.replace(",", " ").split()))
        except ValueError:
            raise InvalidInputError(f"cannot parse word {text!r}") from None


def render_letters(letters: Sequence[int]) -> str:
    if all(1 <= x <= 26 for x in letters):
        return "".join(string.ascii_lowercase[x - 1] for x in letters)
    return ",".join(str(x) for x in letters)


def _dominance_ok(eff: Sequence[int], seen: Sequence[bool], n: int) -> bool:
    # eff/seen are indexed 1..n.  A letter j with eff[j] >= 2 has reached the
    # middle row, so every smaller letter must already dominate it, seen or not.
    for i in range(1, n):
        ei = eff[i]
        si = seen[i]
        for j in range(i + 1, n + 1):
            ej = eff[j]
            if ej > ei and (si or ej >= 2):
                return False
    return True


def _check_multiplicity(word: Word, spec: WordClassSpec) -> None:
    mult = word.multiplicity
    if any(not 1 <= x <= spec.n for x in mult):
        raise InvalidInputError(f"letters of {word} outside 1..{spec.n}")
    expected = spec.fixed_multiplicity()
    if expected is not None:
        if mult != expected:
            raise InvalidInputError(
                f"multiplicities of {word} do not match class {spec.class_tag}"
                f"(n={spec.n}, k={spec.k})"
            )
        return
    if len(mult) != spec.n or any(m not in (2, 3) for m in mult.values()):
        raise InvalidInputError(f"class B words use every letter two or three times: {word}")
    if sum(1 for m in mult.values() if m == 3) != spec.k:
        raise InvalidInputError(f"{word} does not have exactly k={spec.k} thrice-letters")


class _PrefixState:
    """Incremental prefix bookkeeping shared by is_valid and the enumerator."""

    def __init__(self, spec: WordClassSpec, thrice: Iterable[int]):
        n = spec.n
        self.spec = spec
        self.n = n
        self.thrice = [False] * (n + 1)
        for i in thrice:
            self.thrice[i] = True
        self.count = [0] * (n + 1)
        self.eff = [0] * (n + 1)
        self.seen = [False] * (n + 1)

    def _bonus(self, x: int) -> int:
        # class B: a twice-letter's occurrences are shifted up by one
        return 1 if self.spec.class_tag == "B" and not self.thrice[x] else 0

    def push(self, x: int) -> bool:
        """Append ``x``; return whether the new prefix is still admissible."""
        self.count[x] += 1
        self.seen[x] = True
        self.eff[x] = self.count[x] + self._bonus(x)
        if not _dominance_ok(self.eff, self.seen, self.n):
            return False
        if self.spec.class_tag == "H" and self.count[x] == 3:
            if self.spec.h_all_letters:
                letters = range(1, self.n + 1)
            else:
                letters = (i for i in range(1, self.n + 1) if self.seen[i])
            if any(self.count[i] < 2 for i in letters):
                return False
        return True

    def pop(self, x: int) -> None:
        self.count[x] -= 1
        if self.count[x] == 0:
            self.seen[x] = False
            self.eff[x] = 0
        else:
            self.eff[x] = self.count[x] + self._bonus(x)


def is_valid(word: Word | str, spec: WordClassSpec) -> bool:
    """Decide membership of ``word`` in the class described by ``spec``.

    Raises :class:`InvalidInputError` when the letter multiplicities do not
    fit the class at all; a word with the right multiplicities that breaks the
    prefix condition returns ``False``.
    """
    if isinstance(word, str):
        word = Word.parse(word)
    _check_multiplicity(word, spec)
    thrice = [x for x, m in word.multiplicity.items() if m == 3]
    state = _PrefixState(spec, thrice)
    return all(state.push(x) for x in word.letters)


def _backtrack(spec: WordClassSpec, mult: dict[int, int]) -> Iterator[tuple[int, ...]]:
    n = spec.n
    remaining = [0] + [mult[i] for i in range(1, n + 1)]
    state = _PrefixState(spec, [i for i in mult if mult[i] == 3])
    prefix: list[int] = []
    total = sum(mult.values())

    def rec():
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for x in range(1, n + 1):
            if not remaining[x]:
                continue
            remaining[x] -= 1
            prefix.append(x)
            if state.push(x):
                yield from rec()
            state.pop(x)
            prefix.pop()
            remaining[x] += 1

    yield from rec()


def enumerate_words(spec: WordClassSpec, max_length: int = DEFAULT_MAX_LENGTH) -> list[Word]:
    """All words of the class, in lexicographic order of letter indices."""
    if spec.length > max_length:
        raise BudgetExceededError(
            f"word length {spec.length} exceeds the enumeration budget {max_length}"
        )
    if spec.class_tag == "B":
        found: list[tuple[int, ...]] = []
        for thrice in combinations(range(1, spec.n + 1), spec.k):
            mult = {i: 3 if i in thrice else 2 for i in range(1, spec.n + 1)}
            found.extend(_backtrack(spec, mult))
        found.sort()
    else:
        # backtracking tries letters in increasing order, so output is sorted
        found = list(_backtrack(spec, spec.fixed_multiplicity()))
    return [Word(w) for w in found]


def count_words(spec: WordClassSpec, max_length: int = DEFAULT_MAX_LENGTH) -> int:
    return len(enumerate_words(spec, max_length))

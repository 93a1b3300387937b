"""Three-row Young tableaux with walls and holes.

Rows are numbered bottom to top: ``0`` is the bottom row (boxes separated by
walls, possibly with holes), ``1`` the middle row and ``2`` the top row.
Columns are numbered from 1.  A tableau of type ``(k, l1, l2)`` has ``k`` top
boxes, ``l1 + l2`` middle boxes and ``l2`` bottom boxes; ``y_count`` counts
its standard fillings summed over all placements of the bottom boxes.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator

from .errors import ConsistencyError, InvalidInputError
from .words import Word, WordClassSpec, is_valid

BOTTOM, MIDDLE, TOP = 0, 1, 2


@dataclass(frozen=True)
class TableauShape:
    k: int
    middle_len: int
    bottom_cols: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(sorted(set(self.bottom_cols)))
        if len(cols) != len(self.bottom_cols):
            raise InvalidInputError("bottom columns must be distinct")
        object.__setattr__(self, "bottom_cols", cols)
        if not 0 <= self.k <= self.middle_len:
            raise InvalidInputError(f"top row ({self.k}) longer than middle row ({self.middle_len})")
        if cols and not (cols[0] >= 1 and cols[-1] <= self.middle_len):
            raise InvalidInputError(f"bottom columns {cols} outside 1..{self.middle_len}")

    @property
    def size(self) -> int:
        return self.k + self.middle_len + len(self.bottom_cols)

    @property
    def y_type(self) -> tuple[int, int, int]:
        l2 = len(self.bottom_cols)
        return self.k, self.middle_len - l2, l2

    def boxes(self) -> Iterator[tuple[int, int]]:
        for c in self.bottom_cols:
            yield BOTTOM, c
        for c in range(1, self.middle_len + 1):
            yield MIDDLE, c
        for c in range(1, self.k + 1):
            yield TOP, c

    def column_rows(self, col: int) -> list[int]:
        """Rows present in ``col``, bottom to top."""
        rows = [BOTTOM] if col in self.bottom_cols else []
        rows.append(MIDDLE)
        if col <= self.k:
            rows.append(TOP)
        return rows

    @classmethod
    def for_class(cls, spec: WordClassSpec, thrice: tuple[int, ...] = ()) -> "TableauShape":
        """Shape of A*_n, C*_{n,k} or B*_{n,k} (the latter needs its bottom columns)."""
        n = spec.n
        if spec.class_tag in ("A", "C", "H"):
            return cls(spec.k, n, tuple(range(1, n + 1)))
        return cls(n, n, thrice)


@dataclass(frozen=True)
class Tableau:
    shape: TableauShape
    entries: dict[tuple[int, int], int] = field(hash=False)

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        shape = self.shape
        boxes = set(shape.boxes())
        if set(self.entries) != boxes:
            raise InvalidInputError("entries do not cover exactly the boxes of the shape")
        if sorted(self.entries.values()) != list(range(1, shape.size + 1)):
            raise InvalidInputError("entries are not a permutation of 1..N")
        e = self.entries
        for row, length in ((MIDDLE, shape.middle_len), (TOP, shape.k)):
            for c in range(1, length):
                if e[row, c] >= e[row, c + 1]:
                    raise InvalidInputError(f"row {row} not increasing at column {c}")
        for c in range(1, shape.middle_len + 1):
            col = [e[r, c] for r in shape.column_rows(c)]
            if any(a >= b for a, b in zip(col, col[1:])):
                raise InvalidInputError(f"column {c} not increasing")

    def column(self, col: int) -> list[int]:
        return [self.entries[r, col] for r in self.shape.column_rows(col)]

    def to_json(self) -> dict:
        """Rows bottom to top, ``None`` for holes; walls are implicit."""
        width = self.shape.middle_len
        rows = [[self.entries.get((r, c)) for c in range(1, width + 1)] for r in (BOTTOM, MIDDLE, TOP)]
        return {"rows": rows}

    @classmethod
    def from_json(cls, data: dict) -> "Tableau":
        try:
            bottom, middle, top = data["rows"]
        except (KeyError, TypeError, ValueError):
            raise InvalidInputError("tableau JSON needs three rows") from None
        if any(v is None for v in middle):
            raise InvalidInputError("middle row cannot have holes")
        k = sum(1 for v in top if v is not None)
        if any(v is not None for v in top[k:]):
            raise InvalidInputError("top row must be left-justified")
        bottom_cols = tuple(c for c, v in enumerate(bottom, 1) if v is not None)
        shape = TableauShape(k, len(middle), bottom_cols)
        entries = {}
        for r, row in ((BOTTOM, bottom), (MIDDLE, middle), (TOP, top)):
            for c, v in enumerate(row, 1):
                if v is not None:
                    entries[r, c] = int(v)
        return cls(shape, entries)


def word_to_tableau(word: Word | str, spec: WordClassSpec) -> Tableau:
    """Place ``m`` in the next free box of column ``j`` when the m-th letter is ``j``.

    Columns fill bottom to top; for class B a twice-letter starts in the
    middle row.
    """
    if isinstance(word, str):
        word = Word.parse(word)
    if not is_valid(word, spec):
        raise InvalidInputError(f"{word} is not in class {spec.class_tag}(n={spec.n}, k={spec.k})")
    thrice = tuple(x for x, m in word.multiplicity.items() if m == 3)
    shape = TableauShape.for_class(spec, thrice)
    next_row = {c: shape.column_rows(c) for c in range(1, spec.n + 1)}
    entries = {}
    for m, j in enumerate(word.letters, 1):
        entries[next_row[j].pop(0), j] = m
    return Tableau(shape, entries)


def tableau_to_word(t: Tableau, spec: WordClassSpec) -> Word:
    """Read the entries in increasing order and record their columns."""
    shape = t.shape
    n = spec.n
    if shape.middle_len != n:
        raise InvalidInputError(f"tableau width {shape.middle_len} != n={n}")
    if spec.class_tag == "B":
        if shape.k != n or len(shape.bottom_cols) != spec.k:
            raise InvalidInputError("not a B* shape")
    elif shape.k != spec.k or shape.bottom_cols != tuple(range(1, n + 1)):
        raise InvalidInputError(f"not a {spec.class_tag}* shape")
    t.check()
    by_value = sorted((v, c) for (_, c), v in t.entries.items())
    word = Word(tuple(c for _, c in by_value))
    if not is_valid(word, spec):
        raise ConsistencyError(f"valid tableau read back to invalid word {word}")
    return word


def in_cone(k: int, l1: int, l2: int) -> bool:
    return k >= 0 and l1 >= 0 and l2 >= 0 and l1 + l2 >= k


class YTable:
    """Memoised values of y_{k,l1,l2}; grows to cover every requested box.

    Fills are serialised by a lock; reads of already filled cells are safe
    from any thread.
    """

    def __init__(self):
        self.values: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
        self._box = (0, 0, 0)
        self._lock = threading.Lock()

    def _fill(self, K: int, L1: int, L2: int) -> None:
        v = self.values
        for k in range(K + 1):
            for l1 in range(L1 + 1):
                for l2 in range(max(0, k - l1), L2 + 1):
                    key = (k, l1, l2)
                    if key in v or key == (0, 0, 0):
                        continue
                    total = 0
                    if k and l1 + l2 >= k - 1:
                        total += v.get((k - 1, l1, l2), 0)
                    if l1 and l1 - 1 + l2 >= k:
                        total += v.get((k, l1 - 1, l2), 0)
                    if l2 and l1 + l2 - 1 >= k:
                        total += (2 * l2 + l1 + k - 1) * v.get((k, l1, l2 - 1), 0)
                    v[key] = total

    def __call__(self, k: int, l1: int, l2: int) -> int:
        if not in_cone(k, l1, l2):
            return 0
        K, L1, L2 = self._box
        if k > K or l1 > L1 or l2 > L2:
            with self._lock:
                K, L1, L2 = self._box
                box = (max(k, K), max(l1, L1), max(l2, L2))
                self._fill(*box)
                self._box = box
        return self.values[k, l1, l2]


_TABLE = YTable()


def y_count(k: int, l1: int, l2: int) -> int:
    """Number of tableaux with walls and holes of type ``(k, l1, l2)``."""
    if min(k, l1, l2) < 0:
        raise InvalidInputError("arguments must be nonnegative")
    return _TABLE(k, l1, l2)


def d_count(n: int, k: int, ell: int) -> int:
    """|D*_{n,k,ell}|: width n, k top boxes, ell bottom boxes."""
    return y_count(k, n - ell, ell)


def y_slabs(n_max: int) -> Iterator[tuple[int, dict[tuple[int, int], int]]]:
    """Yield ``(s, slab)`` for s = k + l1 + l2 = 0 .. 2 n_max.

    ``slab[k, l1]`` holds y_{k,l1,s-k-l1} for every cone cell with
    ``k <= n_max`` and ``l1 + l2 <= n_max``; only two slabs are alive at once.
    """
    prev: dict[tuple[int, int], int] = {}
    for s in range(2 * n_max + 1):
        cur: dict[tuple[int, int], int] = {}
        for k in range(min(s, n_max) + 1):
            # middle length m = l1 + l2 = s - k must satisfy k <= m <= n_max
            m = s - k
            if m < k or m > n_max:
                continue
            for l1 in range(m + 1):
                l2 = m - l1
                if s == 0:
                    cur[0, 0] = 1
                    continue
                total = prev.get((k - 1, l1), 0) if k else 0
                if l1:
                    total += prev.get((k, l1 - 1), 0)
                if l2:
                    total += (2 * l2 + l1 + k - 1) * prev.get((k, l1), 0)
                cur[k, l1] = total
        yield s, cur
        prev = cur


@dataclass
class IdentityReport:
    n_max: int
    passed: bool
    checked: int
    counterexample: tuple[int, int, int, Fraction] | None = None
    seconds: float = 0.0

    def to_json(self) -> dict:
        cx = None
        if self.counterexample:
            n, k, lhs, rhs = self.counterexample
            cx = {"n": n, "k": k, "lhs": str(lhs), "rhs": str(rhs)}
        return {
            "mode": "tableaux",
            "n_max": self.n_max,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": cx,
            "seconds": round(self.seconds, 3),
        }


def verify_tableau_identity(n_max: int) -> IdentityReport:
    """Check y_{n,n-k,k} = 2^{n-k}/(n-k+1)! * y_{k,0,n} for 0 <= k <= n <= n_max."""
    if n_max < 0:
        raise InvalidInputError("n_max must be nonnegative")
    start = time.perf_counter()
    c_vals: dict[tuple[int, int], int] = {}
    checked = 0
    for s, slab in y_slabs(n_max):
        # y_{k,0,n} lives in slab s = k + n
        for k in range(s // 2 + 1):
            n = s - k
            if n <= n_max and (k, 0) in slab:
                c_vals[n, k] = slab[k, 0]
        if s % 2:
            continue
        n = s // 2
        for k in range(n + 1):
            lhs = slab[n, n - k]
            rhs = Fraction(2 ** (n - k), factorial(n - k + 1)) * c_vals[n, k]
            checked += 1
            if lhs != rhs:
                return IdentityReport(n_max, False, checked, (n, k, Fraction(lhs), rhs),
                                      time.perf_counter() - start)
        # c-values for this n are no longer needed
        for k in range(n + 1):
            c_vals.pop((n, k), None)
    return IdentityReport(n_max, True, checked, None, time.perf_counter() - start)


def tc_count(n: int, k: int) -> int:
    """Tree-child networks with n leaves and k reticulations, by two routes.

    ``n!/(n-k)! * c_{n-1,k}`` and ``n!/2^{n-k-1} * b_{n-1,k}`` must agree.
    """
    if not n > k >= 0:
        raise InvalidInputError(f"need n > k >= 0, got n={n}, k={k}")
    via_c = Fraction(factorial(n), factorial(n - k)) * y_count(k, 0, n - 1)
    via_b = Fraction(factorial(n), 2 ** (n - k - 1)) * y_count(n - 1, n - 1 - k, k)
    if via_c != via_b:
        raise ConsistencyError(f"TC_{{{n},{k}}}: c-route {via_c} != b-route {via_b}")
    if via_c.denominator != 1:
        raise ConsistencyError(f"TC_{{{n},{k}}} = {via_c} is not an integer")
    return via_c.numerator

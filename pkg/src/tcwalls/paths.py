"""Weighted lattice paths in the wedge ``0 <= i <= j``.

Steps are ``I = (1, 0)``, ``J1 = (0, 1)`` and ``J2 = (0, 1)``.  ``I`` and
``J1`` weigh 1; the r-th ``J2`` step, ending at ``(i, j)``, weighs
``i + j + r - 1``.  A path's weight is the product of its step weights.

* b_{n,k}: paths (0,0) -> (n,n) with exactly k ``J2`` steps.
* c_{n,k}: paths (0,0) -> (k,n) without ``J1`` (so r = j for every ``J2``).

The bicolored Dyck view rotates ``I, J1, J2`` into ``D, U1, U2``; the r-th
``U2`` taken as step number m weighs ``m + r - 1``.
"""

from __future__ import annotations

from enum import Enum
from math import prod
from typing import Iterable, Sequence

from .errors import InvalidInputError


class StepKind(Enum):
    I = "I"
    J1 = "J1"
    J2 = "J2"
    U1 = "U1"
    U2 = "U2"
    D = "D"


def _check(n: int, k: int) -> None:
    if n < 0 or not 0 <= k <= n:
        raise InvalidInputError(f"need 0 <= k <= n, got n={n}, k={k}")


def b_path_table(max_n: int, max_k: int) -> dict[tuple[int, int], int]:
    """b_{n,k} for all n <= max_n, k <= min(n, max_k) from a single sweep.

    States ``(i, j, r)`` are swept by antidiagonal ``i + j``; the number of
    ``J1`` steps is ``j - r``, so ending at ``(n, n)`` with r = k gives b_{n,k}.
    """
    table: dict[tuple[int, int], int] = {}
    # front[(i, r)] for the current antidiagonal s = i + j
    front: dict[tuple[int, int], int] = {(0, 0): 1}
    for s in range(2 * max_n + 1):
        if s % 2 == 0:
            n = s // 2
            for r in range(min(n, max_k) + 1):
                table[n, r] = front.get((n, r), 0)
        if s == 2 * max_n:
            break
        nxt: dict[tuple[int, int], int] = {}
        for (i, r), val in front.items():
            if not val:
                continue
            j = s - i
            if i + 1 <= j:  # I
                nxt[i + 1, r] = nxt.get((i + 1, r), 0) + val
            if j + 1 <= max_n:
                nxt[i, r] = nxt.get((i, r), 0) + val  # J1
                if r < max_k:  # J2, the (r+1)-th, ending at (i, j+1)
                    w = i + (j + 1) + (r + 1) - 1
                    nxt[i, r + 1] = nxt.get((i, r + 1), 0) + w * val
        front = nxt
    return table


def b_path_count(n: int, k: int) -> int:
    _check(n, k)
    return b_path_table(n, k)[n, k]


def c_path_table(max_n: int) -> list[list[int]]:
    """``c[n][k]`` for 0 <= k <= n <= max_n, via I/J2 paths to (k, n)."""
    # grid[j][i] = weighted paths to (i, j); a J2 into (i, j) weighs i + 2j - 1
    grid = [[0] * (max_n + 1) for _ in range(max_n + 1)]
    grid[0][0] = 1
    for j in range(max_n + 1):
        row = grid[j]
        below = grid[j - 1] if j else None
        for i in range(j + 1):
            if i == 0 and j == 0:
                continue
            val = row[i - 1] if i else 0
            if below is not None and i <= j - 1:
                val += (i + 2 * j - 1) * below[i]
            row[i] = val
    return [grid[n][: n + 1] for n in range(max_n + 1)]


def c_path_count(n: int, k: int) -> int:
    _check(n, k)
    return c_path_table(n)[n][k]


def dyck_b_count(n: int, k: int) -> int:
    """b_{n,k} from bicolored Dyck paths of length 2n with k ``U2`` steps."""
    _check(n, k)
    # state: (height, number of U2 so far) after m steps
    front = {(0, 0): 1}
    length = 2 * n
    for m in range(1, length + 1):
        nxt: dict[tuple[int, int], int] = {}
        for (h, r), val in front.items():
            if h + 1 <= length - m:  # must still be able to come back down
                nxt[h + 1, r] = nxt.get((h + 1, r), 0) + val  # U1
                if r < k:
                    nxt[h + 1, r + 1] = nxt.get((h + 1, r + 1), 0) + (m + r) * val  # U2
            if h:
                nxt[h - 1, r] = nxt.get((h - 1, r), 0) + val  # D
        front = nxt
    return front.get((0, k), 0)


def dyck_c_count(n: int, k: int) -> int:
    """c_{n,k} from meanders with n ``U2`` and k ``D`` steps (no ``U1``)."""
    _check(n, k)
    front = {(0, 0): 1}  # (ups, downs) -> weight
    for m in range(1, n + k + 1):
        nxt: dict[tuple[int, int], int] = {}
        for (u, d), val in front.items():
            if u < n:
                nxt[u + 1, d] = nxt.get((u + 1, d), 0) + (m + u) * val
            if d < min(u, k):
                nxt[u, d + 1] = nxt.get((u, d + 1), 0) + val
        front = nxt
    return front.get((n, k), 0)


def j2_weights(steps: Iterable[str | StepKind]) -> list[int]:
    """Weights of the ``J2`` steps along a 2D path, checking it stays in i <= j."""
    i = j = r = 0
    weights = []
    for step in steps:
        step = StepKind(step) if isinstance(step, str) else step
        if step is StepKind.I:
            i += 1
        elif step in (StepKind.J1, StepKind.J2):
            j += 1
            if step is StepKind.J2:
                r += 1
                weights.append(i + j + r - 1)
        else:
            raise InvalidInputError(f"{step} is not a 2D step")
        if i > j:
            raise InvalidInputError("path leaves the region i <= j")
    return weights


def path_weight(steps: Sequence[str | StepKind]) -> int:
    return prod(j2_weights(steps))


#: A path reproducing the figure example: J2 weights 2, 5, 9 and total 90.
FIGURE_PATH = ("J1", "J2", "I", "J2", "I", "J1", "J2", "I", "I", "I")


def figure_weight_check() -> bool:
    return j2_weights(FIGURE_PATH) == [2, 5, 9] and path_weight(FIGURE_PATH) == 90

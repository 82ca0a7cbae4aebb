"""Exact small-scale ground truth: maximum multiplicative Sidon subsets of
[n] by exhaustive backtracking, plus a greedy baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded

MAX_EXACT_N = 40  # conflict-pruned search stays tractable up to here


@dataclass(frozen=True)
class GnResult:
    """The maximum Sidon-subset size of [n] with a witness of that size."""

    n: int
    g: int
    witness: tuple[int, ...]


@lru_cache(maxsize=None)
def max_sidon_subset(n: int) -> GnResult:
    """Exact maximum multiplicative Sidon subset of {1, ..., n}.

    Depth-first over elements in ascending order, include-branch first. The
    recursion carries the list of still-addable candidates, so the bound
    |chosen| + |candidates| prunes sharply; the greedy set seeds the best
    size. In this visit order the first subset attaining the final maximum
    is the lexicographically least maximum witness, so branches that can at
    most tie are cut without losing the canonical witness.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_EXACT_N:
        raise CapExceeded(f"exact search is capped at n={MAX_EXACT_N}")
    best_size = len(greedy_sidon(n)) - 1  # a set one larger will be found
    best_wit: tuple[int, ...] = ()
    chosen: list[int] = []
    products: set[int] = set()

    def explore(cands: list[int]) -> None:
        nonlocal best_size, best_wit
        if len(chosen) + len(cands) <= best_size:
            return
        if not cands:
            best_size = len(chosen)
            best_wit = tuple(chosen)
            return
        x = cands[0]
        rest = cands[1:]
        # include x: every candidate is individually addable, so no conflict
        # check is needed here, only refiltering of the remaining pool
        new = [x * y for y in chosen]
        new.append(x * x)
        products.update(new)
        chosen.append(x)
        explore([y for y in rest if _addable(y, chosen, products)])
        chosen.pop()
        products.difference_update(new)
        explore(rest)

    explore([x for x in range(1, n + 1) if _addable(x, chosen, products)])
    return GnResult(n=n, g=best_size, witness=best_wit)


def _addable(x: int, chosen: list[int], products: set[int]) -> bool:
    if x * x in products:
        return False
    return all(x * y not in products for y in chosen)


def greedy_sidon(n: int) -> list[int]:
    """Ascending scan of [n], keeping an element iff the set stays Sidon."""
    if n < 1:
        raise ValueError("n must be positive")
    kept: list[int] = []
    products: set[int] = set()
    for x in range(1, n + 1):
        new = [x * y for y in kept]
        new.append(x * x)
        if not any(p in products for p in new):
            products.update(new)
            kept.append(x)
    return kept

"""Quad families over a prime field, embedded into an arbitrary ground set.

For an odd prime p and a residue alpha, the tuple set

    {(a, b, c, d) in F_p^4 : every 3-coordinate sum != 0,
                             ab+ac+ad+bc+bd+cd = alpha}

is closed under coordinate permutations, and any three coordinates determine
the fourth (d = (alpha - (ab+ac+bc)) / (a+b+c)). Deduplicating by multiset
and mapping the four coordinates into four disjoint blocks of a ground set S
of size s yields a family of 4-subsets in which distinct members share at
most 2 elements, no four pairwise disjoint 2-subsets have all four cyclic
unions in the family, and the family has at least s^3/24576 members.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import GroundSetTooSmall, PreconditionTooSmall
from .primes import sieve

MIN_GROUND_SET = 56
SIZE_DENOMINATOR = 24576

Quad = tuple[int, int, int, int]


@dataclass(frozen=True)
class FieldTuple:
    """One representative tuple (a, b, c, d) over F_p with its target residue."""

    p: int
    a: int
    b: int
    c: int
    d: int

    def validate(self, alpha: int) -> None:
        p = self.p
        vals = (self.a, self.b, self.c, self.d)
        if any(not 0 <= v < p for v in vals):
            raise ValueError("coordinates must be reduced mod p")
        total = sum(vals)
        if any((total - v) % p == 0 for v in vals):
            raise ValueError("a 3-coordinate sum vanishes mod p")
        if e2(*vals, p) != alpha % p:
            raise ValueError("pairwise-product sum is not alpha")


@dataclass
class QuadFamily:
    """A 4-subset family over a sorted ground set, with its F_p provenance.

    `tuples` holds one nondecreasing representative per multiset class;
    `quads` holds the embedded 4-subsets, one row per tuple, strictly
    increasing within each row.
    """

    ground_set: list[int]
    p: int
    alpha: int
    tuples: np.ndarray
    quads: np.ndarray

    @property
    def s(self) -> int:
        return len(self.ground_set)

    def __len__(self) -> int:
        return len(self.quads)

    def field_tuples(self) -> Iterator[FieldTuple]:
        for a, b, c, d in self.tuples:
            yield FieldTuple(self.p, int(a), int(b), int(c), int(d))

    def to_json_dict(self) -> dict:
        return {
            "s": self.s,
            "p": self.p,
            "alpha": self.alpha,
            "tuples": self.tuples.tolist(),
            "ground_set": list(self.ground_set),
            "quads": self.quads.tolist(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "QuadFamily":
        fam = cls(
            ground_set=[int(v) for v in d["ground_set"]],
            p=int(d["p"]),
            alpha=int(d["alpha"]),
            tuples=np.array(d["tuples"], dtype=np.int64).reshape(-1, 4),
            quads=np.array(d["quads"], dtype=np.int64).reshape(-1, 4),
        )
        if fam.s != int(d["s"]):
            raise ValueError("inconsistent ground-set size")
        return fam


def find_modulus(s: int) -> int:
    """The largest prime p with s/8 < p <= s/4 (exists for every s >= 56).

    Taking the largest admissible prime maximizes the p^3/48 guarantee on the
    family size. The interval bounds are compared exactly: 8p > s, 4p <= s.
    """
    if s < MIN_GROUND_SET:
        raise PreconditionTooSmall(f"ground set must have at least {MIN_GROUND_SET} elements, got {s}")
    candidates = sieve(s // 4)
    candidates = candidates[8 * candidates > s]
    if candidates.size == 0:  # cannot happen for s >= 56 (Bertrand)
        raise PreconditionTooSmall(f"no prime in (s/8, s/4] for s={s}")
    p = int(candidates[-1])
    assert p >= 11
    return p


def e2(a: int, b: int, c: int, d: int, p: int) -> int:
    """Second elementary symmetric polynomial of (a, b, c, d), mod p."""
    return (a * b + a * c + a * d + b * c + b * d + c * d) % p


def alpha_histogram(p: int) -> np.ndarray:
    """For each alpha in [0, p): how many (a,b,c,d) in F_p^4 have all four
    3-coordinate sums nonzero and pairwise-product sum alpha.

    Runs in O(p^3): for each (a, b, c) with t = a+b+c != 0, the map
    d -> e + d*t (e = ab+ac+bc) is an affine bijection of F_p, so the triple
    contributes one tuple to every alpha except the images of the at most
    three d values that would zero a remaining 3-coordinate sum. Coincident
    invalid d values (repeated coordinates) are subtracted once only.
    """
    if p < 3 or not _is_odd_prime(p):
        raise ValueError("p must be an odd prime")
    hist = np.full(p, np.int64(p) ** 3 - np.int64(p) ** 2, dtype=np.int64)
    b = np.arange(p, dtype=np.int64)[:, None]
    c = np.arange(p, dtype=np.int64)[None, :]
    bc = b * c % p
    bpc = b + c
    d3 = (-bpc) % p  # would zero b+c+d
    for a in range(p):
        t = (a + bpc) % p
        valid = t != 0
        e = (a * bpc + bc) % p  # ab+ac+bc
        d1 = (-(a + b)) % p  # would zero a+b+d
        d2 = (-(a + c)) % p  # would zero a+c+d
        hist -= np.bincount(((e + d1 * t) % p)[valid], minlength=p)
        m = valid & (d2 != d1)
        hist -= np.bincount(((e + d2 * t) % p)[m], minlength=p)
        m = valid & (d3 != d1) & (d3 != d2)
        hist -= np.bincount(((e + d3 * t) % p)[m], minlength=p)
    return hist


def select_alpha(histogram: np.ndarray) -> int:
    """The residue with the largest tuple count; ties go to the smallest.

    The pigeonhole guarantee histogram[alpha] >= p^3 - 4p^2 always holds
    (the histogram total is (p-1)^4); a failure here is an internal bug.
    """
    p = len(histogram)
    alpha = int(np.argmax(histogram))
    if int(histogram[alpha]) < p**3 - 4 * p**2:
        raise AssertionError("histogram maximum below the pigeonhole guarantee")
    return alpha


def build_tuples(p: int, alpha: int) -> np.ndarray:
    """One nondecreasing representative (x1 <= x2 <= x3 <= x4) per multiset class.

    The constraint set is symmetric under coordinate permutations, so the
    lexicographically least member of each class is its sorted tuple, and
    enumerating x1 <= x2 <= x3 with the derived fourth coordinate visits each
    class exactly once. Output rows are in lexicographic order.
    """
    inv = np.zeros(p, dtype=np.int64)
    for i in range(1, p):
        inv[i] = pow(i, p - 2, p)
    x2 = np.arange(p, dtype=np.int64)[:, None]
    x3 = np.arange(p, dtype=np.int64)[None, :]
    upper = x2 <= x3
    x23 = x2 * x3 % p
    x2p3 = x2 + x3
    parts = []
    for x1 in range(p):
        t = (x1 + x2p3) % p
        m = upper & (x2 >= x1) & (t != 0)
        e = (x1 * x2p3 + x23) % p
        x4 = (alpha - e) % p * inv[t] % p
        m &= x4 >= x3
        m &= (x1 + x2 + x4) % p != 0
        m &= (x1 + x3 + x4) % p != 0
        m &= (x2 + x3 + x4) % p != 0
        i2, i3 = np.nonzero(m)
        if i2.size:
            rows = np.empty((i2.size, 4), dtype=np.int64)
            rows[:, 0] = x1
            rows[:, 1] = i2
            rows[:, 2] = i3
            rows[:, 3] = x4[i2, i3]
            parts.append(rows)
    tuples = np.concatenate(parts) if parts else np.empty((0, 4), dtype=np.int64)
    if 48 * len(tuples) < p**3:
        raise AssertionError("tuple count below the p^3/48 guarantee")
    return tuples


def embed(tuples: np.ndarray, ground_set, *, p: int, alpha: int) -> QuadFamily:
    """Map tuples into a ground set S: copy j of F_p sits at S[(j-1)p : jp).

    The assignment is positional by residue within each consecutive block of
    the ascending ground set; elements beyond position 4p stay unused.
    """
    members = sorted(int(v) for v in ground_set)
    if len(set(members)) != len(members):
        raise ValueError("ground set must have distinct elements")
    if len(members) < 4 * p:
        raise GroundSetTooSmall(f"need at least {4 * p} elements, got {len(members)}")
    s_arr = np.array(members, dtype=np.int64)
    quads = np.empty_like(tuples)
    for j in range(4):
        quads[:, j] = s_arr[j * p + tuples[:, j]]
    return QuadFamily(ground_set=members, p=p, alpha=alpha, tuples=tuples, quads=quads)


def build_family(ground_set) -> QuadFamily:
    """Full pipeline: modulus, residue selection, tuple enumeration, embedding."""
    members = sorted(int(v) for v in ground_set)
    p = find_modulus(len(members))
    hist = alpha_histogram(p)
    alpha = select_alpha(hist)
    tuples = build_tuples(p, alpha)
    if 24 * len(tuples) < int(hist[alpha]):
        raise AssertionError("deduplication kept fewer than one tuple in 24")
    return embed(tuples, members, p=p, alpha=alpha)


def verify_intersection_bound(family: QuadFamily):
    """True iff distinct quads meet in at most 2 elements.

    Two 4-sets meet in 3+ elements iff they share a 3-subset, so hashing the
    four 3-subsets of every quad finds any violation in linear time. Returns
    a violating pair of quads otherwise.
    """
    seen: dict[tuple, int] = {}
    quads = family.quads
    for idx in range(len(quads)):
        q = tuple(int(v) for v in quads[idx])
        for drop in range(4):
            key = q[:drop] + q[drop + 1 :]
            other = seen.get(key)
            if other is not None:
                other_q = tuple(int(v) for v in quads[other])
                if other_q != q:
                    return (other_q, q)
            else:
                seen[key] = idx
    return True


def _disjoint(x: tuple, y: tuple) -> bool:
    return x[0] != y[0] and x[0] != y[1] and x[1] != y[0] and x[1] != y[1]


def verify_rectangle_free(family: QuadFamily):
    """True iff no four pairwise disjoint 2-subsets K, L, M, N have all of
    K|L, L|M, M|N, N|K in the family.

    Builds the split graph (vertices: 2-subsets inside quads; edges: the three
    balanced splits of each quad) and looks for a 4-cycle whose opposite
    vertices are also disjoint, via common-neighbor counting. Returns the
    normalized (K, L, M, N) on violation, with K the least set of the cycle
    and L its least neighbor.
    """
    edges = set()
    for row in family.quads:
        a, b, c, d = (int(v) for v in row)
        edges.add(((a, b), (c, d)))
        edges.add(((a, c), (b, d)))
        edges.add(((a, d), (b, c)))
    nbrs: dict[tuple, list] = {}
    for k, l in edges:
        nbrs.setdefault(k, []).append(l)
        nbrs.setdefault(l, []).append(k)
    common: dict[tuple, list] = {}
    for v in sorted(nbrs):
        ns = sorted(nbrs[v])
        for i in range(len(ns)):
            for j in range(i + 1, len(ns)):
                x, y = ns[i], ns[j]
                if not _disjoint(x, y):
                    continue
                bucket = common.setdefault((x, y), [])
                for w in bucket:
                    if _disjoint(w, v):
                        return _normalize_rectangle(x, w, y, v)
                bucket.append(v)
    return True


def _normalize_rectangle(k, l, m, n) -> tuple:
    # Cycle k - l - m - n - k; rotate/reflect so the least set leads and its
    # smaller neighbor comes second.
    cycle = (k, l, m, n)
    start = min(range(4), key=lambda i: cycle[i])
    left, right = cycle[(start + 1) % 4], cycle[(start - 1) % 4]
    if left <= right:
        return (cycle[start], left, cycle[(start + 2) % 4], right)
    return (cycle[start], right, cycle[(start + 2) % 4], left)


def verify_size_bound(family: QuadFamily) -> bool:
    """True iff the family has at least s^3/24576 quads (exact arithmetic)."""
    return SIZE_DENOMINATOR * len(family) >= family.s**3


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True

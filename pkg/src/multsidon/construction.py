"""Assembly of the infinite multiplicative Sidon set and its density certificate.

The set is the union of all primes with, for every k >= 11, the products of
the four primes of each quad of the family built over the dyadic prime block
(2^(k-1), 2^k). Level-k products live in (2^(4k-4), 2^(4k)), so levels are
pairwise disjoint and disjoint from the primes; the composite count up to n
therefore equals the full count minus pi(n), which keeps the density check
exact without ever evaluating pi at large n.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

from .errors import BoundViolation, PreconditionTooSmall
from .family import QuadFamily, build_family, verify_size_bound
from .primes import prime_block, sieve

K_MIN = 11
MIN_PROFILE_N = 1 << 44
DENSITY_DENOMINATOR = 196608
DEFAULT_PRECISION_DIGITS = 30


@dataclass(frozen=True)
class SidonLevel:
    """Level k: the quad family over the k-th prime block and its products."""

    k: int
    family: QuadFamily
    elements: tuple[int, ...]  # ascending, each a product of 4 block primes

    def __len__(self) -> int:
        return len(self.elements)

    def to_json_dict(self) -> dict:
        d = {"k": self.k}
        d.update(self.family.to_json_dict())
        d["elements"] = list(self.elements)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "SidonLevel":
        return cls(
            k=int(d["k"]),
            family=QuadFamily.from_json_dict(d),
            elements=tuple(int(v) for v in d["elements"]),
        )


@dataclass(frozen=True)
class SidonSequence:
    """The materialized composite part of the set, levels k_min..k_max.

    The prime component is implicit: it is never materialized beyond sieve
    capacity and never collides with any level (levels are squarefree
    products of four primes).
    """

    k_max: int
    levels: tuple[SidonLevel, ...]
    k_min: int = K_MIN

    def to_json_dict(self) -> dict:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "levels": [lvl.to_json_dict() for lvl in self.levels],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SidonSequence":
        levels = tuple(SidonLevel.from_json_dict(x) for x in d["levels"])
        return cls(k_max=int(d["k_max"]), levels=levels, k_min=int(d["k_min"]))


@dataclass(frozen=True)
class DensityRow:
    """One certified point of the density bound."""

    n: int
    composite_count: int
    target: Decimal  # n^(3/4) / (196608 (ln n)^3)
    ratio: Decimal

    def csv(self) -> str:
        return f"{self.n},{self.composite_count},{float(self.target):.12g},{float(self.ratio):.12g}"


@lru_cache(maxsize=None)
def build_level(k: int, capacity: int | None = None) -> SidonLevel:
    """Build level k: family over the prime block, then exact 4-prime products.

    Products are computed in arbitrary-precision integers; distinct quads are
    distinct prime multisets, so products are pairwise distinct.
    """
    if k < K_MIN:
        raise PreconditionTooSmall(f"levels start at k={K_MIN}, got {k}")
    block = prime_block(k, capacity)
    fam = build_family(block.primes)
    elements = sorted(int(a) * int(b) * int(c) * int(d) for a, b, c, d in fam.quads)
    lo, hi = 1 << (4 * k - 4), 1 << (4 * k)
    if not (lo < elements[0] and elements[-1] < hi):
        raise AssertionError("level product outside its dyadic range")
    if len(set(elements)) != len(elements):
        raise AssertionError("level products are not pairwise distinct")
    if not verify_size_bound(fam):
        raise AssertionError("family size below s^3/24576")
    return SidonLevel(k=k, family=fam, elements=tuple(elements))


def level_bounds(n: int) -> int:
    """Largest level index whose products can reach n: floor(log2(n) / 4)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n.bit_length() - 1) // 4


def build_sequence(n: int, capacity: int | None = None, k_cap: int = 16) -> SidonSequence:
    """All levels k_min .. floor(log2(n)/4); their elements <= n are exactly
    the composite members of the set up to n.

    Any element of the top level beyond n (possible only for non-power n) is
    retained; counting operations compare against n exactly.
    """
    if n < MIN_PROFILE_N:
        raise PreconditionTooSmall(f"n must be at least 2^44, got {n}")
    k_hi = level_bounds(n)
    if k_hi > k_cap:
        raise PreconditionTooSmall(f"n requires level {k_hi}, beyond the configured cap {k_cap}")
    levels = tuple(build_level(k, capacity) for k in range(K_MIN, k_hi + 1))
    return SidonSequence(k_max=k_hi, levels=levels)


def composite_count(n: int, capacity: int | None = None, k_cap: int = 16) -> int:
    """Exact number of level elements <= n across all levels."""
    seq = build_sequence(n, capacity, k_cap)
    total = 0
    for lvl in seq.levels:
        if lvl.elements[-1] <= n:
            total += len(lvl.elements)
        else:
            total += bisect.bisect_right(lvl.elements, n)
    return total


def density_target(n: int, precision_digits: int = DEFAULT_PRECISION_DIGITS) -> Decimal:
    """n^(3/4) / (196608 (ln n)^3) to at least the requested significant digits.

    n^(3/4) is evaluated as sqrt(sqrt(n^3)) with the cube exact, so every
    step is correctly rounded at the working precision.
    """
    with localcontext() as ctx:
        ctx.prec = precision_digits + 10
        n34 = Decimal(n**3).sqrt().sqrt()
        ln = Decimal(n).ln()
        return n34 / (DENSITY_DENOMINATOR * ln**3)


def density_profile(
    n_values,
    capacity: int | None = None,
    k_cap: int = 16,
    precision_digits: int = DEFAULT_PRECISION_DIGITS,
) -> list[DensityRow]:
    """Certify composite_count(n) >= n^(3/4) / (196608 (ln n)^3) at each n.

    A failing row raises BoundViolation: the inequality is a theorem for the
    built levels, so a failure means the implementation is wrong.
    """
    rows = []
    for n in n_values:
        n = int(n)
        count = composite_count(n, capacity, k_cap)
        target = density_target(n, precision_digits)
        with localcontext() as ctx:
            ctx.prec = precision_digits + 10
            ratio = Decimal(count) / target
        row = DensityRow(n=n, composite_count=count, target=target, ratio=ratio)
        if Decimal(count) < target:
            raise BoundViolation(f"density bound fails at n={n}: {count} < {target}")
        rows.append(row)
    return rows


def density_csv(rows) -> str:
    header = "n,composite_count,target,ratio"
    return "\n".join([header] + [row.csv() for row in rows])


def sequence_check_set(seq: SidonSequence, capacity: int | None = None) -> list[int]:
    """Level elements together with every prime up to 2^k_max, ascending.

    Every prime factor of a level element lies below 2^k_max, so a prime
    beyond that range can only appear in a product collision alongside
    itself; this finite union therefore carries the full collision content
    of the constructed set over the materialized levels.
    """
    members = [int(p) for p in sieve(1 << seq.k_max, capacity)]
    for lvl in seq.levels:
        members.extend(lvl.elements)
    return sorted(members)

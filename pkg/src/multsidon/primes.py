"""Prime generation, counting, dyadic prime blocks, and Rosser-type checks.

All logarithms in the bounds below are natural. The sieve is segmented so
that counting primes never allocates more than one segment of flags at a
time; the capacity cap is a guard against accidental huge requests, not a
preallocation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from .errors import SieveCapacityError

DEFAULT_SIEVE_CAPACITY = 2**31
_SEGMENT = 1 << 22

# Strong-pseudoprime witnesses that decide primality for every n < 3.3e24
# (covers the full 64-bit range deterministically).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981

_flags_lock = threading.Lock()
_flags_cache = np.zeros(2, dtype=bool)  # grow-only composite flags for [0, len)


def _check_capacity(limit: int, capacity: int | None) -> None:
    cap = DEFAULT_SIEVE_CAPACITY if capacity is None else capacity
    if limit > cap:
        raise SieveCapacityError(f"limit {limit} exceeds sieve capacity {cap}")


def _prime_flags(limit: int) -> np.ndarray:
    """Boolean primality flags for [0, limit], cached grow-only."""
    global _flags_cache
    with _flags_lock:
        if limit < len(_flags_cache):
            return _flags_cache[: limit + 1]
        flags = np.ones(limit + 1, dtype=bool)
        flags[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if flags[p]:
                flags[p * p :: p] = False
        _flags_cache = flags
        return flags


def _segments(limit: int):
    """Yield (lo, flags) covering [0, limit] without a full-range allocation."""
    if limit <= _SEGMENT:
        yield 0, _prime_flags(limit)
        return
    base = sieve(math.isqrt(limit))
    yield 0, _prime_flags(_SEGMENT)
    for lo in range(_SEGMENT + 1, limit + 1, _SEGMENT):
        hi = min(lo + _SEGMENT - 1, limit)
        flags = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, (lo + p - 1) // p * p)
            if start <= hi:
                flags[start - lo :: p] = False
        yield lo, flags


def sieve(limit: int, capacity: int | None = None) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    _check_capacity(limit, capacity)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    parts = [np.flatnonzero(flags).astype(np.int64) + lo for lo, flags in _segments(limit)]
    return parts[0] if len(parts) == 1 else np.concatenate(parts)


def prime_count(x: int, capacity: int | None = None) -> int:
    """pi(x): the number of primes <= x."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    _check_capacity(x, capacity)
    if x < 2:
        return 0
    return sum(int(flags.sum()) for _, flags in _segments(x))


@dataclass(frozen=True)
class PrimeBlock:
    """The complete set of primes in the open dyadic interval (2^(k-1), 2^k)."""

    k: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def validate(self) -> None:
        lo, hi = 1 << (self.k - 1), 1 << self.k
        prev = lo
        for q in self.primes:
            if not (prev < q < hi):
                raise ValueError(f"{q} outside ({lo}, {hi}) or out of order")
            if not is_prime(q):
                raise ValueError(f"{q} is not prime")
            prev = q
        if self.k >= 11 and 4 * len(self.primes) * self.k * math.log(2) < hi:
            raise ValueError(f"block size {len(self.primes)} below 2^k/(4 ln 2^k)")


def prime_block(k: int, capacity: int | None = None) -> PrimeBlock:
    """The primes strictly between 2^(k-1) and 2^k.

    The interval is open on both ends; the boundary powers of two are
    composite for k - 1 >= 2, so nothing is lost.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_capacity(1 << k, capacity)
    ps = sieve((1 << k) - 1, capacity)
    ps = ps[ps > (1 << (k - 1))]
    return PrimeBlock(k=k, primes=tuple(int(q) for q in ps))


def _rosser_recheck(x: int, pi: int, upper: bool) -> bool:
    # Decimal re-evaluation for the (never observed) near-boundary case.
    with localcontext() as ctx:
        ctx.prec = 40
        q = Decimal(x) / Decimal(x).ln()
        return Decimal(pi) <= Decimal("1.26") * q if upper else q < Decimal(pi)


def check_rosser(x: int, capacity: int | None = None) -> bool:
    """Whether pi(x) obeys x/ln x < pi(x) (for x >= 17) and pi(x) <= 1.26 x/ln x.

    The lower bound is only applicable from 17 on; the upper bound holds for
    every x > 1. Comparisons are done in float with a high-precision recheck
    whenever the margin is suspiciously thin.
    """
    if x < 2:
        raise ValueError("x must be at least 2")
    pi = prime_count(x, capacity)
    q = x / math.log(x)
    ok = True
    if x >= 17:
        if abs(q - pi) < 1e-9 * pi:
            ok &= _rosser_recheck(x, pi, upper=False)
        else:
            ok &= q < pi
    if abs(1.26 * q - pi) < 1e-9 * pi:
        ok &= _rosser_recheck(x, pi, upper=True)
    else:
        ok &= pi <= 1.26 * q
    return ok


def rosser_sweep(limit: int, capacity: int | None = None) -> np.ndarray:
    """All x in [2, limit] failing check_rosser, as an array (empty = all pass)."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    _check_capacity(limit, capacity)
    flags = _prime_flags(limit)
    pi = np.cumsum(flags)
    x = np.arange(2, limit + 1, dtype=np.float64)
    pix = pi[2:].astype(np.float64)
    q = x / np.log(x)
    bad = (pix > 1.26 * q) | ((x >= 17) & (q >= pix))
    suspects = np.flatnonzero(bad) + 2
    # The vectorized pass uses plain float64; re-judge every suspect (and any
    # razor-thin margin) with the scalar path before reporting a failure.
    thin = np.flatnonzero(np.abs(q - pix) < 1e-9 * pix) + 2
    out = [int(v) for v in np.union1d(suspects, thin) if not check_rosser(int(v), capacity)]
    return np.array(out, dtype=np.int64)


def is_prime(m: int) -> bool:
    """Deterministic primality for m below 3.3e24 (covers 64-bit inputs)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m >= _MR_LIMIT:
        raise ValueError("m beyond the deterministic witness range")
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    d = m - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True

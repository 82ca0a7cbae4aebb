import math
import random

import numpy as np
import pytest

from multsidon.errors import SieveCapacityError
from multsidon.primes import (
    PrimeBlock,
    check_rosser,
    is_prime,
    prime_block,
    prime_count,
    rosser_sweep,
    sieve,
)


def trial_is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2 if d > 2 else 1
    return True


def oracle_sieve(limit: int) -> list[int]:
    # independent implementation: plain bytearray sieve of odds
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for m in range(4, limit + 1, 2):
        flags[m] = 0
    p = 3
    while p * p <= limit:
        if flags[p]:
            for m in range(p * p, limit + 1, 2 * p):
                flags[m] = 0
        p += 2
    return [m for m in range(limit + 1) if flags[m]]


def test_sieve_examples():
    assert list(sieve(10)) == [2, 3, 5, 7]
    assert list(sieve(1)) == []
    assert list(sieve(0)) == []
    assert len(sieve(2048)) == 309  # trial-division count


def test_sieve_matches_oracle_to_one_million():
    got = sieve(10**6)
    want = oracle_sieve(10**6)
    assert len(got) == len(want) == 78498
    assert np.array_equal(got, np.array(want))


def test_prime_count_examples():
    assert prime_count(1) == 0
    assert prime_count(100) == 25
    assert prime_count(2048) == 309


def test_prime_count_matches_trial_division_spot_checks():
    rng = random.Random(0)
    flags = [0] * (10**4 + 1)
    pi = 0
    counts = {}
    for m in range(10**4 + 1):
        if trial_is_prime(m):
            pi += 1
        counts[m] = pi
    for _ in range(200):
        x = rng.randint(0, 10**4)
        assert prime_count(x) == counts[x]


def test_sieve_capacity_guard():
    with pytest.raises(SieveCapacityError):
        sieve(100, capacity=50)
    with pytest.raises(SieveCapacityError):
        prime_count(100, capacity=50)


def test_prime_block_small():
    blk = prime_block(4)
    assert blk.primes == (11, 13)
    blk.validate()
    with pytest.raises(ValueError):
        prime_block(1)


def test_prime_block_k11():
    blk = prime_block(11)
    assert len(blk) == 137
    assert 137 * 4 * math.log(2048) >= 2048  # >= 2^k / (4 ln 2^k)
    blk.validate()


@pytest.mark.parametrize("k", range(11, 21))
def test_prime_block_size_bound(k):
    blk = prime_block(k)
    assert 4 * len(blk) * math.log(2.0**k) >= 2.0**k


def test_prime_blocks_partition_odd_primes():
    # blocks 2..K plus {2} cover every prime below 2^K; the dyadic boundary
    # powers are composite so the open intervals lose nothing
    K = 13
    union = {2}
    for k in range(2, K + 1):
        union.update(prime_block(k).primes)
    assert union == set(int(p) for p in sieve(2**K - 1))


def test_prime_block_validate_rejects_bad_blocks():
    with pytest.raises(ValueError):
        PrimeBlock(k=4, primes=(11, 12, 13)).validate()
    with pytest.raises(ValueError):
        PrimeBlock(k=4, primes=(13, 11)).validate()
    with pytest.raises(ValueError):
        PrimeBlock(k=4, primes=(7, 11)).validate()


def test_check_rosser_examples():
    # pi(17) = 7 > 17/ln 17 ~ 6.0, and 7 <= 1.26*17/ln 17 ~ 7.56
    assert check_rosser(17)
    assert check_rosser(2)  # upper bound only
    assert check_rosser(16)  # lower bound not applicable below 17
    with pytest.raises(ValueError):
        check_rosser(1)


def test_rosser_sweep_medium_range():
    assert rosser_sweep(10**5).size == 0


def test_is_prime_examples():
    assert not is_prime(1)
    assert not is_prime(0)
    assert not is_prime(2047)  # 23 * 89
    assert is_prime(999983)


def test_is_prime_strong_pseudoprime_traps():
    assert not is_prime(3215031751)  # fools bases {2,3,5,7}
    assert not is_prime(341550071728321)
    assert is_prime(2305843009213693951)  # 2^61 - 1
    assert not is_prime(2**61 + 1)


def test_is_prime_matches_trial_division():
    rng = random.Random(1)
    for _ in range(500):
        m = rng.randint(0, 10**7)
        assert is_prime(m) == trial_is_prime(m), m

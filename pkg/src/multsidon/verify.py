"""Verification machinery: multiplicative Sidon checking, rectangle-free
graphs with the t1 + 2*sqrt(t1)*t2 edge bound, u*v decompositions, and
factor-shape diagnostics.

The Sidon checker is exact at any input size. Small inputs go through a
plain product-keyed dictionary. Large inputs are partitioned into bands of
near-equal pair count by product magnitude (log-space boundaries with an
overlap margin far above float error, so two pairs with equal exact products
always share a band), and each band is scanned through mod-2^64 product
signatures: signature equality is necessary for exact equality, and the rare
signature matches are confirmed in arbitrary precision.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from itertools import count

import numpy as np

from .errors import NoDecomposition, PreconditionViolated
from .primes import is_prime, sieve

_DENSE_CUTOFF = 1500
_BAND_TARGET_PAIRS = 96_000_000
_BAND_MARGIN = 1e-9  # float log sums are accurate to ~2^-43
_BOUNDARY_TOL = Decimal("1e-20")


@dataclass(frozen=True)
class SidonCheckResult:
    """Verdict of a multiplicative Sidon check.

    On violation, `witness` is (a, b, c, d) with a*b == c*d exactly and
    {a, b} != {c, d} as multisets.
    """

    is_sidon: bool
    witness: tuple[int, int, int, int] | None = None

    @property
    def verdict(self) -> str:
        return "SIDON" if self.is_sidon else "VIOLATION"


def is_multiplicative_sidon(elements, workers: int | None = None) -> SidonCheckResult:
    """Whether no two distinct unordered pairs (squares allowed) share a product.

    Elements must be distinct positive integers. Products are compared
    exactly; the verdict never depends on floating point.
    """
    xs = sorted(int(v) for v in elements)
    if not xs:
        return SidonCheckResult(True)
    if xs[0] < 1:
        raise ValueError("elements must be positive")
    for i in range(1, len(xs)):
        if xs[i] == xs[i - 1]:
            raise ValueError(f"elements must be distinct: {xs[i]} repeats")
    if len(xs) < _DENSE_CUTOFF or xs[-1] >= 1 << 64:
        return _sidon_scan_dict(xs)
    return _sidon_scan_banded(xs, workers)


def _sidon_scan_dict(xs: list[int]) -> SidonCheckResult:
    seen: dict[int, tuple[int, int]] = {}
    for j, xj in enumerate(xs):
        for i in range(j + 1):
            prod = xs[i] * xj
            other = seen.get(prod)
            if other is not None:
                return SidonCheckResult(False, (other[0], other[1], xs[i], xj))
            seen[prod] = (xs[i], xj)
    return SidonCheckResult(True)


# Band workers share the element array through the pool initializer.
_band_elements: np.ndarray | None = None
_band_logs: np.ndarray | None = None


def _init_band_worker(u: np.ndarray, logs: np.ndarray) -> None:
    global _band_elements, _band_logs
    _band_elements = u
    _band_logs = logs


def _band_windows(logs: np.ndarray, lo: float, hi: float):
    """Per-row index windows of the pairs whose log-product falls in the band."""
    n = len(logs)
    jlo = np.searchsorted(logs, (lo - _BAND_MARGIN) - logs, side="left")
    jhi = np.searchsorted(logs, (hi + _BAND_MARGIN) - logs, side="left")
    rows = np.arange(n)
    jlo = np.maximum(jlo, rows)
    jhi = np.maximum(jhi, jlo)
    return jlo, jhi


def _scan_band(u: np.ndarray, logs: np.ndarray, lo: float, hi: float) -> list[int]:
    """Duplicated mod-2^64 product signatures among the band's pairs."""
    jlo, jhi = _band_windows(logs, lo, hi)
    counts = jhi - jlo
    total = int(counts.sum())
    if total < 2:
        return []
    buf = np.empty(total, dtype=np.uint64)
    pos = 0
    with np.errstate(over="ignore"):
        for i in np.flatnonzero(counts):
            a, b = int(jlo[i]), int(jhi[i])
            np.multiply(u[a:b], u[i], out=buf[pos : pos + b - a])
            pos += b - a
    buf.sort()
    eq = buf[1:] == buf[:-1]
    if not eq.any():
        return []
    return [int(v) for v in np.unique(buf[1:][eq])]


def _band_task(band: tuple[float, float]) -> list[int]:
    return _scan_band(_band_elements, _band_logs, band[0], band[1])


def _band_edges(logs: np.ndarray, nbands: int) -> list[float]:
    """Log-space boundaries equalizing the pair count per band."""
    n = len(logs)
    lo = float(2 * logs[0]) - 1.0
    hi = float(2 * logs[-1]) + 1.0
    if nbands <= 1:
        return [lo, hi]
    rows = np.arange(n)
    total = n * (n + 1) // 2

    def pairs_below(t: float) -> int:
        h = np.searchsorted(logs, t - logs, side="left")
        return int(np.maximum(h - rows, 0).sum())

    edges = [lo]
    for b in range(1, nbands):
        target = total * b // nbands
        a, z = edges[-1], hi
        for _ in range(48):
            mid = 0.5 * (a + z)
            if pairs_below(mid) < target:
                a = mid
            else:
                z = mid
        edges.append(z)
    edges.append(hi)
    return edges


def _sidon_scan_banded(xs: list[int], workers: int | None) -> SidonCheckResult:
    u = np.array(xs, dtype=np.uint64)
    logs = np.log2(u.astype(np.float64))
    n = len(xs)
    total = n * (n + 1) // 2
    nbands = max(1, -(-total // _BAND_TARGET_PAIRS))
    edges = _band_edges(logs, nbands)
    bands = list(zip(edges[:-1], edges[1:]))
    if workers is None:
        workers = os.cpu_count() or 1
    dup_sigs: set[int] = set()
    if workers > 1 and len(bands) > 1:
        try:
            with ProcessPoolExecutor(
                max_workers=min(workers, len(bands)),
                initializer=_init_band_worker,
                initargs=(u, logs),
            ) as pool:
                for sigs in pool.map(_band_task, bands):
                    dup_sigs.update(sigs)
        except (OSError, RuntimeError):
            dup_sigs = None  # type: ignore[assignment]
    else:
        dup_sigs = None  # type: ignore[assignment]
    if dup_sigs is None:
        dup_sigs = set()
        for band in bands:
            dup_sigs.update(_scan_band(u, logs, band[0], band[1]))
    if not dup_sigs:
        return SidonCheckResult(True)
    return _confirm_candidates(xs, u, logs, bands, dup_sigs)


def _confirm_candidates(xs, u, logs, bands, dup_sigs) -> SidonCheckResult:
    """Exact (big-integer) adjudication of the signature matches."""
    dup_arr = np.array(sorted(dup_sigs), dtype=np.uint64)
    pairs_by_product: dict[int, set[tuple[int, int]]] = {}
    with np.errstate(over="ignore"):
        for lo, hi in bands:
            jlo, jhi = _band_windows(logs, lo, hi)
            for i in np.flatnonzero(jhi - jlo):
                a, b = int(jlo[i]), int(jhi[i])
                sig = u[a:b] * u[i]
                for off in np.flatnonzero(np.isin(sig, dup_arr)):
                    j = a + int(off)
                    prod = xs[i] * xs[j]
                    pairs_by_product.setdefault(prod, set()).add((xs[i], xs[j]))
    for prod in sorted(pairs_by_product):
        pairs = sorted(pairs_by_product[prod])
        if len(pairs) >= 2:
            (a, b), (c, d) = pairs[0], pairs[1]
            return SidonCheckResult(False, (a, b, c, d))
    return SidonCheckResult(True)


def c4_free(edges):
    """True iff the simple graph has no 4-cycle; otherwise a violating cycle
    (v1, v2, v3, v4) with edges v1-v2, v2-v3, v3-v4, v4-v1.

    A 4-cycle exists iff two vertices share two common neighbors, so the scan
    enumerates the neighbor pairs of every vertex and looks for a repeated
    pair. Vertex labels may be arbitrary integers.
    """
    edge_list = [(int(a), int(b)) for a, b in edges]
    if len(edge_list) < 4:
        _validate_simple(edge_list)
        return True
    arr = np.array(edge_list, dtype=np.int64)
    labels, inv = np.unique(arr, return_inverse=True)
    e = inv.reshape(-1, 2)
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("self-loop: not a simple graph")
    und = np.sort(e, axis=1)
    if len(np.unique(und[:, 0] * len(labels) + und[:, 1])) != len(e):
        raise ValueError("duplicate edge: not a simple graph")
    nv = len(labels)
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    starts = np.searchsorted(src, np.arange(nv), side="left")
    ends = np.searchsorted(src, np.arange(nv), side="right")
    tri_cache: dict[int, tuple] = {}
    keys_parts, origin_parts = [], []
    for w in range(nv):
        deg = int(ends[w] - starts[w])
        if deg < 2:
            continue
        nb = dst[starts[w] : ends[w]]
        if deg not in tri_cache:
            tri_cache[deg] = np.triu_indices(deg, 1)
        ia, ib = tri_cache[deg]
        keys_parts.append(nb[ia] * nv + nb[ib])
        origin_parts.append(np.full(ia.size, w, dtype=np.int64))
    if not keys_parts:
        return True
    keys = np.concatenate(keys_parts)
    origins = np.concatenate(origin_parts)
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    dup = np.flatnonzero(sk[1:] == sk[:-1])
    if dup.size == 0:
        return True
    t = int(dup[0])
    x, y = int(sk[t]) // nv, int(sk[t]) % nv
    w1, w2 = int(origins[order[t]]), int(origins[order[t + 1]])
    cyc = _normalize_cycle(int(labels[x]), int(labels[w1]), int(labels[y]), int(labels[w2]))
    return cyc


def _validate_simple(edge_list) -> None:
    seen = set()
    for a, b in edge_list:
        if a == b:
            raise ValueError("self-loop: not a simple graph")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise ValueError("duplicate edge: not a simple graph")
        seen.add(key)


def _normalize_cycle(a, b, c, d):
    cyc = (a, b, c, d)
    start = min(range(4), key=lambda i: cyc[i])
    left, right = cyc[(start + 1) % 4], cyc[(start - 1) % 4]
    if left <= right:
        return (cyc[start], left, cyc[(start + 2) % 4], right)
    return (cyc[start], right, cyc[(start + 2) % 4], left)


@dataclass(frozen=True)
class LabeledBipartiteGraph:
    """A graph on vertices 0..t1-1 whose every edge touches a vertex < t2."""

    t1: int
    t2: int
    edges: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        if not 1 <= self.t2 < self.t1:
            raise PreconditionViolated("need 1 <= t2 < t1")
        seen = set()
        for a, b in self.edges:
            if a == b or not (0 <= a < self.t1 and 0 <= b < self.t1):
                raise PreconditionViolated(f"bad edge ({a}, {b})")
            if min(a, b) >= self.t2:
                raise PreconditionViolated(f"edge ({a}, {b}) touches no distinguished vertex")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise PreconditionViolated(f"duplicate edge ({a}, {b})")
            seen.add(key)


def lemma1_certify(graph: LabeledBipartiteGraph) -> bool:
    """Whether |E| <= t1 + 2*sqrt(t1)*t2, checked in exact integer arithmetic.

    Preconditions (validated here): the incidence structure above, and no
    4-cycle. Under those the bound is a theorem, so a False return means the
    caller handed in something inconsistent.
    """
    graph.validate()
    cyc = c4_free(graph.edges)
    if cyc is not True:
        raise PreconditionViolated(f"graph contains the 4-cycle {cyc}")
    e = len(graph.edges)
    if e <= graph.t1:
        return True
    return (e - graph.t1) ** 2 <= 4 * graph.t1 * graph.t2**2


def random_c4_free_graph(rng, t1_max: int = 2000, t2_max: int = 40) -> LabeledBipartiteGraph:
    """Random incidence graph kept 4-cycle-free by greedy rejection.

    Candidate edges always touch a distinguished vertex; a candidate is kept
    iff it closes no 4-cycle, tested incrementally against bitmask adjacency
    (a new edge x-y closes a cycle iff some neighbor w of y has a neighbor
    in N(x) \\ {y}).
    """
    t2 = rng.randint(1, t2_max)
    t1 = rng.randint(t2 + 1, max(t2 + 1, t1_max))
    adj = [0] * t1
    edges = []
    attempts = 3 * t1 + 40 * t2
    hubs = rng.choices(range(t2), k=attempts)
    others = rng.choices(range(t1), k=attempts)
    for x, y in zip(hubs, others):
        if x == y or (adj[x] >> y) & 1:
            continue
        # scan the smaller neighborhood against the other side's mask
        a, b = (x, y) if adj[x].bit_count() >= adj[y].bit_count() else (y, x)
        ma = adj[a] & ~(1 << b)
        mb = adj[b] & ~(1 << a)
        closes = False
        while mb:
            lsb = mb & -mb
            if adj[lsb.bit_length() - 1] & ma:
                closes = True
                break
            mb ^= lsb
        if closes:
            continue
        adj[x] |= 1 << y
        adj[y] |= 1 << x
        edges.append((x, y) if x < y else (y, x))
    return LabeledBipartiteGraph(t1=t1, t2=t2, edges=tuple(edges))


def lemma1_suite(count: int = 500, seed: int = 0, t1_max: int = 2000, t2_max: int = 40) -> list[int]:
    """Indices of suite graphs failing the certified edge bound (empty = pass)."""
    import random

    rng = random.Random(seed)
    failures = []
    for idx in range(count):
        graph = random_c4_free_graph(rng, t1_max=t1_max, t2_max=t2_max)
        if not lemma1_certify(graph):
            failures.append(idx)
    return failures


def erdos_decompose(m: int, n: int) -> tuple[int, int]:
    """A split m = u*v with v <= u and (u <= n^(2/3) or u prime), v minimal.

    Exhaustive over divisors, oracle-grade at desk scale. The cube-root
    threshold is compared exactly (u <= n^(2/3) iff u^3 <= n^2). Such a split
    exists for every 1 <= m <= n; NoDecomposition firing is a bug signal.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    nn = n * n
    for v in range(1, math.isqrt(m) + 1):
        if m % v:
            continue
        u = m // v
        if u * u * u <= nn or is_prime(u):
            return (u, v)
    raise NoDecomposition(f"no valid split of {m} at n={n}")


def _le(v: int, threshold: Decimal) -> bool:
    return Decimal(v) <= threshold * (1 + _BOUNDARY_TOL)


def _ge(v: int, threshold: Decimal) -> bool:
    return Decimal(v) >= threshold * (1 - _BOUNDARY_TOL)


def _ln_power(n: int, exp: int, digits: int = 30) -> Decimal:
    """(ln n)^exp at high precision."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        return Decimal(n).ln() ** exp


def _root_times_ln_power(n: int, root: int, log_exp: int, digits: int = 30) -> Decimal:
    """n^(1/root) * (ln n)^log_exp at high precision (log_exp may be negative)."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        base = Decimal(n)
        r = base
        k = root
        while k % 2 == 0:
            r = r.sqrt()
            k //= 2
        if k == 3:
            r = _cbrt(r, ctx.prec)
        elif k != 1:
            raise ValueError(f"unsupported root {root}")
        return r * base.ln() ** log_exp


def _cbrt(x: Decimal, prec: int) -> Decimal:
    guess = Decimal(float(x) ** (1.0 / 3.0))
    three = Decimal(3)
    for _ in range(prec.bit_length() + 4):
        guess = (2 * guess + x / (guess * guess)) / three
    return guess


def divisor_in_window(a: int, n: int, l: int = 0) -> bool:
    """Whether a = u*v with v <= u and n^(1/3) <= v <= sqrt(n)/(ln n)^l.

    Cube/square thresholds are exact integer comparisons; the log-powered
    bound (l > 0) is evaluated at 30 digits with a declared relative boundary
    tolerance of 1e-20. Diagnostic predicate, not an acceptance gate.
    """
    _check_diag_args(a, n)
    threshold = None if l == 0 else _root_times_ln_power(n, 2, -l)
    for v in range(1, math.isqrt(a) + 1):
        if a % v:
            continue
        if v * v * v < n:  # v < n^(1/3)
            continue
        if threshold is None:
            if v * v <= n:  # v <= sqrt(n)
                return True
        elif _le(v, threshold):
            return True
    return False


def small_divisor_split(a: int, n: int) -> bool:
    """Whether a = u*v with v <= u, v <= n^(1/3), and u <= n^(2/3) or u prime."""
    _check_diag_args(a, n)
    nn = n * n
    for v in range(1, math.isqrt(a) + 1):
        if a % v:
            continue
        if v * v * v > n:
            break
        u = a // v
        if u * u * u <= nn or is_prime(u):
            return True
    return False


def smooth_head_prime_run(a: int, n: int) -> bool:
    """Whether a = d * (run of primes), every run prime in
    [n^(1/6)/(ln n)^6, sqrt(n)*(ln n)^6] and d <= (ln n)^12.

    d collects exactly the prime factors below the window; the run must be
    nonempty. Factorization-based, with the declared boundary tolerance.
    """
    _check_diag_args(a, n)
    lo = _root_times_ln_power(n, 6, -6)
    hi = _root_times_ln_power(n, 2, 6)
    dmax = _ln_power(n, 12)
    factors = factorize(a)
    head = [p for p in factors if not _ge(p, lo)]
    run = [p for p in factors if _ge(p, lo)]
    if not run or not _le(run[-1], hi):
        return False
    d = math.prod(head)
    return _le(d, dmax)


def smooth_head_four_primes(a: int, n: int) -> bool:
    """Whether a >= n/(ln n)^12 and a = d * p1*p2*p3*p4 with the four largest
    prime factors in [n^(1/4)/(ln n)^9, n^(1/4)*(ln n)^9] and d <= (ln n)^12.
    """
    _check_diag_args(a, n)
    ln12 = _ln_power(n, 12)
    with localcontext() as ctx:
        ctx.prec = 40
        if not _ge(a, Decimal(n) / ln12):
            return False
    factors = factorize(a)
    if len(factors) < 4:
        return False
    lo = _root_times_ln_power(n, 4, -9)
    hi = _root_times_ln_power(n, 4, 9)
    top = factors[-4:]
    if not (_ge(top[0], lo) and _le(top[-1], hi)):
        return False
    d = math.prod(factors[:-4])
    return _le(d, ln12)


def _check_diag_args(a: int, n: int) -> None:
    if not 1 <= a <= n:
        raise ValueError("need 1 <= a <= n")


_SMALL_FACTOR_PRIMES: tuple[int, ...] | None = None


def factorize(m: int) -> list[int]:
    """Prime factorization of m with multiplicity, ascending (64-bit exact).

    Trial division by small primes, then deterministic Brent-cycle splitting
    with primality certified by the fixed-witness strong-pseudoprime test.
    """
    global _SMALL_FACTOR_PRIMES
    if m < 1:
        raise ValueError("m must be positive")
    if _SMALL_FACTOR_PRIMES is None:
        _SMALL_FACTOR_PRIMES = tuple(int(p) for p in sieve(1000))
    out = []
    for p in _SMALL_FACTOR_PRIMES:
        if p * p > m:
            break
        while m % p == 0:
            out.append(p)
            m //= p
    if m > 1:
        stack = [m]
        while stack:
            x = stack.pop()
            if is_prime(x):
                out.append(x)
                continue
            d = _brent_factor(x)
            stack.append(d)
            stack.append(x // d)
    out.sort()
    return out


def _brent_factor(n: int) -> int:
    """A nontrivial factor of odd composite n (deterministic retry schedule)."""
    if n % 2 == 0:
        return 2
    for c in count(1):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            y = ys
            while g == 1:
                y = (y * y + c) % n
                g = math.gcd(abs(x - y), n)
        if g != n:
            return g
    raise AssertionError("unreachable")

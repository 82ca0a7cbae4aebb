import json

import numpy as np
import pytest

from multsidon.errors import GroundSetTooSmall, PreconditionTooSmall
from multsidon.family import (
    FieldTuple,
    QuadFamily,
    alpha_histogram,
    build_family,
    build_tuples,
    e2,
    embed,
    find_modulus,
    select_alpha,
    verify_intersection_bound,
    verify_rectangle_free,
    verify_size_bound,
)


def brute_histogram(p: int) -> np.ndarray:
    # O(p^4) oracle, vectorized over (c, d) with an explicit (a, b) loop and
    # the pairwise-product sum written as ab + (a+b)(c+d) + cd
    hist = np.zeros(p, dtype=np.int64)
    c = np.arange(p, dtype=np.int64)[:, None]
    d = np.arange(p, dtype=np.int64)[None, :]
    for a in range(p):
        for b in range(p):
            ok = (
                ((a + b + c) % p != 0)
                & ((a + b + d) % p != 0)
                & ((a + c + d) % p != 0)
                & ((b + c + d) % p != 0)
            )
            e = (a * b + (a + b) * (c + d) + c * d) % p
            hist += np.bincount(e[ok], minlength=p)
    return hist


def brute_sorted_tuples(p: int, alpha: int) -> set[tuple]:
    out = set()
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a + b + c) % p and (a + b + d) % p and (a + c + d) % p and (b + c + d) % p:
                        if e2(a, b, c, d, p) == alpha:
                            out.add(tuple(sorted((a, b, c, d))))
    return out


def test_find_modulus_examples():
    assert find_modulus(56) == 13  # interval (7, 14]
    assert find_modulus(137) == 31  # interval (17.125, 34.25]
    assert find_modulus(255) == 61
    assert find_modulus(464) == 113
    assert find_modulus(872) == 211
    with pytest.raises(PreconditionTooSmall):
        find_modulus(44)


def test_find_modulus_interval_and_floor():
    for s in range(56, 700):
        p = find_modulus(s)
        assert 8 * p > s and 4 * p <= s
        assert p >= 11


def test_e2_examples():
    assert e2(1, 1, 1, 1, 11) == 6
    assert e2(0, 0, 0, 0, 11) == 0
    assert e2(1, 2, 3, 4, 11) == 35 % 11 == 2


def test_alpha_histogram_frozen_values():
    h = alpha_histogram(11)
    assert int(h.sum()) == 10000  # == (p-1)^4
    assert int(h.max()) == 1180
    assert int(np.argmax(h)) == 0
    assert int(h.sum()) >= 11**4 - 4 * 11**3
    assert int(h.max()) >= 11**3 - 4 * 11**2  # 847


@pytest.mark.parametrize("p", [11, 13])
def test_alpha_histogram_matches_bruteforce(p):
    assert np.array_equal(alpha_histogram(p), brute_histogram(p))


def test_alpha_histogram_total_identity():
    # exactly (p-1)^4 tuples survive the four nonvanishing-sum conditions
    for p in (11, 13, 17, 19):
        assert int(alpha_histogram(p).sum()) == (p - 1) ** 4


def test_alpha_histogram_rejects_composite():
    with pytest.raises(ValueError):
        alpha_histogram(9)


def test_select_alpha():
    h = alpha_histogram(11)
    a = select_alpha(h)
    assert a == 0 and int(h[a]) >= 847
    assert select_alpha(alpha_histogram(13)) == 2
    assert int(alpha_histogram(13).max()) >= 13**3 - 4 * 13**2  # 1521


def test_build_tuples_p11():
    alpha = select_alpha(alpha_histogram(11))
    t = build_tuples(11, alpha)
    assert len(t) >= -(-847 // 24)  # 36
    assert len(t) == 80
    assert set(map(tuple, t.tolist())) == brute_sorted_tuples(11, alpha)
    # defining identity and dedup contract
    seen = set()
    for a, b, c, d in map(tuple, t.tolist()):
        assert d * (a + b + c) % 11 == (alpha - (a * b + a * c + b * c)) % 11
        assert (a, b, c, d) == tuple(sorted((a, b, c, d)))
        assert (a, b, c, d) not in seen
        seen.add((a, b, c, d))
    # lexicographic output order
    assert t.tolist() == sorted(t.tolist())


def test_build_tuples_size_guarantee():
    for p in (11, 13, 31):
        alpha = select_alpha(alpha_histogram(p))
        assert 48 * len(build_tuples(p, alpha)) >= p**3


def test_embed_positions():
    quads = embed(np.array([[0, 1, 2, 3]]), range(10, 10 + 44), p=11, alpha=0).quads
    assert quads.tolist() == [[10, 22, 34, 46]]  # positions 0, p+1, 2p+2, 3p+3


def test_embed_block_structure():
    fam = build_family(range(1, 57))
    p = fam.p
    gs = fam.ground_set
    blocks = [set(gs[j * p : (j + 1) * p]) for j in range(4)]
    for row in fam.quads:
        assert all(int(row[j]) in blocks[j] for j in range(4))
    assert len(fam.quads) == len(fam.tuples)


def test_embed_rejects_small_ground_set():
    with pytest.raises(GroundSetTooSmall):
        embed(np.array([[0, 1, 2, 3]]), range(10), p=11, alpha=0)
    with pytest.raises(ValueError):
        embed(np.array([[0, 1, 2, 3]]), [1] * 44, p=11, alpha=0)


def test_field_tuple_validate():
    FieldTuple(11, 0, 1, 1, 5).validate(0)
    with pytest.raises(ValueError):
        FieldTuple(11, 0, 0, 0, 1).validate(0)  # a+b+c = 0
    with pytest.raises(ValueError):
        FieldTuple(11, 0, 1, 1, 5).validate(3)  # wrong alpha


def test_verify_intersection_bound():
    fam = QuadFamily(
        ground_set=list(range(1, 57)),
        p=13,
        alpha=0,
        tuples=np.zeros((2, 4), dtype=np.int64),
        quads=np.array([[1, 2, 3, 4], [1, 2, 3, 5]]),
    )
    assert verify_intersection_bound(fam) == ((1, 2, 3, 4), (1, 2, 3, 5))
    fam.quads = np.array([[1, 2, 3, 4], [5, 6, 7, 8]])
    assert verify_intersection_bound(fam) is True


def test_verify_rectangle_free_planted():
    fam = QuadFamily(
        ground_set=list(range(1, 57)),
        p=13,
        alpha=0,
        tuples=np.zeros((4, 4), dtype=np.int64),
        quads=np.array([[1, 2, 3, 4], [3, 4, 5, 6], [5, 6, 7, 8], [1, 2, 7, 8]]),
    )
    assert verify_rectangle_free(fam) == ((1, 2), (3, 4), (5, 6), (7, 8))
    fam.quads = np.array([[1, 2, 3, 4]])
    assert verify_rectangle_free(fam) is True


def test_verify_size_bound_edges():
    fam = QuadFamily(
        ground_set=list(range(1, 57)),
        p=13,
        alpha=0,
        tuples=np.empty((0, 4), dtype=np.int64),
        quads=np.empty((0, 4), dtype=np.int64),
    )
    assert not verify_size_bound(fam)  # 56^3/24576 ~ 7.15 needs 8 quads
    fam.quads = np.zeros((8, 4), dtype=np.int64)
    assert verify_size_bound(fam)
    fam.quads = np.zeros((7, 4), dtype=np.int64)
    assert not verify_size_bound(fam)


def test_pipeline_sweep_properties(sweep_families):
    for s, fam in sweep_families.items():
        assert verify_intersection_bound(fam) is True
        assert verify_rectangle_free(fam) is True
        assert verify_size_bound(fam)
        assert 24576 * len(fam) >= s**3


def test_tuple_invariants_on_built_family(sweep_families):
    fam = sweep_families[137]
    p, alpha = fam.p, fam.alpha
    total = fam.tuples.sum(axis=1)
    for j in range(4):
        assert np.all((total - fam.tuples[:, j]) % p != 0)
    e = np.zeros(len(fam.tuples), dtype=np.int64)
    for i in range(4):
        for j in range(i + 1, 4):
            e += fam.tuples[:, i] * fam.tuples[:, j]
    assert np.all(e % p == alpha)


def test_determinism():
    a = build_family(range(1, 101))
    b = build_family(range(1, 101))
    assert a.p == b.p and a.alpha == b.alpha
    assert np.array_equal(a.tuples, b.tuples)
    assert np.array_equal(a.quads, b.quads)


def test_json_roundtrip(sweep_families):
    fam = sweep_families[56]
    d = fam.to_json_dict()
    assert list(d.keys()) == ["s", "p", "alpha", "tuples", "ground_set", "quads"]
    back = QuadFamily.from_json_dict(json.loads(json.dumps(d)))
    assert back.to_json_dict() == d

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridgelet_sampler.domain import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    FiniteDomain,
    NodeIndex,
    all_points,
    decode_node,
    decode_point,
    encode_node,
    encode_point,
    inner_product_mod,
    is_prime,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_is_prime_small_values():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23}
    for n in range(-3, 25):
        assert is_prime(n) == (n in primes)


def test_domain_rejects_non_prime_modulus():
    with pytest.raises(ValueError, match="prime"):
        FiniteDomain(4, 2)
    with pytest.raises(ValueError, match="prime"):
        FiniteDomain(1, 1)


def test_domain_rejects_bad_dimension():
    with pytest.raises(ValueError):
        FiniteDomain(7, 0)


def test_sizes_are_exact_big_integers():
    dom = FiniteDomain(3, 128)
    assert dom.num_points == 3**128
    assert dom.num_nodes == 3**129


def test_enumeration_cap_guard():
    dom = FiniteDomain(3, 20)  # 3^21 ~ 1e10 > default cap
    with pytest.raises(EnumerationCapError, match="cap"):
        dom.check_enumerable()
    FiniteDomain(3, 2).check_enumerable()  # small spaces pass
    with pytest.raises(EnumerationCapError):
        FiniteDomain(3, 2).check_enumerable(cap=10)


def test_inner_product_zero_vector():
    dom = FiniteDomain(7, 2)
    assert inner_product_mod((0, 0), (5, 6), dom) == 0


def test_inner_product_wraps_to_zero():
    dom = FiniteDomain(7, 2)
    assert inner_product_mod((1, 1), (3, 4), dom) == 0


def test_inner_product_direct_value():
    # (2*4 + 3*5) mod 7 = 23 mod 7 = 2
    dom = FiniteDomain(7, 2)
    assert inner_product_mod((2, 3), (4, 5), dom) == 2


def test_inner_product_dimension_mismatch():
    dom = FiniteDomain(7, 3)
    with pytest.raises(ValueError):
        inner_product_mod((1, 2), (3, 4, 5), dom)


def test_inner_product_range_check():
    dom = FiniteDomain(7, 2)
    with pytest.raises(ValueError):
        inner_product_mod((7, 0), (1, 1), dom)


@given(
    p=st.sampled_from(SMALL_PRIMES),
    d=st.integers(min_value=1, max_value=4),
    data=st.data(),
)
@settings(max_examples=50, deadline=None)
def test_inner_product_matches_bigint_reference(p, d, data):
    dom = FiniteDomain(p, d)
    a = data.draw(st.lists(st.integers(0, p - 1), min_size=d, max_size=d))
    x = data.draw(st.lists(st.integers(0, p - 1), min_size=d, max_size=d))
    expected = sum(ai * xi for ai, xi in zip(a, x)) % p
    assert inner_product_mod(a, x, dom) == expected


def test_encode_first_and_last_nodes():
    dom = FiniteDomain(3, 1)
    assert encode_node(NodeIndex(a=(0,), b=0), dom) == 0
    dom2 = FiniteDomain(5, 3)
    last = dom2.num_nodes - 1
    node = decode_node(last, dom2)
    assert node == NodeIndex(a=(4, 4, 4), b=4)


def test_encode_is_row_major_in_b():
    dom = FiniteDomain(3, 2)
    n0 = NodeIndex(a=(0, 1), b=2)
    assert encode_node(n0, dom) == (0 * 3 + 1) * 3 + 2


def test_node_roundtrip_exhaustive():
    dom = FiniteDomain(3, 2)
    seen = set()
    for i in range(dom.num_nodes):
        node = decode_node(i, dom)
        assert encode_node(node, dom) == i
        seen.add(node)
    assert len(seen) == dom.num_nodes


def test_decode_out_of_range():
    dom = FiniteDomain(3, 1)
    with pytest.raises(ValueError):
        decode_node(dom.num_nodes, dom)
    with pytest.raises(ValueError):
        decode_node(-1, dom)
    with pytest.raises(ValueError):
        decode_point(dom.num_points, dom)


@given(
    p=st.sampled_from([3, 5, 7]),
    d=st.integers(min_value=1, max_value=3),
    data=st.data(),
)
@settings(max_examples=50, deadline=None)
def test_node_roundtrip_random(p, d, data):
    dom = FiniteDomain(p, d)
    i = data.draw(st.integers(0, dom.num_nodes - 1))
    assert encode_node(decode_node(i, dom), dom) == i


def test_all_points_matches_decode_order():
    dom = FiniteDomain(5, 2)
    pts = all_points(dom)
    assert pts.shape == (25, 2)
    for i in range(25):
        assert tuple(pts[i]) == decode_point(i, dom)


def test_all_points_respects_cap():
    with pytest.raises(EnumerationCapError):
        all_points(FiniteDomain(3, 2), cap=5)


def test_default_cap_value():
    assert DEFAULT_ENUMERATION_CAP == 10**7

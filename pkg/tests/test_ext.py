import random

import pytest

from prismkit.errors import TooLarge
from prismkit.ext import (
    FiniteAbelianGroup,
    bd_d1,
    bd_d2,
    brute_force_orders,
    coproduct,
    d1_matrix,
    d2_matrix,
    ext_groups,
    ext_oracle,
    group_order,
    is_primitive,
    primitive_elements,
    primitive_elements_brute,
    random_cochain,
)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("a", [1, 2])
@pytest.mark.parametrize("b", [1, 2])
def test_cyclic_against_oracle(p, a, b):
    G = FiniteAbelianGroup((p**a,))
    h0, h1 = ext_groups(G, p**b)
    assert h1 == [p ** min(a, b)]
    assert (h0, h1) == ext_oracle(G, p**b)


@pytest.mark.parametrize("orders,m", [((2,), 2), ((4,), 2), ((2,), 4), ((3,), 3), ((2,), 8), ((2, 2), 2), ((3,), 2)])
def test_brute_force(orders, m):
    G = FiniteAbelianGroup(orders)
    h0, h1 = ext_groups(G, m)
    assert brute_force_orders(G, m) == (group_order(h0), group_order(h1))


def test_examples():
    assert ext_groups(FiniteAbelianGroup((2,)), 2)[1] == [2]
    assert ext_groups(FiniteAbelianGroup((2,)), 3) == ([], [])
    assert ext_groups(FiniteAbelianGroup((6,)), 4)[1] == [2]
    with pytest.raises(TooLarge):
        ext_groups(FiniteAbelianGroup((1000,)), 2)


@pytest.mark.parametrize("orders,m", [((2,), 4), ((2, 2), 4), ((4,), 4), ((3,), 9)])
def test_d2_d1_zero(orders, m):
    G = FiniteAbelianGroup(orders)
    assert not (d2_matrix(G) @ d1_matrix(G) % m).any()
    r = random.Random(0)
    for _ in range(10):
        f = random_cochain(G, m, 1, r)
        assert all(c.is_zero() for c in bd_d2(bd_d1(f)))


def test_primitives():
    for p in (2, 3):
        for r in (1, 2, 3):
            dim, basis = primitive_elements(r, p)
            assert dim == r
            assert all(len(S) == 1 for v in basis for S in v)
            assert all(is_primitive(v, r, p) for v in basis)
        assert primitive_elements_brute(2, p) == p**2
    x = {(0, 1): 1}
    assert not is_primitive(x, 2, 2)
    assert coproduct({(0,): 1}, 1)

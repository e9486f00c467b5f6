import random

import pytest
import sympy

from prismkit.errors import RingMismatch
from prismkit.ring import RingSpec, ring_make
from prismkit.witt import WittVector, p_times, polys_to_json, witt_FV, witt_op, witt_structure_polys


def _expr(poly):
    return sympy.expand(poly.as_expr())


def test_S1_p2():
    S, _ = witt_structure_polys(2, 2)
    x0, x1, y0, y1 = sympy.symbols("x0 x1 y0 y1")
    assert _expr(S[1]) == x1 + y1 - x0 * y0


def test_S1_p3():
    S, _ = witt_structure_polys(3, 2)
    x0, x1, y0, y1 = sympy.symbols("x0 x1 y0 y1")
    assert _expr(S[1]) == sympy.expand(x1 + y1 - (x0**2 * y0 + x0 * y0**2))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_degree_zero(p):
    S, P = witt_structure_polys(p, 1)
    x0, y0 = sympy.symbols("x0 y0")
    assert _expr(S[0]) == x0 + y0 and _expr(P[0]) == x0 * y0


def test_ghost_of_length_two():
    R = ring_make(RingSpec(3, 6))
    a = WittVector(R, [4, 7])
    assert a.ghost() == [R(4), R(4**3 + 3 * 7)]


def test_one_plus_one_over_F2():
    F2 = ring_make(RingSpec(2, 1))
    a = WittVector(F2, [1, 0])
    assert witt_op(a, a, "add") == WittVector(F2, [0, 1])


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 3), (3, 4)])
def test_ghost_homomorphism(p, n):
    r = random.Random(p * 10 + n)
    R = ring_make(RingSpec(p, 6))
    for _ in range(30):
        a = WittVector(R, [R.random(r) for _ in range(n)])
        b = WittVector(R, [R.random(r) for _ in range(n)])
        assert (a + b).ghost() == [x + y for x, y in zip(a.ghost(), b.ghost())]
        assert (a * b).ghost() == [x * y for x, y in zip(a.ghost(), b.ghost())]


@pytest.mark.parametrize("p", [2, 3])
def test_F_shifts_ghost_and_FV_is_p(p):
    r = random.Random(p)
    R = ring_make(RingSpec(p, 6))
    a = WittVector(R, [R.random(r) for _ in range(4)])
    assert witt_FV(a, "F").ghost() == a.ghost()[1:]
    assert witt_FV(a, "V").comps[0].is_zero()
    assert a.V().F().ghost() == [g * p for g in a.ghost()[:3]]


@pytest.mark.parametrize("p", [2, 3])
def test_VF_is_p_over_Fp(p):
    r = random.Random(p)
    Fp = ring_make(RingSpec(p, 1))
    for _ in range(10):
        a = WittVector(Fp, [Fp.random(r) for _ in range(3)])
        assert a.F().V() == p_times(a)


def test_mismatch():
    R = ring_make(RingSpec(2, 4))
    with pytest.raises(RingMismatch):
        WittVector(R, [1, 0]) + WittVector(R, [1, 0, 0])


def test_polys_json():
    obj = polys_to_json(2, 3)
    assert obj["S"][0] == "x0 + y0" and len(obj["P"]) == 3

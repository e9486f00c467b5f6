import random

import pytest

from prismkit.delta import DeltaRing, bk_prism, check_pth_root_lemma, delta_of, is_rank_one, prism_make, q_prism
from prismkit.errors import InvalidSpec, NotDistinguished, PrecisionExhausted
from prismkit.ring import RingSpec, ring_make


def test_delta_of_p():
    R = ring_make(RingSpec(2, 4))
    assert delta_of(R(2)) == R(15)
    R3 = ring_make(RingSpec(3, 6))
    assert delta_of(R3(3)) == R3(1 - 9)


def test_delta_E_p2(bk2):
    A = bk2.ring
    assert bk2.delta(bk2.d) == 2 * A.u - 3
    assert bk2.delta_ring.is_distinguished(bk2.d)


def test_delta_u_and_units(bk2):
    A = bk2.ring
    assert is_rank_one(A.u)
    assert delta_of(A.one).is_zero() and delta_of(A.zero).is_zero()


def test_u_squared_not_distinguished(bk2):
    A = bk2.ring
    with pytest.raises(NotDistinguished):
        prism_make(DeltaRing(A), A.u**2)


def test_not_in_catalog():
    A = ring_make(RingSpec(2, 6, M=8))
    with pytest.raises(InvalidSpec):
        prism_make(DeltaRing(A), A.u**2 + A.u - 2)  # distinguished, but not monic Eisenstein


def test_delta_needs_precision():
    R = ring_make(RingSpec(2, 1))
    with pytest.raises(PrecisionExhausted):
        delta_of(R(1))


def test_laws_on_catalog(catalog_prisms):
    r = random.Random(1)
    for P in catalog_prisms:
        D, R = P.delta_ring, P.ring
        for _ in range(25):
            rep = D.check_laws(R.random(r), R.random(r))
            assert rep["add"] and rep["mul"]


def test_frobenius_lift(catalog_prisms):
    r = random.Random(2)
    for P in catalog_prisms:
        R = P.ring
        for _ in range(20):
            x = R.random(r)
            assert (x.phi() - x**R.p).val([R(R.p)]) >= 1


def test_pth_root_lemma_examples():
    R = ring_make(RingSpec(2, 6))
    assert check_pth_root_lemma(R(3), 1)
    A = bk_prism(2, 6, 8).ring
    for n in range(5):
        assert check_pth_root_lemma(A.u, n)
    assert check_pth_root_lemma(A.u + 5, 0)


def test_pth_root_lemma_general():
    r = random.Random(3)
    P = bk_prism(3, 6, 8)
    for _ in range(10):
        x = P.ring.random(r)
        assert all(P.delta_ring.check_pth_root_lemma(x, n) for n in range(5))


def test_nygaard_generators():
    Q = q_prism(2, 6, 16, 0)
    R = Q.ring
    assert Q.nygaard_member(R.q - 1, 1)
    assert not Q.nygaard_member(R.one, 1)
    B = bk_prism(2, 6, 8)
    A = B.ring
    # phi(u - 4) = u^2 - 4 = (u - 2)(u + 2)
    assert B.nygaard_generator() == A.u - 4
    assert not B.nygaard_member(B.d, 1)

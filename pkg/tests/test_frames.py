import random

import pytest

from prismkit import matrix as mx
from prismkit.delta import bk_prism, crystalline_prism, q_prism
from prismkit.envelope import Envelope
from prismkit.errors import NonInvertiblePsi, NotMinuscule
from prismkit.frames import (
    BKModule,
    Window,
    bk_to_window,
    check_morphism_direct,
    envelope_frame,
    frame_from_prism,
    is_morphism,
    lift_phi_invariant,
    lift_window_hom,
    normal_decomposition,
    picard_fixed_point,
    picard_window_hom,
    random_filtered_automorphism,
    random_invertible,
    random_minuscule,
    random_window,
    transport,
    unit_window,
    window_check,
    window_from_normal,
    window_to_bk,
    witt_frame,
)

PRISMS = [crystalline_prism(2, 6), bk_prism(2, 6, 8), bk_prism(3, 6, 8), q_prism(2, 6, 16, 1), q_prism(3, 6, 16, 0)]
FRAMES = [frame_from_prism(P, fl) for P in PRISMS for fl in ("d", "nygaard")]


@pytest.mark.parametrize("F", FRAMES, ids=lambda F: F.name)
def test_frame_identity_and_unit_window(F):
    assert F.check(random.Random(0), 30)["pass"]
    assert window_check(unit_window(F))["all_pass"]


def test_crystalline_d_frame():
    F = frame_from_prism(crystalline_prism(3, 6), "d")
    R = F.ring
    assert F.phi1(R(3 * 7)) == R(7)
    good = Window(F, 0, [[R.one]], [[R.one]])
    assert window_check(good)["all_pass"]
    bad = Window(F, 0, [[R.one]], [[R(3)]])
    rep = window_check(bad)
    assert not rep["all_pass"] and not rep["generation_divided"]["pass"]


def test_witt_frame():
    F = witt_frame(2, 4)
    R = F.ring
    assert F.phi1(R(2 * 3)) == R(3)
    assert F.phi(R(6)) == F.coerce(F.varpi) * F.phi1(R(6))
    assert witt_frame(3, 1).check(random.Random(1), 5)["pass"]


@pytest.mark.parametrize("F", FRAMES, ids=lambda F: F.name)
def test_random_windows_and_normal_roundtrip(F):
    r = random.Random(hash(F.name) % 1000)
    for _ in range(3):
        h = r.randrange(1, 4)
        nL = r.randrange(h + 1)
        W = random_window(F, h, nL, r)
        assert window_check(W)["all_pass"]
        a = random_filtered_automorphism(F, h, nL, r)
        W2 = transport(W, a)
        nl, Psi = normal_decomposition(W2)
        W3 = window_from_normal(F, nl, Psi)
        assert W3.same_as(W2)
        assert is_morphism(a, W, W3)["pass"] and check_morphism_direct(a, W, W3)["pass"]


def test_identity_psi():
    F = frame_from_prism(bk_prism(2, 6, 8), "d")
    R = F.ring
    eye = mx.identity(R.zero, R.one, 2)
    W = window_from_normal(F, 1, eye)
    assert window_check(W)["all_pass"]
    assert W.phi1[0][0] == R.one and W.phi[1][1] == R.one


def test_non_invertible_psi():
    P = bk_prism(2, 6, 8)
    F = frame_from_prism(P, "d")
    with pytest.raises(NonInvertiblePsi):
        window_from_normal(F, 1, [[P.d]])


@pytest.mark.parametrize("P", PRISMS[:3] + [PRISMS[4]], ids=lambda P: P.kind + str(P.p))
def test_bk_roundtrip(P):
    r = random.Random(P.p)
    for _ in range(8):
        B = random_minuscule(P, r.randrange(1, 4), r)
        W, G = bk_to_window(B)
        assert window_check(W)["all_pass"]
        B2 = window_to_bk(W)
        assert mx.equal(B2.B, mx.mul(mx.mul(mx.inverse(G), B.B), mx.phi(G)))


def test_bk_examples():
    P = bk_prism(2, 6, 8)
    A = P.ring
    with pytest.raises(NotMinuscule):
        bk_to_window(BKModule(P, [[P.d**2]]))
    F = frame_from_prism(P, "d")
    mu = window_from_normal(F, 1, [[A.one]])
    assert window_to_bk(mu).B[0][0] == P.d


@pytest.fixture(scope="module")
def env_frame():
    P = bk_prism(2, 4, 4)
    return envelope_frame(Envelope(P, P.ring.u, 3))


def test_lift_phi_invariant(env_frame):
    F = env_frame
    A = F.env.A
    r = random.Random(4)
    m, _ = lift_phi_invariant(F, [[F.one]], [A.one])
    assert m[0] == F.one
    for _ in range(3):
        Phi = [[F.one + F.random_J(r, 1)]]
        m, wit = lift_phi_invariant(F, Phi, [A.one])
        assert Phi[0][0] * F.phi(m[0]) == m[0]
        assert F.reduce_J(m[0]) == F.one
        other = picard_fixed_point(F, Phi, [F.one + F.random_J(r, 1)])
        assert other[0] == m[0]


def test_lift_window_hom(env_frame):
    F = env_frame
    r = random.Random(9)
    for h in (1, 2):
        nL = r.randrange(h + 1)
        Psi = random_invertible(F, h, r)
        Psi_N = [[a + F.random_J(r, 1) for a in row] for row in Psi]
        WM, WN = window_from_normal(F, nL, Psi), window_from_normal(F, nL, Psi_N)
        eye = mx.identity(F.zero, F.one, h)
        al, wit = lift_window_hom(eye, WM, WN)
        assert is_morphism(al, WM, WN)["pass"] and check_morphism_direct(al, WM, WN)["pass"]
        assert wit["nilpotence_m"] >= 1
        assert mx.equal(al, picard_window_hom(eye, WM, WN))
        same, _ = lift_window_hom(eye, WM, WM)
        assert mx.equal(same, eye)

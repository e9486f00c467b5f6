import random

import pytest

from prismkit.delta import bk_prism
from prismkit.envelope import Envelope, envelope_build, envelope_delta, envelope_phi, nilpotence_certify, nilpotence_trace
from prismkit.errors import FrontierExceeded, NotRankOne, PrecisionExhausted


@pytest.fixture(scope="module", params=[2, 3])
def env(request):
    P = bk_prism(request.param, 6, 8)
    return Envelope(P, P.ring.u, 5)


def test_relations_p2():
    P = bk_prism(2, 6, 8)
    A = P.ring
    e = envelope_build(P, A.u, 2)
    # y_1^2 = phi(E) y_2 with phi(E) = u^2 - 2
    assert e.y(1) ** 2 == e.y(2) * (A.u**2 - 2)


def test_delta_of_first_generator_p2():
    P = bk_prism(2, 6, 8)
    A = P.ring
    e = Envelope(P, A.u, 3)
    dE = P.delta(P.d)
    assert dE == 2 * A.u - 3
    # x of rank 1 and z_0 = x/d force delta(z_0) = -delta(d) z_1
    assert envelope_delta(e.y(1)) == -(e.y(2) * dE)
    assert envelope_delta(e.y(1)) != e.y(2) * dE


def test_generators(env):
    p, d = env.p, env.prism.d
    for n in range(env.K - 1):
        z = env.z(n)
        coef = (d ** (p ** (n + 1)) - env.phi_d[n + 1]).div_exact(p)
        assert z.delta() == env.z(n + 1) * coef
        assert envelope_phi(z) == z**p + p * z.delta()
        assert z.phi() == env.z(n + 1) * d ** (p ** (n + 1))
        assert z.phi() == z.phi1() * d


def test_base_elements(env):
    r = random.Random(3)
    for _ in range(5):
        a = env.A.random(r)
        assert env.const(a).delta() == env.const(env.prism.delta(a))
    x = env.const(env.x)
    assert x.phi() == x**env.p


def test_frontier(env):
    with pytest.raises(FrontierExceeded):
        env.z(env.K - 1).delta()
    with pytest.raises(FrontierExceeded):
        env.z(env.K)


def test_not_rank_one():
    P = bk_prism(2, 6, 8)
    with pytest.raises(NotRankOne):
        Envelope(P, P.ring.u + 1, 2)


def test_random_consistency_and_laws(env):
    r = random.Random(11)
    p = env.p
    checked = 0
    for _ in range(25):
        a, b = env.random(r), env.random(r)
        try:
            da, db = a.delta(), b.delta()
            assert a.phi() == a**p + p * da
            assert (a * b).delta() == a**p * db + b**p * da + p * da * db
            checked += 1
        except FrontierExceeded:
            pass
    assert checked > 10


def test_nilpotence(env):
    rows = nilpotence_trace(env, 4)
    assert len(rows) == 10 and all(r["bound_met"] for r in rows)
    m, trace = nilpotence_certify(env, 3)
    assert m >= 1 and trace
    assert nilpotence_certify(env, 0) == (0, [])
    with pytest.raises(PrecisionExhausted):
        nilpotence_certify(env, env.A.default_cap() + 1)


def test_certify_example_p2():
    P = bk_prism(2, 6, 8)
    e = Envelope(P, P.ring.u, 5)
    rows = {(r["n"], r["m"]): r for r in nilpotence_trace(e, 4)}
    assert rows[(0, 2)]["bound"] == 3 and rows[(0, 2)]["val"] >= 3

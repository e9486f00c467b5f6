import random

import pytest

from prismkit.errors import IncompatibleRoots, NotInUnitNygaard, NotRankOne, TailNotNegligible
from prismkit.qprism import QContext, q_power
from prismkit.ring import AtLeast


@pytest.fixture(scope="module", params=[(2, 0), (2, 1), (3, 0), (3, 1)])
def ctx(request):
    p, s = request.param
    return QContext(p, 6, 16, s)


def test_q_integers(ctx):
    R = ctx.ring
    for n in range(1, 3 * ctx.p + 1):
        assert ctx.q**n - 1 == ctx.mu * ctx.q_int(n)
    assert ctx.q_factorial(2) == R.one + ctx.q
    # [p]_q is congruent to p modulo q - 1
    assert R.in_ideal(ctx.d - ctx.p, [ctx.mu])


def test_xi(ctx):
    if ctx.depth == 0:
        return
    assert ctx.xi.phi() == ctx.xi_tilde
    assert ctx.nygaard_member(ctx.xi, 1)


def test_log_of_one_and_q(ctx):
    l1, c1 = ctx.q_log(ctx.ring.one)
    assert l1.is_zero() and isinstance(c1.valuation, AtLeast)
    lq, _ = ctx.q_log(ctx.q)
    assert lq == ctx.mu
    l0, _ = ctx.q_log(ctx.ring.one, terms=0)
    assert l0.is_zero()


def test_log_of_powers(ctx):
    for b in (2, -1, 5, -7):
        lg, cert = ctx.q_log(q_power(ctx, b))
        assert lg == b * ctx.mu
        assert cert.index == ctx.Q + 1
        assert ctx.nygaard_member(lg, 1)


def test_eigen_relation(ctx):
    r = random.Random(ctx.p + ctx.depth)
    for _ in range(4):
        assert ctx.frobenius_eigen_check(q_power(ctx, r.randrange(-20, 21)))


def test_rejections(ctx):
    R = ctx.ring
    with pytest.raises(NotRankOne):
        ctx.q_log(R.one + ctx.p * ctx.mu)
    with pytest.raises(NotInUnitNygaard):
        ctx.q_log(R.zero)  # rank 1, but -1 is not in N^1


def test_short_series_is_not_certified():
    ctx = QContext(2, 6, 16, 0)
    with pytest.raises(TailNotNegligible):
        ctx.q_log(q_power(ctx, 3), terms=2)


def test_divided_log():
    ctx = QContext(2, 6, 16, 1)
    R = ctx.ring
    assert ctx.divided_q_log([R.one, R.one])[0].is_zero()
    lg, _ = ctx.divided_q_log([R.one, ctx.q, R.qs])
    assert lg == ctx.mu
    with pytest.raises(IncompatibleRoots):
        ctx.divided_q_log([R.one, ctx.q, R.qs + 2])

import random

import pytest

from prismkit import matrix as mx
from prismkit.delta import bk_prism, crystalline_prism, q_prism
from prismkit.dmodules import (
    DieudonneModule,
    dm_check,
    dual,
    exactness_check,
    fdm_check,
    fil_lattice,
    forget_filtration,
    hermite_local,
    isogeny_cokernel,
    random_module,
    refill_perfect,
    standard_module,
    torsion_check,
)
from prismkit.errors import NonIntegralDual


@pytest.fixture(params=[2, 3])
def crys(request):
    return crystalline_prism(request.param, 6)


def test_rank_one_examples(crys):
    p = crys.p
    assert dm_check(DieudonneModule(crys, [[p]]))["all_pass"]
    assert dm_check(DieudonneModule(crys, [[1]]))["all_pass"]
    bad = DieudonneModule(crys, [[p * p]])
    assert not dm_check(bad)["all_pass"]
    with pytest.raises(NonIntegralDual):
        dual(bad)


@pytest.mark.parametrize("P", [bk_prism(2, 6, 8), q_prism(3, 6, 16, 0), crystalline_prism(3, 6)], ids=lambda P: P.kind)
def test_standard_and_dual(P):
    for h in (1, 2):
        E = standard_module("etale", P, h)
        Mu = standard_module("multiplicative", P, h)
        assert dm_check(E)["all_pass"] and dm_check(Mu)["all_pass"]
        assert mx.equal(dual(E).phi, Mu.phi) and mx.equal(dual(Mu).phi, E.phi)
    assert fdm_check(standard_module("mu_filtered", P))["all_pass"]
    r = random.Random(3)
    for _ in range(5):
        D = random_module(P, r.randrange(1, 4), r)
        assert dm_check(D)["all_pass"]
        assert mx.equal(dual(dual(D)).phi, D.phi)


def test_qpzp_filtered_needs_perfect():
    assert fdm_check(standard_module("qpzp_filtered", crystalline_prism(2, 6)))["all_pass"]
    with pytest.raises(Exception):
        standard_module("qpzp_filtered", bk_prism(2, 6, 8))


def test_isogeny_cokernel(crys):
    p = crys.p
    R = crys.ring
    E = standard_module("etale", crys)
    Mu = standard_module("multiplicative", crys)
    Te = isogeny_cokernel([[R(p)]], E, E)
    Tm = isogeny_cokernel([[R(p)]], Mu, Mu)
    for T, D in ((Te, E), (Tm, Mu)):
        assert torsion_check(T)["all_pass"]
        assert T.invariants() == [p] and T.length() == 1
        assert exactness_check([[R(p)]], [[R.one]], D, D, T)["all_pass"]
    assert int(Te.phi[0][0].constant()) % p == 1 and int(Te.psi[0][0].constant()) % p == 0
    assert int(Tm.phi[0][0].constant()) % p == 0 and int(Tm.psi[0][0].constant()) % p == 1


def test_split_sequence(crys):
    p = crys.p
    Dp = DieudonneModule(crys, [[p]])
    D = DieudonneModule(crys, [[p, 0], [0, 1]])
    Dpp = DieudonneModule(crys, [[1]])
    assert exactness_check([[1], [0]], [[0, 1]], Dp, D, Dpp)["all_pass"]
    # a map that is not phi-equivariant
    assert not exactness_check([[0], [1]], [[1, 0]], Dp, D, Dpp)["all_pass"]


def test_refill(crys):
    p = crys.p
    for kind in ("mu_filtered", "qpzp_filtered"):
        F = standard_module(kind, crys)
        assert fil_lattice(refill_perfect(forget_filtration(F))) == fil_lattice(F)
    Fd = refill_perfect(DieudonneModule(crys, [[1, 0], [0, p]]))
    assert Fd.nL == 1
    assert fil_lattice(Fd) == hermite_local([[p, 0], [0, 1]], p, 6)
    assert fdm_check(Fd)["all_pass"]

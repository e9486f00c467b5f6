"""Witt vectors of finite length with structure polynomials from ghost components."""
from __future__ import annotations

from functools import lru_cache

from sympy import ZZ
from sympy.polys.rings import ring as poly_ring

from .errors import InvalidSpec, RingMismatch
from .ring import Element, Ring


@lru_cache(maxsize=None)
def _witt_ring(p: int, n: int):
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)]
    R, *gens = poly_ring(",".join(names), ZZ)
    return R, gens[:n], gens[n:]


def _ghost(p, comps, k):
    return sum(p**i * comps[i] ** (p ** (k - i)) for i in range(k + 1))


def _solve_ghost(p, target, known):
    # target = sum_{i<=k} p^i S_i^{p^{k-i}}; peel off known S_0..S_{k-1}
    k = len(known)
    rest = target - sum(p**i * known[i] ** (p ** (k - i)) for i in range(k))
    q = rest.quo_ground(p**k)
    if q * p**k != rest:
        raise AssertionError(f"ghost recursion not integral at level {k}")
    return q


@lru_cache(maxsize=None)
def witt_structure_polys(p: int, n: int):
    """Sum and product polynomials S_0..S_{n-1}, P_0..P_{n-1} over Z.

    Returned as sympy PolyElements in x0..x_{n-1}, y0..y_{n-1}.
    """
    if n < 1:
        raise InvalidSpec("Witt length must be >= 1")
    if n > 5:
        raise InvalidSpec("Witt length is limited to 5")
    R, xs, ys = _witt_ring(p, n)
    S, P = [], []
    for k in range(n):
        wx = _ghost(p, xs, k)
        wy = _ghost(p, ys, k)
        S.append(_solve_ghost(p, wx + wy, S))
        P.append(_solve_ghost(p, wx * wy, P))
    return tuple(S), tuple(P)


def polys_to_json(p: int, n: int) -> dict:
    S, P = witt_structure_polys(p, n)
    return {"p": p, "length": n, "S": [str(s.as_expr()) for s in S], "P": [str(q.as_expr()) for q in P]}


def _evaluate(poly, values, one):
    """Evaluate an integer PolyElement on ring elements."""
    R = one.ring
    if not R.M and not R.Q:
        # Z/p^N: plain integer arithmetic at the least guaranteed precision
        g = min([v.g for v in values] + [one.g])
        mod = R.p**g
        ints = [v.constant() % mod for v in values]
        acc = 0
        for monom, coeff in poly.terms():
            term = int(coeff)
            for idx, e in enumerate(monom):
                if e:
                    term = term * pow(ints[idx], e, mod) % mod
            acc += term
        return R(acc % mod).lowered(g)
    out = one * 0
    cache = {}
    for monom, coeff in poly.terms():
        term = one * int(coeff)
        for idx, e in enumerate(monom):
            if e:
                key = (idx, e)
                if key not in cache:
                    cache[key] = values[idx] ** e
                term = term * cache[key]
        out = out + term
    return out


class WittVector:
    """(x_0, ..., x_{n-1}) with entries in a working ring."""

    def __init__(self, ring: Ring, comps):
        self.ring = ring
        self.comps = tuple(ring(c) for c in comps)
        if not self.comps:
            raise InvalidSpec("empty Witt vector")

    @property
    def perfect(self) -> bool:
        """Base of characteristic p (N = 1): there F is (x_i) -> (x_i^p)."""
        return self.ring.N == 1

    @property
    def length(self) -> int:
        return len(self.comps)

    def _check(self, other: "WittVector"):
        if other.ring is not self.ring or other.length != self.length:
            raise RingMismatch("Witt vectors differ in base or length")

    def ghost(self) -> list[Element]:
        p = self.ring.p
        return [_ghost(p, self.comps, k) for k in range(self.length)]

    def _apply(self, polys, other):
        vals = list(self.comps) + list(other.comps)
        n = self.length
        # the polynomials were built for length n, so the variable layout matches
        return WittVector(self.ring, [_evaluate(f, vals, self.ring.one) for f in polys[:n]])

    def __add__(self, other):
        self._check(other)
        S, _ = witt_structure_polys(self.ring.p, self.length)
        return self._apply(S, other)

    def __mul__(self, other):
        self._check(other)
        _, P = witt_structure_polys(self.ring.p, self.length)
        return self._apply(P, other)

    def V(self) -> "WittVector":
        return WittVector(self.ring, (self.ring.zero,) + self.comps[:-1])

    def F(self) -> "WittVector":
        """Frobenius.  Over a general base the result has one component fewer."""
        p = self.ring.p
        n = self.length
        if self.perfect:
            return WittVector(self.ring, [c**p for c in self.comps])
        if n < 2:
            raise InvalidSpec("F needs length >= 2 over a non-perfect base")
        # F_k is the polynomial with w_k(F x) = w_{k+1}(x)
        polys = _frobenius_polys(p, n - 1)
        return WittVector(self.ring, [_evaluate(f, list(self.comps), self.ring.one) for f in polys])

    def truncate(self, n: int) -> "WittVector":
        return WittVector(self.ring, self.comps[:n])

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and other.length == self.length
            and all(a == b for a, b in zip(self.comps, other.comps))
        )

    __hash__ = None

    def __repr__(self):
        return "W(" + ", ".join(repr(c) for c in self.comps) + ")"


@lru_cache(maxsize=None)
def _frobenius_polys(p: int, m: int):
    R, xs, _ = _witt_ring(p, m + 1)
    F = []
    for k in range(m):
        F.append(_solve_ghost(p, _ghost(p, xs, k + 1), F))
    return tuple(F)


def witt_op(a: WittVector, b: WittVector, op: str) -> WittVector:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise InvalidSpec(f"unknown Witt operation {op!r}")


def witt_FV(a: WittVector, op: str) -> WittVector:
    if op == "F":
        return a.F()
    if op == "V":
        return a.V()
    raise InvalidSpec(f"unknown Witt operator {op!r}")


def p_times(a: WittVector) -> WittVector:
    """p * a computed with the structure polynomials (p = 1 + ... + 1)."""
    ones = WittVector(a.ring, [a.ring.one] + [a.ring.zero] * (a.length - 1))
    total = ones
    for _ in range(a.ring.p - 1):
        total = total + ones
    return total * a


__all__ = ["WittVector", "witt_structure_polys", "witt_op", "witt_FV", "polys_to_json", "p_times"]

"""q-integers, Nygaard membership and the q-logarithm over Z_p[[q_s - 1]]."""
from __future__ import annotations

from dataclasses import dataclass

from .delta import Prism, q_integer, q_prism
from .errors import (
    IncompatibleRoots,
    InvalidSpec,
    NotInUnitNygaard,
    NotRankOne,
    TailNotNegligible,
)
from .linalg import vp
from .ring import AtLeast, Element, Ring, RingSpec, ring_make


def _t_valuation_mod_p(p: int, depth: int, n: int) -> int:
    """t-adic valuation of [n]_q modulo p, where q = (1 + t)^(p^depth)."""
    return p**depth * (p ** vp(n, p, 64) - 1)


@dataclass
class Certificate:
    index: int
    valuation: object

    def to_json(self) -> dict:
        v = self.valuation
        return {"index": self.index, "valuation": str(v) if isinstance(v, AtLeast) else int(v)}


class QContext:
    """The q-prism Z_p[[q_s - 1]] with q = q_s^(p^s), truncated at (p^N, (q_s - 1)^Q)."""

    def __init__(self, p: int, N: int, Q: int, depth: int = 0):
        self.prism: Prism = q_prism(p, N, Q, depth)
        self.ring: Ring = self.prism.ring
        self.p, self.N, self.Q, self.depth = p, N, Q, depth

    def __repr__(self):
        return f"QContext(p={self.p}, N={self.N}, Q={self.Q}, depth={self.depth})"

    @property
    def q(self) -> Element:
        return self.ring.q

    @property
    def mu(self) -> Element:
        return self.ring.q - 1

    @property
    def d(self) -> Element:
        return self.prism.d

    xi_tilde = d

    @property
    def xi(self) -> Element:
        if self.depth < 1:
            raise InvalidSpec("xi = [p]_{q_1} needs depth >= 1")
        return self.prism.nygaard_generator()

    def q_int(self, n: int) -> Element:
        if n < 0:
            raise InvalidSpec("[n]_q needs n >= 0")
        return q_integer(self.ring, n)

    def q_factorial(self, n: int) -> Element:
        out = self.ring.one
        for k in range(1, n + 1):
            out = out * self.q_int(k)
        return out

    def nygaard_member(self, x, i: int = 1) -> bool:
        return self.prism.nygaard_member(x, i)

    # -- q-logarithm ---------------------------------------------------
    def _guard_ring(self, K: int) -> Ring:
        # dividing by [n]_q (= unit * t^D mod p) can blur up to N*D low digits of t
        extra = max((_t_valuation_mod_p(self.p, self.depth, n) for n in range(1, K + 1)), default=0)
        return ring_make(RingSpec(self.p, self.N, Q=self.Q + self.N * extra, depth=self.depth))

    def _check_input(self, x: Element):
        if not self.prism.delta_ring.is_rank_one(x):
            raise NotRankOne(f"{x} is not of rank 1")
        if not self.nygaard_member(x - 1, 1):
            raise NotInUnitNygaard(f"{x} is not in 1 + N^(>=1)")

    def q_exponent(self, x) -> int | None:
        """Some b >= 0 with q^b == x in the working ring, or None."""
        x = self.ring(x)
        R, p, s = self.ring, self.p, self.depth
        if s >= R.N:
            return None
        # q^b = (1 + t)^(b p^s), so the t-coefficient pins b modulo p^(N-s)
        c1 = x.coeff(0, 1) if R.Q > 1 else 0
        if c1 % p**s:
            return None
        step = p ** (R.N - s)
        b = (c1 // p**s) % step
        cur = self.q**b
        jump = self.q**step
        bound = p ** (s + R.Q.bit_length() + 2)
        for j in range(bound):
            if cur == x:
                return b + j * step
            cur = cur * jump
        return None

    def _exact_lift(self, x: Element, G: Ring) -> Element:
        # the series amplifies low t-digits, so x must be known exactly
        # beyond the working truncation: rebuild q^b when possible
        b = self.q_exponent(x)
        if b is not None:
            return G.q**b
        return x.lift_to(G)

    def q_log_terms(self, x, K: int):
        """The first K series terms, computed in a guard ring and projected."""
        x = self.ring(x)
        G = self._guard_ring(K)
        xg = self._exact_lift(x, G)
        q = G.q
        qinv = q.inverse()
        terms = []
        prod = G.one  # (x - 1)(x - q)...(x - q^(n-1))
        qpow = G.one  # q^(n-1)
        twist = G.one  # q^(-n(n-1)/2)
        for n in range(1, K + 1):
            prod = prod * (xg - qpow)
            if n > 1:
                twist = twist * qinv ** (n - 1)
            term = (prod * twist).div_exact(q_integer(G, n))
            if n % 2 == 0:
                term = -term
            terms.append(term.reduce_to(self.ring))
            qpow = qpow * q
        return terms

    def q_log(self, x, terms: int | None = None, check: bool = True):
        """Return (log_q(x), certificate).

        The certificate names the first omitted term and its valuation in
        (p, q_s - 1); it must reach the default cap, i.e. vanish in the
        working ring.
        """
        x = self.ring(x)
        K = self.Q if terms is None else terms
        if K < 0:
            raise InvalidSpec("number of terms must be >= 0")
        if check:
            self._check_input(x)
        series = self.q_log_terms(x, K + 1)
        gens = [self.ring(self.p), self.ring.t]
        cap = self.ring.default_cap()
        v = self.ring.val(series[K], gens, cap)
        if not isinstance(v, AtLeast):
            raise TailNotNegligible(f"term {K + 1} has valuation {v} < {cap}")
        out = self.ring.zero
        for term in series[:K]:
            out = out + term
        if check:
            assert self.nygaard_member(out, 1), "q_log left N^(>=1)"
        return out, Certificate(K + 1, v)

    def frobenius_eigen_check(self, x) -> bool:
        lg, _ = self.q_log(x)
        return lg.phi() == self.d * lg

    def divided_q_log(self, roots):
        """q_log of the first root of a compatible root system (x_0, x_1, ..., x_s).

        Requires x_{k+1}^p = x_k exactly for k >= 1 and x_1^p = x_0 = 1 modulo d.
        """
        roots = [self.ring(r) for r in roots]
        if len(roots) < 2:
            raise InvalidSpec("a root system needs at least x_0 and x_1")
        p = self.p
        for k in range(1, len(roots) - 1):
            if roots[k + 1] ** p != roots[k]:
                raise IncompatibleRoots(f"x_{k + 1}^p != x_{k}")
        R = self.ring
        if not R.in_ideal(roots[0] - 1, [self.d]) or not R.in_ideal(roots[1] ** p - roots[0], [self.d]):
            raise IncompatibleRoots("x_1^p and x_0 must both be 1 modulo d")
        for r in roots:
            if not self.prism.delta_ring.is_rank_one(r):
                raise NotRankOne(f"{r} is not of rank 1")
        return self.q_log(roots[1])


def q_power(ctx: QContext, b: int) -> Element:
    """q^b for any integer b."""
    if b >= 0:
        return ctx.q**b
    return (ctx.q ** (-b)).inverse()

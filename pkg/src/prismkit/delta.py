"""delta-rings on the working rings, and the oriented prism catalog."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from sympy import Poly, resultant, symbols

from .errors import InvalidSpec, NotDistinguished, PrecisionExhausted
from .linalg import vp
from .ring import Element, Ring, RingSpec, ring_make


class DeltaRing:
    """A working ring with its coordinate Frobenius lift.

    phi fixes the coefficients and raises the variables to the p-th power;
    on Z/p^N it is the identity.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self.p = ring.p

    def __repr__(self):
        return f"DeltaRing({self.ring})"

    def phi(self, x) -> Element:
        return self.ring(x).phi()

    def phi_iter(self, x, n: int) -> Element:
        x = self.ring(x)
        for _ in range(n):
            x = x.phi()
        return x

    def delta(self, x) -> Element:
        x = self.ring(x)
        if x.g < 2:
            raise PrecisionExhausted("delta needs guaranteed precision >= 2")
        return (x.phi() - x**self.p).div_exact(self.p)

    def is_rank_one(self, x) -> bool:
        d = self.delta(x)
        ok = d.is_zero()
        if ok:
            x = self.ring(x)
            assert x.phi() == x**self.p
        return ok

    def is_distinguished(self, x) -> bool:
        return self.delta(x).is_unit()

    def sum_correction(self, x, y) -> Element:
        """(x^p + y^p - (x+y)^p)/p written with integer coefficients."""
        p = self.p
        x, y = self.ring(x), self.ring(y)
        out = self.ring.zero
        for i in range(1, p):
            out = out - (x**i * y ** (p - i)) * (comb(p, i) // p)
        return out

    def check_laws(self, x, y) -> dict:
        """Both delta-ring identities for one pair, evaluated at precision g-1."""
        x, y = self.ring(x), self.ring(y)
        p = self.p
        dx, dy = self.delta(x), self.delta(y)
        add_ok = self.delta(x + y) == dx + dy + self.sum_correction(x, y)
        mul_ok = self.delta(x * y) == x**p * dy + y**p * dx + p * dx * dy
        return {"add": bool(add_ok), "mul": bool(mul_ok)}

    def check_pth_root_lemma(self, x, n: int) -> bool:
        """val(delta(x^(p^n)), (p)) >= n."""
        if n == 0:
            return True
        if n > self.ring.N - 1:
            raise InvalidSpec(f"level n={n} exceeds N-1={self.ring.N - 1}")
        x = self.ring(x)
        return self.delta(x ** (self.p**n)).val([self.ring(self.p)]) >= n


def delta_of(x: Element, D: DeltaRing | None = None) -> Element:
    D = D or DeltaRing(x.ring)
    return D.delta(x)


def is_rank_one(x: Element) -> bool:
    return DeltaRing(x.ring).is_rank_one(x)


def is_distinguished(x: Element) -> bool:
    return DeltaRing(x.ring).is_distinguished(x)


def check_pth_root_lemma(x: Element, n: int) -> bool:
    return DeltaRing(x.ring).check_pth_root_lemma(x, n)


def q_integer(ring: Ring, n: int, q: Element | None = None) -> Element:
    """[n]_q = 1 + q + ... + q^(n-1); q defaults to the ring's q."""
    q = ring.q if q is None else q
    out = ring.zero
    power = ring.one
    for _ in range(n):
        out = out + power
        power = power * q
    return out


@dataclass
class Prism:
    """An oriented prism from the catalog: (Z_p, p), (Z_p[[u]], E), (Z_p[[q_s - 1]], [p]_q)."""

    delta_ring: DeltaRing
    d: Element
    kind: str  # "crys", "bk" or "q"
    eisenstein: tuple = ()  # integer coefficients of E, constant term first
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ring(self) -> Ring:
        return self.delta_ring.ring

    @property
    def p(self) -> int:
        return self.ring.p

    def phi(self, x) -> Element:
        return self.delta_ring.phi(x)

    def delta(self, x) -> Element:
        return self.delta_ring.delta(x)

    @property
    def perfect(self) -> bool:
        return self.kind == "crys"

    def nygaard_generator(self) -> Element:
        """Generator of N^{>=1} = phi^{-1}((d))."""
        if "nyg" in self.cache:
            return self.cache["nyg"]
        R = self.ring
        if self.kind == "crys":
            n = R(self.p)
        elif self.kind == "q":
            # Phi_{p^s}(q_s): q - 1 at depth 0, [p]_{q_1} at depth s >= 1
            if R.depth == 0:
                n = R.q - 1
            else:
                q1 = R.qs ** (self.p ** (R.depth - 1))
                n = q_integer(R, self.p, q1)
        else:
            # the polynomial whose roots are the p-th powers of the roots of E
            v, w = symbols("v w")
            E = Poly(list(reversed(self.eisenstein)), v)
            G = Poly(resultant(E.as_expr(), w - v**self.p, v), w)
            coeffs = G.all_coeffs()[::-1]
            sign = 1 if coeffs[-1] > 0 else -1
            n = R.from_coeffs({(i, 0): sign * int(c) for i, c in enumerate(coeffs)})
        self.cache["nyg"] = n
        return n

    def nygaard_c(self) -> Element:
        """phi(n)/d for the Nygaard generator n."""
        if "nyg_c" not in self.cache:
            self.cache["nyg_c"] = self.phi(self.nygaard_generator()).div_exact(self.d)
        return self.cache["nyg_c"]

    def nygaard_member(self, x, i: int = 1) -> bool:
        """phi(x) in (d)^i, decided in the working ring."""
        x = self.ring(x)
        if i <= 0:
            return True
        v = self.ring.val(x.phi(), [self.d], cap=i)
        return v >= i

    def describe(self) -> dict:
        out = {"kind": self.kind, "ring": self.ring.spec.to_json()}
        if self.kind == "bk":
            out["E"] = list(self.eisenstein)
        return out


def _eisenstein_coeffs(d: Element):
    """Integer coefficient list of d as a u-polynomial, if it is Eisenstein."""
    R = d.ring
    if R.Q or not R.M:
        return None
    p = R.p
    coeffs = [int(d.c[i, 0]) for i in range(R.M)]
    if vp(coeffs[0], p, d.g) != 1:
        return None
    for e, c in enumerate(coeffs):
        if e and c % p:
            top = e
            break
    else:
        return None
    if any(coeffs[top + 1 :]):
        return None
    lead = coeffs[top]
    if lead != 1:
        return None
    # centre the residues so that E = u - p reads as (-p, 1)
    mod = R.mod
    return tuple(c - mod if c > mod // 2 else c for c in coeffs[: top + 1])


def prism_make(D: DeltaRing, d) -> Prism:
    R = D.ring
    d = R(d)
    if d.g < 2:
        raise PrecisionExhausted("prism construction needs precision >= 2")
    if not D.is_distinguished(d):
        raise NotDistinguished(f"delta({d}) is not a unit")
    if not R.M and not R.Q and d == R(R.p):
        return Prism(D, d, "crys")
    if R.Q and not R.M and d == q_integer(R, R.p):
        return Prism(D, d, "q")
    E = _eisenstein_coeffs(d)
    if E is not None:
        return Prism(D, d, "bk", E)
    raise InvalidSpec(f"{d} is not in the prism catalog (p, monic Eisenstein E(u), [p]_q)")


def crystalline_prism(p: int, N: int) -> Prism:
    R = ring_make(RingSpec(p, N))
    return prism_make(DeltaRing(R), R(p))


def bk_prism(p: int, N: int, M: int, E=None) -> Prism:
    """(Z_p[[u]], E) with E given by integer coefficients (default u - p)."""
    R = ring_make(RingSpec(p, N, M=M))
    E = (-p, 1) if E is None else tuple(E)
    return prism_make(DeltaRing(R), R.from_coeffs({(i, 0): c for i, c in enumerate(E)}))


def q_prism(p: int, N: int, Q: int, depth: int = 0) -> Prism:
    R = ring_make(RingSpec(p, N, Q=Q, depth=depth))
    return prism_make(DeltaRing(R), q_integer(R, p))


def prism_from_json(obj: dict) -> Prism:
    kind = obj.get("kind", "crys")
    spec = RingSpec.from_json(obj.get("ring", obj))
    if kind == "crys":
        return crystalline_prism(spec.p, spec.N)
    if kind == "bk":
        return bk_prism(spec.p, spec.N, spec.M or 8, obj.get("E"))
    if kind == "q":
        return q_prism(spec.p, spec.N, spec.Q or 16, spec.depth)
    raise InvalidSpec(f"unknown prism kind {kind!r}")

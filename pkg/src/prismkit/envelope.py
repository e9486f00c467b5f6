"""Depth-K model of the prismatic envelope A{x/d}.

Generators are indexed from zero: z_n stands for x^(p^n) divided by
phi^n(d) phi^(n-1)(d)^p ... d^(p^n), so z_0 = x/d.  The one-based names
y_n = z_(n-1) are accepted by :meth:`Envelope.y`.

The model ring is A[z_0, ..., z_(K-1)] modulo z_n^p = phi^(n+1)(d) z_(n+1).
Normal forms have every exponent below p.  Rewriting z_(K-1)^p needs z_K,
which is past the frontier; it is refused unless its coefficient vanishes.
The relation x = d z_0 is recorded but not imposed, so the model is a free
A-module on the normal monomials.
"""
from __future__ import annotations

from itertools import product as iproduct
from math import comb

from .delta import Prism
from .errors import FrontierExceeded, InvalidSpec, NotDivisible, NotRankOne, PrecisionExhausted
from .ring import AtLeast, Element


class Envelope:
    def __init__(self, prism: Prism, x: Element, K: int):
        if K < 1:
            raise InvalidSpec("envelope depth K must be >= 1")
        A = prism.ring
        x = A(x)
        if not prism.delta_ring.is_rank_one(x):
            raise NotRankOne(f"{x} is not of rank 1")
        self.prism = prism
        self.A = A
        self.p = A.p
        self.x = x
        self.K = K
        d = prism.d
        p = self.p
        self.phi_d = [d]  # phi^n(d)
        for _ in range(K):
            self.phi_d.append(self.phi_d[-1].phi())
        self.d_pow = [d]  # d^(p^n)
        for _ in range(K):
            self.d_pow.append(self.d_pow[-1] ** p)
        self.delta_coef = []
        for n in range(K):
            try:
                self.delta_coef.append((self.d_pow[n + 1] - self.phi_d[n + 1]).div_exact(p))
            except (NotDivisible, PrecisionExhausted) as exc:
                raise PrecisionExhausted(f"delta-table entry {n} is not exact: {exc}") from exc
        self.phi_coef = self.d_pow[1:]  # phi(z_n) = d^(p^(n+1)) z_(n+1)
        self.phi1_coef = [d ** (p ** (n + 1) - 1) for n in range(K)]

    def __repr__(self):
        return f"Envelope({self.A}, d={self.prism.d}, x={self.x}, K={self.K})"

    # -- elements ------------------------------------------------------
    def _unit_exp(self, n: int) -> tuple:
        e = [0] * self.K
        e[n] = 1
        return tuple(e)

    def element(self, terms: dict) -> "EnvElement":
        return EnvElement(self, terms)

    def const(self, a) -> "EnvElement":
        return EnvElement(self, {(0,) * self.K: self.A(a)})

    def z(self, n: int) -> "EnvElement":
        if not 0 <= n < self.K:
            raise FrontierExceeded(f"z_{n} is outside depth {self.K}")
        return EnvElement(self, {self._unit_exp(n): self.A.one})

    def y(self, n: int) -> "EnvElement":
        """One-based alias: y_n = z_(n-1)."""
        return self.z(n - 1)

    @property
    def zero(self):
        return EnvElement(self, {})

    @property
    def one(self):
        return self.const(1)

    def basis(self):
        return list(iproduct(range(self.p), repeat=self.K))

    def random(self, rng, max_degree: int = 2, n_terms: int = 3) -> "EnvElement":
        terms = {}
        for _ in range(n_terms):
            e = [0] * self.K
            for _ in range(rng.randrange(max_degree + 1)):
                e[rng.randrange(max(self.K - 1, 1))] += 1
            mono = self.one
            for i, k in enumerate(e):
                for _ in range(k):
                    mono = mono * self.z(i)
            terms_el = mono * self.A.random(rng)
            for m, c in terms_el.terms.items():
                terms[m] = terms.get(m, self.A.zero) + c
        return EnvElement(self, terms)

    # -- monomial arithmetic ------------------------------------------
    def _mono_mul(self, e1: tuple, e2: tuple, coeff: Element) -> dict:
        """coeff * z^e1 * z^e2 reduced to normal form."""
        p = self.p
        e = [a + b for a, b in zip(e1, e2)]
        for n in range(self.K):
            if e[n] >= p:
                carry, e[n] = divmod(e[n], p)
                coeff = coeff * self.phi_d[n + 1] ** carry
                if n + 1 == self.K:
                    if not coeff.is_zero():
                        raise FrontierExceeded(f"z_{self.K - 1}^{p} needs z_{self.K}")
                    return {}
                e[n + 1] += carry
        return {tuple(e): coeff}

    def table(self) -> dict:
        """delta, phi and phi_1 tables on generators, for reports."""
        out = []
        for n in range(self.K):
            out.append(
                {
                    "z": n,
                    "phi_coeff": self.phi_coef[n].to_json(),
                    "delta_coeff": self.delta_coef[n].to_json(),
                    "phi1_coeff": self.phi1_coef[n].to_json(),
                    "rewrite": self.phi_d[n + 1].to_json(),
                }
            )
        return {"K": self.K, "x": self.x.to_json(), "d": self.prism.d.to_json(), "generators": out}


class EnvElement:
    __slots__ = ("env", "terms")

    def __init__(self, env: Envelope, terms: dict):
        self.env = env
        clean = {}
        for m, c in terms.items():
            c = env.A(c)
            # a zero known only modulo p^g still carries information
            if not c.is_zero() or c.g < env.A.N:
                clean[tuple(m)] = c
        self.terms = clean

    # -- ring structure ------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, EnvElement):
            if other.env is not self.env:
                raise InvalidSpec("elements of different envelopes")
            return other
        return self.env.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return EnvElement(self.env, out)

    __radd__ = __add__

    def __neg__(self):
        return EnvElement(self.env, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Element)):
            a = self.env.A(other)
            return EnvElement(self.env, {m: c * a for m, c in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, c in self.env._mono_mul(m1, m2, c1 * c2).items():
                    out[m] = out[m] + c if m in out else c
        return EnvElement(self.env, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.env.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        zero = self.env.A.zero
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(m, zero) == other.terms.get(m, zero) for m in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return self == self.env.zero

    def in_J(self) -> bool:
        """No constant term: lies in the ideal generated by the z's."""
        return (0,) * self.env.K not in self.terms

    def coefficient(self, mono) -> Element:
        return self.terms.get(tuple(mono), self.env.A.zero)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"z{n}" + (f"^{k}" if k > 1 else "") for n, k in enumerate(m) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- Frobenius, delta, divided Frobenius ---------------------------
    def _gen_image(self, n: int, coefs) -> "EnvElement":
        env = self.env
        if n + 1 >= env.K:
            if coefs[n].is_zero():
                return env.zero
            raise FrontierExceeded(f"the image of z_{n} needs z_{n + 1}")
        return env.z(n + 1) * coefs[n]

    def phi(self) -> "EnvElement":
        env = self.env
        images = {}
        out = env.zero
        for m, c in self.terms.items():
            term = env.const(c.phi())
            for n, k in enumerate(m):
                if k:
                    if n not in images:
                        images[n] = self._gen_image(n, env.phi_coef)
                    term = term * images[n] ** k
            out = out + term
        return out

    def delta(self) -> "EnvElement":
        """delta from the generator table via the sum and product laws."""
        env = self.env
        items = list(self.terms.items())
        if not items:
            return env.zero
        acc = EnvElement(env, dict([items[0]]))
        acc_delta = _delta_term(env, *items[0])
        for m, c in items[1:]:
            t = EnvElement(env, {m: c})
            acc_delta = acc_delta + _delta_term(env, m, c) + _sum_correction(acc, t)
            acc = acc + t
        return acc_delta

    def phi1(self) -> "EnvElement":
        """phi/d on J, by splitting one generator off each monomial."""
        env = self.env
        if not self.in_J():
            raise InvalidSpec("phi_1 is only defined on J")
        out = env.zero
        for m, c in self.terms.items():
            n = next(i for i, k in enumerate(m) if k)
            rest = list(m)
            rest[n] -= 1
            cofactor = EnvElement(env, {tuple(rest): c}).phi()
            out = out + cofactor * self._gen_image(n, env.phi1_coef)
        return out

    def val(self, cap: int | None = None):
        """d-adic valuation: the minimum over coefficients."""
        env = self.env
        A = env.A
        cap = A.default_cap() if cap is None else cap
        best = AtLeast(cap)
        for c in self.terms.values():
            v = A.val(c, [env.prism.d], cap)
            if v < best:
                best = v
        return best

    def to_json(self) -> dict:
        return {"terms": [[list(m), c.to_json()] for m, c in sorted(self.terms.items())]}


def _sum_correction(x: EnvElement, y: EnvElement) -> EnvElement:
    p = x.env.p
    out = x.env.zero
    for i in range(1, p):
        out = out - (x**i * y ** (p - i)) * (comb(p, i) // p)
    return out


def _delta_product(x: EnvElement, dx: EnvElement, y: EnvElement, dy: EnvElement) -> EnvElement:
    p = x.env.p
    return x**p * dy + y**p * dx + dx * dy * p


def _delta_term(env: Envelope, mono: tuple, coeff: Element) -> EnvElement:
    """delta(c z^m) by the product law."""
    x = env.const(coeff)
    dx = env.const(env.prism.delta(coeff))
    for n, k in enumerate(mono):
        for _ in range(k):
            z = env.z(n)
            if n + 1 < env.K:
                dz = env.z(n + 1) * env.delta_coef[n]
            elif env.delta_coef[n].is_zero():
                dz = env.zero
            else:
                raise FrontierExceeded(f"delta(z_{n}) needs z_{n + 1}")
            dx = _delta_product(x, dx, z, dz)
            x = x * z
    return dx


def envelope_build(P: Prism, x, K: int) -> Envelope:
    return Envelope(P, x, K)


def envelope_delta(e: EnvElement) -> EnvElement:
    return e.delta()


def envelope_phi(e: EnvElement) -> EnvElement:
    return e.phi()


def nilpotence_certify(env: Envelope, target: int):
    """Smallest m with val(phi_1^m(z_n), (d)) >= target for every n <= K-1-m.

    Returns (m, trace).  Each trace row records the valuation reached and the
    growth bound p^(n+m) - 1, compared against the truncation cap.
    """
    A = env.A
    cap = A.default_cap()
    if target > cap:
        raise PrecisionExhausted(f"target {target} exceeds the valuation cap {cap}")
    p = env.p
    trace = []
    if target <= 0:
        return 0, trace
    iterates = {n: env.z(n) for n in range(env.K)}
    for m in range(0, env.K):
        ok_all = True
        for n in range(env.K - m):
            v = iterates[n].val(cap)
            # the growth bound is a claim about phi_1^m for m >= 1 only
            bound = p ** (n + m) - 1 if m else 0
            trace.append(
                {
                    "n": n,
                    "m": m,
                    "val": str(v) if isinstance(v, AtLeast) else int(v),
                    "bound": bound,
                    "bound_met": bool(v >= min(bound, cap)),
                }
            )
            ok_all = ok_all and v >= target
        if ok_all:
            return m, trace
        for n in range(env.K - m - 1):
            iterates[n] = iterates[n].phi1()
        iterates.pop(env.K - m - 1, None)
    raise PrecisionExhausted(f"no m < {env.K} reaches valuation {target}; deepen the envelope")


def nilpotence_trace(env: Envelope, max_total: int | None = None):
    """Every row (n, m) with 1 <= m and n + m <= max_total (default K - 1).

    Unlike :func:`nilpotence_certify` this does not stop at a target, so the
    growth bound p^(n+m) - 1 is compared on the whole triangle.
    """
    cap = env.A.default_cap()
    top = env.K - 1 if max_total is None else max_total
    if top > env.K - 1:
        raise PrecisionExhausted(f"n + m <= {top} needs depth K >= {top + 1}")
    p = env.p
    rows = []
    iterates = {n: env.z(n) for n in range(top)}
    for m in range(1, top + 1):
        for n in range(top - m + 1):
            iterates[n] = iterates[n].phi1()
            v = iterates[n].val(cap)
            bound = p ** (n + m) - 1
            rows.append(
                {
                    "n": n,
                    "m": m,
                    "val": str(v) if isinstance(v, AtLeast) else int(v),
                    "bound": bound,
                    "bound_met": bool(v >= min(bound, cap)),
                }
            )
        iterates.pop(top - m, None)
    return rows

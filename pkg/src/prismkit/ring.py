"""Truncated working rings Z[u, q_s]/(p^N, u^M, (q_s - 1)^Q) with precision tracking.

Elements are stored densely as an (M, Q) table of residues in the basis
u^i * t^j where t = q_s - 1.  A missing variable has extent 1.  Each element
also carries its guaranteed p-precision ``g``: the element is only known
modulo p^g, and its residues are kept canonical in [0, p^g).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from sympy import isprime

from .errors import InvalidSpec, NotDivisible, PrecisionExhausted, RingMismatch
from .linalg import int_dtype, local_smith, vp


@dataclass(frozen=True)
class RingSpec:
    p: int
    N: int
    M: int | None = None
    Q: int | None = None
    depth: int = 0

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise InvalidSpec(f"p={self.p!r} is not a prime")
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidSpec(f"p-precision N must be >= 1, got {self.N!r}")
        for name in ("M", "Q"):
            val = getattr(self, name)
            if val is not None and (not isinstance(val, int) or val < 1):
                raise InvalidSpec(f"truncation {name} must be >= 1, got {val!r}")
        if self.depth < 0:
            raise InvalidSpec("depth must be >= 0")
        if self.depth and self.Q is None:
            raise InvalidSpec("a root depth needs a q-variable")

    def to_json(self) -> dict:
        out = {"p": self.p, "N": self.N}
        if self.M is not None:
            out["u_trunc"] = self.M
        if self.Q is not None:
            out["q_trunc"] = self.Q
            out["depth"] = self.depth
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "RingSpec":
        return cls(
            p=obj["p"],
            N=obj["N"],
            M=obj.get("u_trunc"),
            Q=obj.get("q_trunc"),
            depth=obj.get("depth", 0),
        )


class AtLeast(int):
    """A valuation result meaning "at least this much" (the element lies in
    the cap-th power of the ideal)."""

    def __repr__(self):
        return f"AtLeast({int(self)})"

    def __str__(self):
        return f">={int(self)}"


def ring_make(spec: RingSpec) -> "Ring":
    return _ring_cached(spec)


@lru_cache(maxsize=None)
def _ring_cached(spec: RingSpec) -> "Ring":
    return Ring(spec)


class Ring:
    """Handle for one working quotient ring.  Use :func:`ring_make`."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.p = spec.p
        self.N = spec.N
        self.M = spec.M
        self.Q = spec.Q
        self.depth = spec.depth
        self.mod = spec.p**spec.N
        self.shape = (spec.M or 1, spec.Q or 1)
        self.size = self.shape[0] * self.shape[1]
        self.dtype = int_dtype(self.mod, self.size)
        self._div_cache: dict = {}
        self._phi_t = self._frobenius_t_matrix()

    # -- construction -------------------------------------------------
    def __repr__(self):
        parts = [f"Z/{self.p}^{self.N}"]
        if self.M:
            parts.append(f"u^{self.M}")
        if self.Q:
            parts.append(f"(q_{self.depth}-1)^{self.Q}")
        return "Ring[" + ", ".join(parts) + "]"

    def _zeros(self):
        return np.zeros(self.shape, dtype=self.dtype)

    def from_array(self, arr, g: int | None = None) -> "Element":
        return Element(self, np.asarray(arr), self.N if g is None else g)

    def from_coeffs(self, coeffs: dict, g: int | None = None) -> "Element":
        """Build from {(i, j): c} meaning c * u^i * (q_s - 1)^j (or {i: c})."""
        arr = np.zeros(self.shape, dtype=object)
        for key, c in coeffs.items():
            i, j = (key, 0) if isinstance(key, int) else key
            if i < self.shape[0] and j < self.shape[1]:
                arr[i, j] += c
        return self.from_array(arr, g)

    def __call__(self, x) -> "Element":
        if isinstance(x, Element):
            if x.ring is not self:
                raise RingMismatch(f"{x.ring} vs {self}")
            return x
        arr = self._zeros().astype(object)
        arr[0, 0] = int(x)
        return self.from_array(arr)

    @property
    def zero(self) -> "Element":
        return self(0)

    @property
    def one(self) -> "Element":
        return self(1)

    @property
    def u(self) -> "Element":
        if not self.M:
            raise InvalidSpec("ring has no u variable")
        return self.from_coeffs({(1, 0): 1})

    @property
    def t(self) -> "Element":
        """t = q_s - 1."""
        if not self.Q:
            raise InvalidSpec("ring has no q variable")
        return self.from_coeffs({(0, 1): 1})

    @property
    def qs(self) -> "Element":
        return self.one + self.t

    @property
    def q(self) -> "Element":
        """q = q_s^(p^depth)."""
        return self.qs ** (self.p**self.depth)

    def from_qs_poly(self, coeffs: dict, g: int | None = None) -> "Element":
        """Build from {(i, k): c} meaning c * u^i * q_s^k (k >= 0)."""
        out = self.zero
        for key, c in coeffs.items():
            i, k = (0, key) if isinstance(key, int) else key
            term = self.qs**k if k else self.one
            if i:
                term = term * self.u**i
            out = out + term * c
        return out if g is None else out.lowered(g)

    def random(self, rng, g: int | None = None) -> "Element":
        arr = np.array(
            [[rng.randrange(self.mod) for _ in range(self.shape[1])] for _ in range(self.shape[0])],
            dtype=object,
        )
        return self.from_array(arr, g)

    def residue(self, rng) -> "Element":
        return self(rng.randrange(self.mod))

    # -- Frobenius ------------------------------------------------------
    def _frobenius_t_matrix(self):
        Qt = self.shape[1]
        T = np.zeros((Qt, Qt), dtype=object)
        # column j holds ((1 + t)^p - 1)^j truncated
        base = [0] * Qt
        for k in range(1, min(self.p, Qt - 1) + 1 if Qt > 1 else 1):
            base[k] = _binom(self.p, k)
        cur = [1] + [0] * (Qt - 1)
        for j in range(Qt):
            T[:, j] = [c % self.mod for c in cur]
            nxt = [0] * Qt
            for a, ca in enumerate(cur):
                if ca:
                    for b in range(1, Qt - a):
                        if base[b]:
                            nxt[a + b] += ca * base[b]
            cur = nxt
        return T.astype(self.dtype)

    def frobenius(self, a: "Element") -> "Element":
        """The coordinate Frobenius lift: identity on Z_p, u -> u^p, q_s -> q_s^p."""
        out = self._zeros()
        c = a.c
        for i in range(self.shape[0]):
            ti = self.p * i
            if ti >= self.shape[0]:
                break
            row = c[i]
            if np.any(row):
                out[ti] = (self._phi_t @ row) % self.mod
        return Element(self, out, a.g, _canonical=False)

    # -- valuation -----------------------------------------------------
    def default_cap(self) -> int:
        return self.N + (self.M or 0) + (self.Q or 0)

    def val(self, a: "Element", gens, cap: int | None = None):
        """Largest k <= cap with a in (gens)^k; AtLeast(cap) if a is in the cap-th power."""
        cap = self.default_cap() if cap is None else cap
        gens = [self(x) for x in gens]
        a = self(a)
        if a.is_zero():
            return AtLeast(cap)
        weights = self._monomial_weights(gens)
        if weights is not None:
            wp, wu, wt = weights
            best = None
            for (i, j), c in np.ndenumerate(a.c):
                if c:
                    w = wp * vp(c, self.p, a.g) + wu * i + wt * j
                    best = w if best is None else min(best, w)
            return AtLeast(cap) if best >= cap else best
        for k in range(1, cap + 1):
            if not self.in_ideal_power(a, gens, k):
                return k - 1
        return AtLeast(cap)

    def _monomial_weights(self, gens):
        wp = wu = wt = 0
        for x in gens:
            if x == self(self.p) and x.g == self.N:
                wp = 1
            elif self.M and x == self.u:
                wu = 1
            elif self.Q and x == self.t:
                wt = 1
            else:
                return None
        return wp, wu, wt

    def in_ideal_power(self, a: "Element", gens, k: int) -> bool:
        prods = []
        for combo in combinations_with_replacement(range(len(gens)), k):
            x = self.one
            for idx in combo:
                x = x * gens[idx]
            if not x.is_zero():
                prods.append(x)
        return self.in_ideal(a, prods)

    def in_ideal(self, a: "Element", gens) -> bool:
        if a.is_zero():
            return True
        if not gens:
            return False
        g = min([a.g] + [x.g for x in gens])
        cols = []
        for x in gens:
            cols.append(x.mult_matrix())
        A = np.concatenate(cols, axis=1)
        sm = local_smith(A % self.p**g, self.p, g)
        return sm.solve(a.c.reshape(-1) % self.p**g) is not None

    # -- serialisation -------------------------------------------------
    def element_from_json(self, obj) -> "Element":
        if isinstance(obj, (int, str)):
            obj = {"coeffs": [[[0, 0], int(obj)]]}
        coeffs = {}
        for mono, c in obj.get("coeffs", []):
            if isinstance(mono, int):
                mono = [mono, 0]
            key = tuple(mono) if len(mono) == 2 else (mono[0], 0)
            coeffs[key] = coeffs.get(key, 0) + int(c)
        if obj.get("basis", "t") == "q_s":
            return self.from_qs_poly(coeffs, obj.get("g"))
        return self.from_coeffs(coeffs, obj.get("g"))


def _binom(n, k):
    from math import comb

    return comb(n, k)


class Element:
    """An immutable element of a working ring."""

    __slots__ = ("ring", "c", "g")

    def __init__(self, ring: Ring, arr, g: int, _canonical: bool = True):
        if g < 1:
            raise PrecisionExhausted(f"guaranteed precision would drop to {g}")
        g = min(g, ring.N)
        if _canonical or g < ring.N:
            arr = np.asarray(arr, dtype=object) % (ring.p**g)
            arr = arr.astype(ring.dtype)
        arr.setflags(write=False)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "c", arr)
        object.__setattr__(self, "g", g)

    def __setattr__(self, *_):
        raise AttributeError("elements are immutable")

    # -- helpers -------------------------------------------------------
    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.ring is not self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring(int(other))
        return NotImplemented

    def _new(self, arr, g) -> "Element":
        return Element(self.ring, arr, g)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.c + other.c, min(self.g, other.g))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.c, self.g)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.c - other.c, min(self.g, other.g))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        g = min(self.g, other.g)
        if g < self.ring.N:
            # an error of p^g_a in a is scaled by b, hence sits at p^(g_a + v_p(b))
            g = min(self.g + other.content_val(), other.g + self.content_val(), self.ring.N)
        return self._new(_truncated_product(self.c, other.c, self.ring.p**g), g)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported; use div_exact")
        result = self.ring.one.lowered(self.g)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.p ** min(self.g, other.g)
        return not np.any((self.c - other.c) % m)

    __hash__ = None

    def content_val(self) -> int:
        """Least p-adic valuation of the coefficients (g for the zero element)."""
        p = self.ring.p
        for v in range(self.g):
            if np.any(self.c % p ** (v + 1)):
                return v
        return self.g

    def is_zero(self) -> bool:
        return not np.any(self.c)

    def is_unit(self) -> bool:
        return int(self.c[0, 0]) % self.ring.p != 0

    def lowered(self, g: int) -> "Element":
        """Explicitly forget p-adic digits at and above p^g."""
        return self._new(self.c, min(g, self.g))

    def coeff(self, i: int, j: int = 0) -> int:
        return int(self.c[i, j])

    def constant(self) -> int:
        return int(self.c[0, 0])

    def phi(self) -> "Element":
        return self.ring.frobenius(self)

    def mult_matrix(self) -> np.ndarray:
        """Matrix of multiplication by self on the flattened monomial basis."""
        ring = self.ring
        Mu, Qt = ring.shape
        n = ring.size
        A = np.zeros((n, n), dtype=ring.dtype)
        for i in range(Mu):
            for j in range(Qt):
                col = i * Qt + j
                block = np.zeros(ring.shape, dtype=ring.dtype)
                block[i:, j:] = self.c[: Mu - i, : Qt - j]
                A[:, col] = block.reshape(-1)
        return A

    # -- division ------------------------------------------------------
    def inverse(self) -> "Element":
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        ring = self.ring
        m = ring.p**self.g
        inv = ring(pow(int(self.c[0, 0]), -1, m)).lowered(self.g)
        # Newton iteration converges because 1 - self*inv is nilpotent
        for _ in range(64):
            err = 1 - self * inv
            if err.is_zero():
                return inv
            inv = inv * (1 + err)
        raise AssertionError("unit inversion did not converge")

    def div_exact(self, b) -> "Element":
        """c with b*c == self in the quotient ring.

        Units divide without loss.  Dividing by p^k times a unit costs k
        digits of guaranteed precision.  Anything else is solved as a linear
        system over Z/p^g; the quotient is then unique only modulo the
        annihilator of b.
        """
        b = self._coerce(b)
        ring = self.ring
        p = ring.p
        if b.is_unit():
            return self * b.inverse()
        g = min(self.g, b.g)
        k = vp(b.c[0, 0], p, g)
        if k < g and all(vp(x, p, g) >= k for x in b.c.reshape(-1)):
            if g - k < 1:
                raise PrecisionExhausted(f"dividing by p^{k} exhausts precision {g}")
            pk = p**k
            if np.any(self.c % pk):
                raise NotDivisible(f"{self} is not divisible by p^{k}")
            num = Element(ring, self.c // pk, g - k)
            unit = Element(ring, b.c // pk, g - k)
            return num * unit.inverse()
        if b.lowered(g).is_zero():
            if self.lowered(g).is_zero():
                return ring.zero.lowered(g)
            raise NotDivisible("division by zero")
        key = (b.c.tobytes(), g)
        sm = ring._div_cache.get(key)
        if sm is None:
            sm = local_smith(b.mult_matrix() % p**g, p, g)
            ring._div_cache[key] = sm
        x = sm.solve(self.c.reshape(-1) % p**g)
        if x is None:
            raise NotDivisible(f"{self} is not divisible by {b}")
        return Element(ring, np.asarray(x).reshape(ring.shape), g)

    def val(self, gens, cap: int | None = None):
        return self.ring.val(self, gens, cap)

    # -- conversions ---------------------------------------------------
    def reduce_to(self, target: Ring) -> "Element":
        """Project onto a coarser truncation of the same ring family."""
        if target.p != self.ring.p or target.depth != self.ring.depth:
            raise RingMismatch(f"cannot project {self.ring} onto {target}")
        if target.N > self.ring.N or target.shape[0] > self.ring.shape[0] or target.shape[1] > self.ring.shape[1]:
            raise RingMismatch(f"{target} is not coarser than {self.ring}")
        Mu, Qt = target.shape
        return Element(target, self.c[:Mu, :Qt], min(self.g, target.N))

    def lift_to(self, target: Ring) -> "Element":
        """Embed into a finer truncation by zero padding (exact for polynomials)."""
        if target.p != self.ring.p or target.depth != self.ring.depth:
            raise RingMismatch(f"cannot lift {self.ring} to {target}")
        arr = np.zeros(target.shape, dtype=object)
        Mu = min(target.shape[0], self.ring.shape[0])
        Qt = min(target.shape[1], self.ring.shape[1])
        arr[:Mu, :Qt] = self.c[:Mu, :Qt]
        return Element(target, arr, min(self.g, target.N))

    def terms(self):
        """Nonzero (monomial, residue) pairs in graded-lex order."""
        out = [((i, j), int(c)) for (i, j), c in np.ndenumerate(self.c) if c]
        out.sort(key=lambda t: (t[0][0] + t[0][1], t[0]))
        return out

    def to_json(self) -> dict:
        obj = self.ring.spec.to_json()
        obj["coeffs"] = [[list(m), c] for m, c in self.terms()]
        obj["g"] = self.g
        return obj

    def __repr__(self):
        if self.is_zero():
            body = "0"
        else:
            parts = []
            for (i, j), c in self.terms():
                mono = []
                if i:
                    mono.append("u" if i == 1 else f"u^{i}")
                if j:
                    mono.append("t" if j == 1 else f"t^{j}")
                if not mono:
                    parts.append(str(c))
                else:
                    parts.append(("" if c == 1 else f"{c}*") + "*".join(mono))
            body = " + ".join(parts)
        suffix = "" if self.g == self.ring.N else f" (mod {self.ring.p}^{self.g})"
        return body + suffix


def element_from_json(obj) -> Element:
    if isinstance(obj, str):
        obj = json.loads(obj)
    ring = ring_make(RingSpec.from_json(obj))
    return ring.element_from_json(obj)


def _truncated_product(a: np.ndarray, b: np.ndarray, mod: int) -> np.ndarray:
    Mu, Qt = a.shape
    if Qt == 1:
        return (np.convolve(a[:, 0], b[:, 0])[:Mu] % mod).reshape(Mu, 1).astype(a.dtype)
    if Mu == 1:
        return (np.convolve(a[0], b[0])[:Qt] % mod).reshape(1, Qt).astype(a.dtype)
    out = np.zeros(a.shape, dtype=a.dtype)
    rows_b = np.flatnonzero(b.any(axis=1))
    for i in np.flatnonzero(a.any(axis=1)):
        ai = a[i]
        for k in rows_b:
            if i + k >= Mu:
                break
            out[i + k] = (out[i + k] + np.convolve(ai, b[k])[:Qt]) % mod
    return out

"""Low-degree Breen-Deligne complex over a finite abelian group.

Cochains with values in Z/m live on C_0 = Z[G], C_1 = Z[G^2] and
C_2 = Z[G^3] + Z[G^2]; the duals of the explicit differentials give
H^0 = Hom(G, Z/m) and H^1 = Ext^1(G, Z/m).  Also the primitive elements of
the exterior algebra of F_p^r under the coproduct induced by addition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd

import numpy as np
import sympy

from .errors import InvalidSpec, TooLarge
from .linalg import cokernel_invariants, local_smith

TABLE_LIMIT = 10**6


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_r; elements are tuples, indexed in mixed radix."""

    orders: tuple

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if not orders or any(d < 2 for d in orders):
            raise InvalidSpec(f"cyclic orders must be >= 2, got {self.orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def order(self) -> int:
        return int(np.prod(self.orders, dtype=object))

    def elements(self):
        return list(itertools.product(*(range(d) for d in self.orders)))

    def index(self, x) -> int:
        i = 0
        for xi, d in zip(x, self.orders):
            i = i * d + xi % d
        return i

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    @cached_property
    def add_table(self) -> np.ndarray:
        els = self.elements()
        n = len(els)
        out = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(els):
            for j, y in enumerate(els):
                out[i, j] = self.index(self.add(x, y))
        return out

    def __repr__(self):
        return " x ".join(f"Z/{d}" for d in self.orders)


@dataclass
class Cochain:
    """A value table G^k -> Z/m (arity k, table of shape (|G|,) * k)."""

    group: FiniteAbelianGroup
    m: int
    table: np.ndarray

    def __post_init__(self):
        n = self.group.order
        self.table = np.asarray(self.table, dtype=np.int64) % self.m
        if any(s != n for s in self.table.shape):
            raise InvalidSpec("cochain table must be total on G^k")

    @property
    def arity(self) -> int:
        return self.table.ndim

    def __call__(self, *xs):
        return int(self.table[tuple(self.group.index(x) for x in xs)])

    def is_zero(self) -> bool:
        return not self.table.any()

    def __eq__(self, other):
        return self.m == other.m and np.array_equal(self.table, other.table)

    def to_json(self):
        return {"group": list(self.group.orders), "m": self.m, "table": self.table.tolist()}


def cochain_from_function(G: FiniteAbelianGroup, m: int, k: int, fn) -> Cochain:
    els = G.elements()
    table = np.zeros((G.order,) * k, dtype=np.int64)
    for xs in itertools.product(range(G.order), repeat=k):
        table[xs] = fn(*(els[i] for i in xs))
    return Cochain(G, m, table)


def random_cochain(G: FiniteAbelianGroup, m: int, k: int, rng) -> Cochain:
    n = G.order
    table = [rng.randrange(m) for _ in range(n**k)]
    return Cochain(G, m, np.array(table, dtype=np.int64).reshape((n,) * k))


def bd_d1(f: Cochain) -> Cochain:
    """(d1 f)(x, y) = -f(x) + f(x + y) - f(y)."""
    if f.arity != 1:
        raise InvalidSpec("bd_d1 takes a 1-cochain")
    s = f.group.add_table
    t = f.table
    return Cochain(f.group, f.m, -t[:, None] + t[s] - t[None, :])


def bd_d2(g: Cochain):
    """Pair (g(x,y) - g(y,x), -g(y,z) + g(x+y,z) - g(x,y+z) + g(x,y))."""
    if g.arity != 2:
        raise InvalidSpec("bd_d2 takes a 2-cochain")
    s = g.group.add_table
    t = g.table
    n = g.group.order
    x, y, z = np.ix_(range(n), range(n), range(n))
    c1 = t - t.T
    c2 = -t[y, z] + t[s[x, y], z] - t[x, s[y, z]] + t[x, y]
    return Cochain(g.group, g.m, c1), Cochain(g.group, g.m, c2)


# -- matrices of the dual differentials ------------------------------------
def d1_matrix(G: FiniteAbelianGroup) -> np.ndarray:
    """Integer matrix of f -> d1 f, rows indexed by (x, y), columns by G."""
    n = G.order
    s = G.add_table
    D = np.zeros((n * n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            r = x * n + y
            D[r, x] -= 1
            D[r, s[x, y]] += 1
            D[r, y] -= 1
    return D


def d2_matrix(G: FiniteAbelianGroup) -> np.ndarray:
    """Integer matrix of g -> d2 g, rows (x, y) then (x, y, z), columns G^2."""
    n = G.order
    s = G.add_table
    D = np.zeros((n * n + n**3, n * n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            r = x * n + y
            D[r, x * n + y] += 1
            D[r, y * n + x] -= 1
    base = n * n
    for x in range(n):
        for y in range(n):
            for z in range(n):
                r = base + (x * n + y) * n + z
                D[r, y * n + z] -= 1
                D[r, s[x, y] * n + z] += 1
                D[r, x * n + s[y, z]] -= 1
                D[r, x * n + y] += 1
    return D


def _check_size(G: FiniteAbelianGroup, m: int):
    n = G.order
    if n**3 > TABLE_LIMIT or n * n * m > TABLE_LIMIT:
        raise TooLarge(f"|G| = {n}, m = {m} exceeds the {TABLE_LIMIT} table limit")


def _kernel_gens(D: np.ndarray, p: int, k: int):
    """Generators K (columns) of ker D over Z/p^k and the orders p^e of the
    cyclic summands they span."""
    sm = local_smith(D, p, k)
    n = D.shape[1]
    V = np.array(sm.V, dtype=object)
    cols, exps = [], []
    for i in range(n):
        v = sm.vals[i] if i < sm.rank else k
        if v == 0:
            continue
        # p^v z_i = 0 forces z_i in p^(k - v) Z/p^k, a cyclic group of order p^v
        cols.append((V[:, i] * p ** (k - v)) % p**k)
        exps.append(v)
    return cols, exps


def _homology_local(Din, Dout, p: int, k: int) -> list[int]:
    """Invariants of ker(Dout) / im(Din) over Z/p^k (Din may be None)."""
    q = p**k
    cols, exps = _kernel_gens(Dout, p, k)
    if not cols:
        return []
    K = np.array(cols, dtype=object).T % q
    rel = np.zeros((len(exps), len(exps)), dtype=object)
    for i, e in enumerate(exps):
        rel[i, i] = p**e
    if Din is not None:
        # write each image column in kernel coordinates
        ksm = local_smith(K, p, k)
        coords = []
        for j in range(Din.shape[1]):
            c = ksm.solve(np.array(Din[:, j], dtype=object) % q)
            if c is None:
                raise AssertionError("image of d1 is not inside ker d2")
            coords.append(c)
        rel = np.hstack([rel, np.array(coords, dtype=object).T])
    return cokernel_invariants(rel, p, k)


def _combine(local: dict) -> list[int]:
    """Merge per-prime p-power lists into invariant factors d_1 | d_2 | ..."""
    width = max((len(v) for v in local.values()), default=0)
    out = [1] * width
    for pw in local.values():
        pw = sorted(pw, reverse=True)
        for i, x in enumerate(pw):
            out[i] *= x
    return sorted(x for x in out if x > 1)


def ext_groups(G: FiniteAbelianGroup, m: int):
    """(H^0, H^1) of the dual complex with coefficients Z/m, as invariant factors."""
    if m < 1:
        raise InvalidSpec("coefficient modulus must be >= 1")
    _check_size(G, m)
    if m == 1:
        return [], []
    D1 = d1_matrix(G)
    D2 = d2_matrix(G)
    h0, h1 = {}, {}
    for p, k in sympy.factorint(m).items():
        h0[p] = _homology_local(None, D1, p, k)
        h1[p] = _homology_local(D1, D2, p, k)
    return _combine(h0), _combine(h1)


def ext_oracle(G: FiniteAbelianGroup, m: int):
    """Hom and Ext^1 of a finite abelian group into Z/m: both sum of Z/gcd(d_i, m)."""
    return _normalise([gcd(d, m) for d in G.orders]), _normalise([gcd(d, m) for d in G.orders])


def _normalise(cyclics) -> list[int]:
    local: dict = {}
    for c in cyclics:
        for p, e in sympy.factorint(c).items():
            local.setdefault(p, []).append(p**e)
    return _combine(local)


def group_order(invariants) -> int:
    return reduce(lambda a, b: a * b, invariants, 1)


def _all_tables(m: int, size: int, chunk: int = 1 << 14):
    """Every vector in (Z/m)^size, in chunks of rows."""
    total = m**size
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        out = np.empty((len(idx), size), dtype=np.int64)
        for j in range(size - 1, -1, -1):
            out[:, j] = idx % m
            idx = idx // m
        yield out


def brute_force_orders(G: FiniteAbelianGroup, m: int, limit: int = TABLE_LIMIT):
    """(|H^0|, |H^1|) by enumerating every 1- and 2-cochain."""
    n = G.order
    if m ** (n * n) > limit:
        raise TooLarge(f"{m}^{n * n} cochains exceed the enumeration limit {limit}")
    s = G.add_table
    ker1 = 0
    for f in _all_tables(m, n):
        d = -f[:, :, None] + f[:, s] - f[:, None, :]
        ker1 += int(np.all(d.reshape(len(f), -1) % m == 0, axis=1).sum())
    image = m**n // ker1
    x, y, z = np.ix_(range(n), range(n), range(n))
    ker2 = 0
    for flat in _all_tables(m, n * n):
        g = flat.reshape(-1, n, n)
        c1 = (g - g.transpose(0, 2, 1)).reshape(len(g), -1)
        c2 = (-g[:, y, z] + g[:, s[x, y], z] - g[:, x, s[y, z]] + g[:, x, y]).reshape(len(g), -1)
        ok = np.all(c1 % m == 0, axis=1) & np.all(c2 % m == 0, axis=1)
        ker2 += int(ok.sum())
    return ker1, ker2 // image


# -- primitive elements of an exterior algebra ------------------------------
def _subsets(r: int):
    return [S for k in range(r + 1) for S in itertools.combinations(range(r), k)]


def _shuffle_sign(A, B) -> int:
    inv = sum(1 for a in A for b in B if a > b)
    return -1 if inv % 2 else 1


def coproduct(x: dict, r: int) -> dict:
    """mu*(x) for x = {subset: coeff}; result keyed by (A, B) for e_A (x) e_B."""
    out: dict = {}
    for S, c in x.items():
        for k in range(len(S) + 1):
            for A in itertools.combinations(S, k):
                B = tuple(i for i in S if i not in A)
                key = (A, B)
                out[key] = out.get(key, 0) + _shuffle_sign(A, B) * c
    return out


def is_primitive(x: dict, r: int, p: int) -> bool:
    co = coproduct(x, r)
    for S, c in x.items():
        co[((), S)] = co.get(((), S), 0) - c
        co[(S, ())] = co.get((S, ()), 0) - c
    return all(v % p == 0 for v in co.values())


def _primitive_matrix(r: int, p: int) -> np.ndarray:
    basis = _subsets(r)
    pairs = [(A, B) for A in basis for B in basis if not set(A) & set(B)]
    row = {pr: i for i, pr in enumerate(pairs)}
    M = np.zeros((len(pairs), len(basis)), dtype=np.int64)
    for j, S in enumerate(basis):
        for (A, B), c in coproduct({S: 1}, r).items():
            M[row[(A, B)], j] += c
        M[row[((), S)], j] -= 1
        M[row[(S, ())], j] -= 1
    return M % p


def _rref_mod_p(rows, p: int):
    A = [list(map(int, r)) for r in rows]
    out, lead = [], 0
    ncols = len(A[0]) if A else 0
    for col in range(ncols):
        piv = next((i for i in range(lead, len(A)) if A[i][col] % p), None)
        if piv is None:
            continue
        A[lead], A[piv] = A[piv], A[lead]
        inv = pow(A[lead][col], -1, p)
        A[lead] = [a * inv % p for a in A[lead]]
        for i in range(len(A)):
            if i != lead and A[i][col] % p:
                f = A[i][col]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[lead])]
        lead += 1
    out = A[:lead]
    return out


def primitive_elements(r: int, p: int):
    """(dimension, basis) of the primitives of the exterior algebra on F_p^r.

    Basis vectors are dicts {subset: coeff} in reduced echelon form.
    """
    if r < 0 or not sympy.isprime(p):
        raise InvalidSpec("need r >= 0 and p prime")
    if p ** (2**r) > TABLE_LIMIT:
        raise TooLarge(f"{p}^(2^{r}) elements exceed the enumeration limit")
    basis = _subsets(r)
    M = _primitive_matrix(r, p)
    sm = local_smith(M, p, 1)
    V = np.array(sm.V, dtype=object) % p
    kernel = [V[:, i] for i in range(sm.rank, len(basis))]
    # echelon with respect to reversed order puts low degree first
    ech = _rref_mod_p(kernel, p)
    vecs = [{basis[j]: c for j, c in enumerate(v) if c} for v in ech]
    vecs.sort(key=lambda v: sorted((len(S), S) for S in v))
    return len(vecs), vecs


def primitive_elements_brute(r: int, p: int) -> int:
    """Number of primitive elements, by enumerating the whole algebra."""
    basis = _subsets(r)
    if p ** len(basis) > TABLE_LIMIT:
        raise TooLarge("algebra too large to enumerate")
    count = 0
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        x = {S: c for S, c in zip(basis, coeffs) if c}
        if is_primitive(x, r, p):
            count += 1
    return count

"""Linear algebra over the local rings Z/p^k.

Every nonzero residue is p^v times a unit, so full pivoting on the entry of
least valuation always yields a diagonal (Smith) form with explicit
transforms.  This is used for exact division in truncated rings, ideal
membership, and the Ext computations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def int_dtype(modulus: int, width: int = 1):
    """int64 when products of residues (summed ``width`` times) cannot overflow."""
    if modulus * modulus * max(width, 1) < 2**62:
        return np.int64
    return object


def vp(x: int, p: int, cap: int) -> int:
    """p-adic valuation of x, capped (x == 0 gives ``cap``)."""
    x = int(x)
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class LocalSmith:
    """U @ A @ V == diag(p^v_0, ..., p^v_{r-1}, 0, ...) modulo p^k."""

    p: int
    k: int
    U: np.ndarray
    V: np.ndarray
    vals: tuple  # valuations of the nonzero diagonal entries, nondecreasing
    shape: tuple

    @property
    def rank(self) -> int:
        return len(self.vals)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def invariants(self) -> list[int]:
        """Diagonal entries p^v (nonzero part) followed by zeros up to min(shape)."""
        out = [self.p**v for v in self.vals]
        out += [0] * (min(self.shape) - len(out))
        return out

    def solve(self, y):
        """One solution x of A x = y (mod p^k), or None.

        Free coordinates are set to zero, so the answer is canonical for a
        fixed A.
        """
        q = self.modulus
        m, n = self.shape
        y = np.asarray(y, dtype=self.U.dtype).reshape(m) % q
        w = (self.U @ y) % q
        z = np.zeros(n, dtype=self.U.dtype)
        for i, v in enumerate(self.vals):
            wi = int(w[i])
            if wi % self.p**v:
                return None
            z[i] = (wi // self.p**v) % self.p ** (self.k - v)
        if any(int(w[i]) for i in range(len(self.vals), m)):
            return None
        return (self.V @ z) % q


def local_smith(A, p: int, k: int) -> LocalSmith:
    """Smith form of an integer matrix over Z/p^k with transforms."""
    q = p**k
    A = np.array(A, dtype=object) % q
    m, n = A.shape
    dt = int_dtype(q, max(m, n))
    A = A.astype(dt)
    U = np.eye(m, dtype=dt)
    V = np.eye(n, dtype=dt)
    vals = []
    for r in range(min(m, n)):
        sub = A[r:, r:]
        nz = sub != 0
        if not nz.any():
            break
        best = None
        for v in range(k):
            cand = nz & (sub % p ** (v + 1) != 0)
            if cand.any():
                i, j = np.unravel_index(int(np.argmax(cand)), cand.shape)
                best = (v, int(i) + r, int(j) + r)
                break
        v, i, j = best
        if i != r:
            A[[r, i]] = A[[i, r]]
            U[[r, i]] = U[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            V[:, [r, j]] = V[:, [j, r]]
        pv = p**v
        unit = int(A[r, r]) // pv
        inv = pow(unit, -1, q)
        A[r] = (A[r] * inv) % q
        U[r] = (U[r] * inv) % q
        col = A[r + 1 :, r] // pv
        if np.any(col):
            A[r + 1 :] = (A[r + 1 :] - np.outer(col, A[r])) % q
            U[r + 1 :] = (U[r + 1 :] - np.outer(col, U[r])) % q
        row = A[r, r + 1 :] // pv
        if np.any(row):
            A[r, r + 1 :] = 0
            V[:, r + 1 :] = (V[:, r + 1 :] - np.outer(V[:, r], row)) % q
        vals.append(v)
    return LocalSmith(p, k, U, V, tuple(vals), (m, n))


def solve_local(A, y, p: int, k: int):
    return local_smith(A, p, k).solve(y)


def cokernel_invariants(A, p: int, k: int) -> list[int]:
    """Invariant factors (as p-powers, >1) of (Z/p^k)^m / column span of A."""
    m = np.asarray(A).shape[0]
    sm = local_smith(A, p, k)
    out = [p**v for v in sm.vals if v > 0]
    out += [p**k] * (m - sm.rank)
    return sorted(out)

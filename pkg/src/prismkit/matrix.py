"""Small dense matrices over working rings (lists of rows).

Entries only need +, -, *, == and ``phi()``; determinants use Laplace
expansion, which is fine at the ranks used here (h <= 4).
"""
from __future__ import annotations

import numpy as np

from .errors import NotDivisible
from .linalg import local_smith


def zeros(zero, m: int, n: int | None = None):
    n = m if n is None else n
    return [[zero for _ in range(n)] for _ in range(m)]


def identity(zero, one, n: int):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def shape(A):
    return (len(A), len(A[0]) if A else 0)


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(c, A):
    return [[a * c for a in row] for row in A]


def mul(A, B):
    m, k = shape(A)
    k2, n = shape(B)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(A)} x {shape(B)}")
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def phi(A):
    return [[a.phi() for a in row] for row in A]


def equal(A, B) -> bool:
    return shape(A) == shape(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero(A) -> bool:
    return all(a.is_zero() for row in A for a in row)


def column(A, j):
    return [row[j] for row in A]


def from_columns(cols):
    return [list(r) for r in zip(*cols)]


def block(A, rows, cols):
    return [[A[i][j] for j in cols] for i in rows]


def hstack(A, B):
    return [ra + rb for ra, rb in zip(A, B)]


def diag(entries, zero):
    n = len(entries)
    return [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]


def minor(A, i, j):
    return [row[:j] + row[j + 1 :] for k, row in enumerate(A) if k != i]


def det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = None
    for j in range(n):
        term = A[0][j] * det(minor(A, 0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def adjugate(A):
    n = len(A)
    if n == 1:
        one = A[0][0] * 0 + 1
        return [[one]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = det(minor(A, i, j))
            out[j][i] = -c if (i + j) % 2 else c
    return out


def inverse(A):
    """Inverse over a ring element type with ``inverse()``; the determinant must be a unit."""
    dA = det(A)
    if not dA.is_unit():
        raise NotDivisible("determinant is not a unit")
    return scale(dA.inverse(), adjugate(A))


def residue_rank(A, p: int, residue) -> int:
    """Rank over F_p of the matrix reduced to the residue field."""
    m, n = shape(A)
    if m == 0 or n == 0:
        return 0
    arr = np.array([[residue(a) % p for a in row] for row in A], dtype=object)
    return local_smith(arr, p, 1).rank


def to_json(A):
    return [[a.to_json() for a in row] for row in A]

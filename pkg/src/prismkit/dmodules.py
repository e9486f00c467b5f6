"""Prismatic Dieudonne modules: plain, filtered and torsion.

A module of rank h is given by the matrix Phi whose columns are phi_M(e_j).
Validity means that the cokernel of the linearisation is killed by d, which
is witnessed by a matrix Psi with Phi Psi = Psi Phi = d Id.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import matrix as mx
from .delta import Prism
from .errors import (
    FilNotComputable,
    InvalidSpec,
    NonIntegralDual,
    NotDivisible,
    NotEquivariant,
    NotInjective,
    NotMinuscule,
)
from .frames import gdh_decomposition, random_minuscule
from .linalg import cokernel_invariants, local_smith, vp
from .ring import Element


def psi_witness(Phi, d: Element):
    """Psi with Phi Psi = Psi Phi = d Id, or None."""
    try:
        G, nL, H = gdh_decomposition(Phi, d)
    except NotMinuscule:
        return None
    R = d.ring
    h = len(Phi)
    # Phi = G diag(d 1_L, 1_T) H, so Psi = H^-1 diag(1_L, d 1_T) G^-1
    Dp = mx.diag([R.one if i < nL else d for i in range(h)], R.zero)
    return mx.mul(mx.mul(mx.inverse(H), Dp), mx.inverse(G))


@dataclass
class DieudonneModule:
    prism: Prism
    phi: list
    psi: list | None = None
    label: str = ""

    def __post_init__(self):
        R = self.prism.ring
        self.phi = [[R(a) for a in row] for row in self.phi]
        if self.psi is None:
            self.psi = psi_witness(self.phi, self.prism.d)
        else:
            self.psi = [[R(a) for a in row] for row in self.psi]

    @property
    def h(self) -> int:
        return len(self.phi)

    def to_json(self) -> dict:
        out = {"prism": self.prism.describe(), "rank": self.h, "phi": mx.to_json(self.phi)}
        if self.psi is not None:
            out["psi"] = mx.to_json(self.psi)
        return out


def dm_check(D: DieudonneModule) -> dict:
    R = D.prism.ring
    d = D.prism.d
    h = D.h
    square = all(len(row) == h for row in D.phi)
    if not square:
        return {"all_pass": False, "square": False}
    Psi = D.psi
    ok = Psi is not None
    if ok:
        dI = mx.diag([d] * h, R.zero)
        ok = mx.equal(mx.mul(D.phi, Psi), dI) and mx.equal(mx.mul(Psi, D.phi), dI)
    return {
        "all_pass": bool(ok),
        "cokernel_killed_by_d": bool(ok),
        "psi": mx.to_json(Psi) if Psi is not None else None,
    }


# ---------------------------------------------------------------------------
# filtered modules


@dataclass
class FilteredDieudonneModule:
    """Fil M = L + N^{>=1} T for the normal pair spanned by the columns of S
    (the first nL columns span L, the rest span T)."""

    module: DieudonneModule
    S: list
    nL: int
    label: str = ""

    @property
    def prism(self) -> Prism:
        return self.module.prism

    @property
    def h(self) -> int:
        return self.module.h

    def fil_generators(self):
        n = self.prism.nygaard_generator()
        cols = [mx.column(self.S, j) for j in range(self.h)]
        return [c if j < self.nL else [n * a for a in c] for j, c in enumerate(cols)]

    def to_json(self) -> dict:
        out = self.module.to_json()
        cols = [mx.column(self.S, j) for j in range(self.h)]
        out["fil"] = {
            "L": [[a.to_json() for a in c] for c in cols[: self.nL]],
            "T": [[a.to_json() for a in c] for c in cols[self.nL :]],
        }
        return out


def fdm_check(F: FilteredDieudonneModule) -> dict:
    P = F.prism
    R = P.ring
    d = P.d
    report = dm_check(F.module)
    h = F.h
    base_ok = report["all_pass"]
    S = F.S
    structure = mx.shape(S) == (h, h) and 0 <= F.nL <= h and mx.det(S).is_unit()
    report["structure"] = bool(structure)
    if not structure:
        report["all_pass"] = False
        return report
    # phi_M(Fil M) in d M, recorded in d-divided coordinates
    image = []
    contained = True
    c = P.nygaard_c()
    phiS = mx.mul(F.module.phi, mx.phi(S))
    for j in range(h):
        col = mx.column(phiS, j)
        if j < F.nL:
            try:
                col = [a.div_exact(d) for a in col]
            except NotDivisible:
                contained = False
                col = [R.zero] * h
        else:
            col = [c * a for a in col]
        image.append(col)
    report["phi_fil_in_dM"] = contained
    gen = contained and mx.det(mx.from_columns(image)).is_unit()
    report["phi_fil_generates_dM"] = bool(gen)
    report["all_pass"] = bool(base_ok and contained and gen)
    return report


def forget_filtration(F: FilteredDieudonneModule) -> DieudonneModule:
    return F.module


def refill_perfect(D: DieudonneModule) -> FilteredDieudonneModule:
    """Fil M = phi_M^{-1}(p M) over the crystalline prism."""
    P = D.prism
    if not P.perfect:
        raise InvalidSpec("refill_perfect needs the crystalline prism (Z_p, (p))")
    try:
        G, nL, H = gdh_decomposition(D.phi, P.d)
    except NotMinuscule as exc:
        raise FilNotComputable(str(exc)) from exc
    # phi m in pM  <=>  (H m)_T in p: Fil = H^-1 (L-part + p T-part)
    return FilteredDieudonneModule(D, mx.inverse(H), nL, label="refilled")


def fil_lattice(F: FilteredDieudonneModule):
    """Canonical (Hermite) basis of Fil M as an integer matrix over Z/p^N."""
    R = F.prism.ring
    if R.M or R.Q:
        raise InvalidSpec("lattice canonical form is only offered over Z_p")
    cols = F.fil_generators()
    arr = np.array([[int(cols[j][i].constant()) for j in range(F.h)] for i in range(F.h)], dtype=object)
    return hermite_local(arr, R.p, R.N)


def hermite_local(A, p: int, k: int):
    """Column Hermite form over Z/p^k: lower triangular, diagonal p^v, reduced rows."""
    q = p**k
    A = np.array(A, dtype=object) % q
    m, n = A.shape
    col = 0
    for r in range(m):
        if col >= n:
            break
        best = None
        for j in range(col, n):
            if A[r, j] % q:
                v = vp(A[r, j], p, k)
                if best is None or v < best[0]:
                    best = (v, j)
        if best is None:
            continue
        v, j = best
        A[:, [col, j]] = A[:, [j, col]]
        unit = (A[r, col] // p**v) % q
        A[:, col] = (A[:, col] * pow(int(unit), -1, q)) % q
        for j2 in range(n):
            # clears the row to the right, reduces it below p^v to the left
            if j2 != col and A[r, j2] % q:
                f = A[r, j2] // p**v
                A[:, j2] = (A[:, j2] - f * A[:, col]) % q
        col += 1
    return [[int(x) for x in row] for row in A]


# ---------------------------------------------------------------------------
# standard modules


def standard_module(kind: str, P: Prism, h: int = 1):
    """etale(h), multiplicative(h) (plain) or qpzp_filtered, mu_filtered."""
    if h < 1:
        raise InvalidSpec("rank must be >= 1")
    R = P.ring
    eye = mx.identity(R.zero, R.one, h)
    if kind == "etale":
        return DieudonneModule(P, eye, label=f"etale({h})")
    if kind == "multiplicative":
        return DieudonneModule(P, mx.scale(P.d, eye), label=f"multiplicative({h})")
    if kind == "qpzp_filtered":
        if not P.nygaard_c().is_unit():
            raise InvalidSpec("the filtered etale module needs phi(N^1) = d A (a perfect prism)")
        return FilteredDieudonneModule(DieudonneModule(P, eye, label="etale"), eye, 0, label="Qp/Zp")
    if kind == "mu_filtered":
        return FilteredDieudonneModule(DieudonneModule(P, mx.scale(P.d, eye), label="multiplicative"), eye, h, label="mu")
    raise InvalidSpec(f"unknown standard module {kind!r}")


def dual(D: DieudonneModule) -> DieudonneModule:
    """Phi^v = d (Phi^T)^{-1}, which is Psi^T for the witness Psi."""
    if D.psi is None:
        raise NonIntegralDual("no Psi with Phi Psi = d Id; the dual is not integral")
    return DieudonneModule(D.prism, mx.transpose(D.psi), mx.transpose(D.phi), label=f"dual({D.label})")


# ---------------------------------------------------------------------------
# torsion modules over (Z_p, (p))


@dataclass
class TorsionDieudonneModule:
    """coker(rel) with phi and psi matrices acting on the free cover."""

    prism: Prism
    rel: list
    phi: list
    psi: list
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def h(self):
        return len(self.rel)

    def _arr(self, A):
        return np.array([[int(a.constant()) for a in row] for row in A], dtype=object)

    def invariants(self):
        R = self.prism.ring
        return cokernel_invariants(self._arr(self.rel), R.p, R.N)

    def length(self) -> int:
        p = self.prism.p
        return sum(vp(x, p, 10**6) for x in self.invariants())

    def in_relations(self, A) -> bool:
        """Every column of A lies in the span of the relations."""
        R = self.prism.ring
        sm = local_smith(self._arr(self.rel), R.p, R.N)
        arr = self._arr(A)
        return all(sm.solve(arr[:, j]) is not None for j in range(arr.shape[1]))

    def to_json(self):
        return {
            "prism": self.prism.describe(),
            "relations": mx.to_json(self.rel),
            "phi": mx.to_json(self.phi),
            "psi": mx.to_json(self.psi),
            "invariants": self.invariants(),
        }


def torsion_check(T: TorsionDieudonneModule) -> dict:
    P = T.prism
    R = P.ring
    if not P.perfect:
        return {"all_pass": False, "reason": "torsion modules live over (Z_p, (p))"}
    h = T.h
    p = R(P.p)
    injective = vp(mx.det(T.rel).constant(), P.p, R.N) < R.N
    stable = T.in_relations(mx.mul(T.phi, T.rel)) and T.in_relations(mx.mul(T.psi, T.rel))
    eye_p = mx.diag([p] * h, R.zero)
    # xi = xi~ = p and phi^{-1} = id on Z_p
    phipsi = T.in_relations(mx.sub(mx.mul(T.phi, T.psi), eye_p))
    psiphi = T.in_relations(mx.sub(mx.mul(T.psi, T.phi), eye_p))
    return {
        "all_pass": bool(injective and stable and phipsi and psiphi),
        "presentation_injective": bool(injective),
        "relations_stable": bool(stable),
        "phi_psi_eq_xi_tilde": bool(phipsi),
        "psi_phi_eq_xi": bool(psiphi),
        "invariants": T.invariants(),
    }


def isogeny_cokernel(f, D1: DieudonneModule, D2: DieudonneModule) -> TorsionDieudonneModule:
    """coker(f: D1 -> D2) with phi from D2 and psi from its witness."""
    P = D2.prism
    if not P.perfect or D1.prism is not P:
        raise InvalidSpec("isogeny cokernels are computed over (Z_p, (p))")
    R = P.ring
    f = [[R(a) for a in row] for row in f]
    if vp(mx.det(f).constant(), P.p, R.N) >= R.N:
        raise NotInjective("det(f) vanishes at the working precision")
    if not mx.equal(mx.mul(f, D1.phi), mx.mul(D2.phi, mx.phi(f))):
        raise NotEquivariant("f does not commute with Frobenius")
    if D2.psi is None:
        raise NonIntegralDual("target has no Psi witness")
    return TorsionDieudonneModule(P, f, D2.phi, D2.psi, label=f"coker({D1.label} -> {D2.label})")


def exactness_check(i, pi, Dp, D, Dpp) -> dict:
    """0 -> D' -i-> D -pi-> D'' -> 0 for free D', D and D'' free or torsion.

    For torsion D'' the map pi must be the canonical projection onto its
    presentation (given as the identity matrix).
    """
    R = D.prism.ring
    p = R.p
    h = D.h
    i = [[R(a) for a in row] for row in i]
    report = {}
    report["i_equivariant"] = mx.equal(mx.mul(i, Dp.phi), mx.mul(D.phi, mx.phi(i)))
    if isinstance(Dpp, TorsionDieudonneModule):
        pi = [[R(a) for a in row] for row in pi]
        report["pi_equivariant"] = Dpp.in_relations(mx.sub(mx.mul(pi, D.phi), mx.mul(Dpp.phi, mx.phi(pi))))
        det_i = mx.det(i).constant() if i else 1
        v = vp(det_i, p, R.N)
        same_lattice = Dpp.in_relations(mx.mul(pi, i)) and len(i) == h
        report["composite_zero"] = bool(same_lattice)
        report["lengths_match"] = bool(v < R.N and v == Dpp.length())
        report["exact"] = bool(report["composite_zero"] and report["lengths_match"] and mx.equal(pi, mx.identity(R.zero, R.one, h)))
    else:
        hpp = Dpp.h if Dpp is not None else 0
        hp = Dp.h if Dp is not None else 0
        if hpp:
            pi = [[R(a) for a in row] for row in pi]
            report["pi_equivariant"] = mx.equal(mx.mul(pi, D.phi), mx.mul(Dpp.phi, mx.phi(pi)))
            report["composite_zero"] = mx.is_zero(mx.mul(pi, i)) if hp else True
        else:
            report["pi_equivariant"] = True
            report["composite_zero"] = True
        exact = hp + hpp == h
        if exact and hpp:
            sigma = _section(pi, R)
            exact = sigma is not None
            if exact:
                cols = ([mx.column(i, j) for j in range(hp)] if hp else []) + [mx.column(sigma, j) for j in range(hpp)]
                exact = mx.det(mx.from_columns(cols)).is_unit()
        elif exact:
            exact = mx.det(i).is_unit()
        report["exact"] = bool(exact)
    report["all_pass"] = all(bool(v) for v in report.values())
    return report


def _section(pi, R):
    """sigma with pi sigma = Id, or None when pi is not surjective."""
    m, n = mx.shape(pi)
    if mx.residue_rank(pi, R.p, lambda a: a.constant()) < m:
        return None
    # pi has a unit m x m minor; invert it
    for cols in combinations(range(n), m):
        sub = mx.block(pi, range(m), cols)
        if mx.det(sub).is_unit():
            inv = mx.inverse(sub)
            sigma = mx.zeros(R.zero, n, m)
            for a, c in enumerate(cols):
                sigma[c] = inv[a]
            return sigma
    return None


def random_module(P: Prism, h: int, rng) -> DieudonneModule:
    return DieudonneModule(P, random_minuscule(P, h, rng).B, label="random")


__all__ = [
    "DieudonneModule",
    "FilteredDieudonneModule",
    "TorsionDieudonneModule",
    "dm_check",
    "fdm_check",
    "torsion_check",
    "standard_module",
    "dual",
    "isogeny_cokernel",
    "exactness_check",
    "forget_filtration",
    "refill_perfect",
    "fil_lattice",
    "psi_witness",
    "random_module",
]

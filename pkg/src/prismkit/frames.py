"""Frames, windows, Breuil-Kisin modules and lifting along nilpotent kernels.

Matrix conventions: a window of rank h is split M = L + T with L the first
``nL`` basis vectors.  ``phi`` holds the columns phi_M(e_j).  ``phi1``
holds phi_{M,1}(e_j) for j in L and phi_{M,1}(g e_j) for j in T, where g
is the first filtration generator of the frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import matrix as mx
from .delta import Prism
from .envelope import EnvElement, Envelope, nilpotence_certify
from .errors import (
    InvalidSpec,
    NoConvergenceWitness,
    NonInvertiblePsi,
    NotDivisible,
    NotMinuscule,
    PrecisionExhausted,
)
from .ring import Element, Ring, RingSpec, ring_make


# ---------------------------------------------------------------------------
# frames


class Frame:
    """(A, Fil A, phi, phi_1, varpi) with phi = varpi * phi_1 on Fil A.

    Fil A is described by one generator ``g`` with phi_1(g) = ``c``; the
    envelope frame adds the ideal J on top (see :class:`EnvelopeFrame`).
    """

    name = "frame"
    phi1_surjective = False

    def __init__(self, ring: Ring, g: Element, c: Element, varpi: Element, name: str, flavor: str):
        self.ring = ring
        self.p = ring.p
        self.g = g
        self.c = c
        self.varpi = varpi
        self.name = name
        self.flavor = flavor

    def __repr__(self):
        return f"Frame({self.name}: Fil=({self.g}), varpi={self.varpi})"

    # element plumbing, overridden by the envelope frame
    @property
    def zero(self):
        return self.ring.zero

    @property
    def one(self):
        return self.ring.one

    def coerce(self, x):
        return self.ring(x)

    def phi(self, x):
        return self.coerce(x).phi()

    def phi1(self, f):
        """phi_1 on Fil A = (g): write f = g a and return c phi(a)."""
        f = self.coerce(f)
        if self.g.is_zero():
            if not f.is_zero():
                raise NotDivisible(f"{f} is not in the zero filtration")
            return self.zero
        return self.c * f.div_exact(self.g).phi()

    def in_fil(self, f) -> bool:
        try:
            self.phi1(f)
            return True
        except NotDivisible:
            return False

    def residue(self, x) -> int:
        return int(self.coerce(x).c[0, 0]) % self.p

    def is_unit(self, x) -> bool:
        return self.residue(x) != 0

    def random(self, rng):
        return self.ring.random(rng)

    def random_fil(self, rng):
        return self.g * self.random(rng)

    def reduce_J(self, x):
        """Image in A/J; the base frames have J = 0."""
        return self.coerce(x)

    def inverse_matrix(self, A):
        if not self.is_unit(mx.det(A)):
            raise NotDivisible("matrix is not invertible")
        return mx.inverse(A)

    def check(self, rng, samples: int = 100) -> dict:
        """phi(f) = varpi phi_1(f) on random filtration elements."""
        for i in range(samples):
            f = self.random_fil(rng)
            if self.phi(f) != self.varpi * self.phi1(f):
                return {"pass": False, "index": i, "f": f.to_json()}
        return {"pass": True, "samples": samples}

    def describe(self) -> dict:
        return {"name": self.name, "flavor": self.flavor, "g": self.g.to_json(), "c": self.c.to_json(), "varpi": self.varpi.to_json()}


class PrismFrame(Frame):
    def __init__(self, prism: Prism, flavor: str):
        self.prism = prism
        R = prism.ring
        d = prism.d
        if flavor == "d":
            super().__init__(R, d, R.one, d.phi(), f"{prism.kind}-d", flavor)
        elif flavor == "nygaard":
            n = prism.nygaard_generator()
            super().__init__(R, n, prism.nygaard_c(), d, f"{prism.kind}-nygaard", flavor)
        else:
            raise InvalidSpec(f"unknown frame flavor {flavor!r}")
        self.phi1_surjective = prism.perfect and self.c.is_unit()


def frame_from_prism(P: Prism, flavor: str = "d") -> Frame:
    return PrismFrame(P, flavor)


def witt_frame(p: int, n: int) -> Frame:
    """W_n(F_p) = Z/p^n with I = V(W) = (p), F = id and F_1(p a) = a."""
    R = ring_make(RingSpec(p, n))
    fr = Frame(R, R(p), R.one, R(p), f"witt-{n}", "witt")
    fr.phi1_surjective = True
    return fr


class EnvelopeFrame(Frame):
    """The envelope with Fil = (n) + J, where J is generated by the z's and n
    is the Nygaard generator of the base; varpi = d."""

    def __init__(self, env: Envelope):
        self.env = env
        P = env.prism
        self.base = PrismFrame(P, "nygaard")
        super().__init__(env.A, self.base.g, self.base.c, P.d, f"envelope-{P.kind}-K{env.K}", "envelope")

    @property
    def zero(self):
        return self.env.zero

    @property
    def one(self):
        return self.env.one

    def coerce(self, x):
        if isinstance(x, EnvElement):
            return x
        return self.env.const(x)

    def _split(self, x: EnvElement):
        const = x.coefficient((0,) * self.env.K)
        return const, x - self.env.const(const)

    def phi1(self, f):
        f = self.coerce(f)
        const, j = self._split(f)
        out = self.env.const(self.base.phi1(const))
        if j.terms:
            out = out + j.phi1()
        return out

    def residue(self, x) -> int:
        const, _ = self._split(self.coerce(x))
        return int(const.c[0, 0]) % self.p

    def random(self, rng):
        return self.env.const(self.env.A.random(rng))

    def random_J(self, rng, top: int | None = None):
        """A random element of J built from z_0 .. z_top."""
        top = self.env.K - 2 if top is None else top
        out = self.env.zero
        for n in range(top + 1):
            out = out + self.env.z(n) * self.env.A.random(rng)
        return out

    def random_fil(self, rng):
        return self.coerce(self.g * self.env.A.random(rng)) + self.random_J(rng)

    def reduce_J(self, x):
        const, _ = self._split(self.coerce(x))
        return self.env.const(const)

    def inverse_matrix(self, A):
        """Inverse of a matrix that is invertible modulo J (Neumann series in J)."""
        C = [[self.reduce_J(a).coefficient((0,) * self.env.K) for a in row] for row in A]
        Cinv = mx.inverse(C)
        lift = [[self.env.const(a) for a in row] for row in Cinv]
        n = len(A)
        eye = mx.identity(self.zero, self.one, n)
        E = mx.sub(eye, mx.mul(lift, A))  # entries in J
        out = lift
        term = lift
        for _ in range(64):
            term = mx.mul(E, term)
            if mx.is_zero(term):
                return out
            out = mx.add(out, term)
        raise NoConvergenceWitness("Neumann series for the inverse did not terminate")

    def nilpotence_witness(self):
        return nilpotence_certify(self.env, 1)

    def describe(self) -> dict:
        out = super().describe()
        out["envelope"] = self.env.table()
        return out


def envelope_frame(env: Envelope) -> EnvelopeFrame:
    return EnvelopeFrame(env)


# ---------------------------------------------------------------------------
# windows


@dataclass
class Window:
    frame: Frame
    nL: int
    phi: list
    phi1: list
    meta: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return len(self.phi)

    @property
    def L(self):
        return list(range(self.nL))

    @property
    def T(self):
        return list(range(self.nL, self.h))

    def psi(self):
        """Psi = [phi_{M,1}(e_L) | phi_M(e_T)], the normal-decomposition matrix."""
        cols = [mx.column(self.phi1, j) for j in self.L] + [mx.column(self.phi, j) for j in self.T]
        return mx.from_columns(cols)

    def apply_phi(self, v):
        """phi_M of the vector with coordinates v."""
        out = [self.frame.zero for _ in range(self.h)]
        for j, a in enumerate(v):
            fa = self.frame.phi(a)
            out = [o + fa * self.phi[i][j] for i, o in enumerate(out)]
        return out

    def apply_phi1(self, v):
        """phi_{M,1} of v in Fil M (L-coordinates free, T-coordinates in Fil A)."""
        fr = self.frame
        out = [fr.zero for _ in range(self.h)]
        for j, a in enumerate(v):
            if j < self.nL:
                fa = fr.phi(a)
                col = mx.column(self.phi1, j)
            else:
                fa = fr.phi1(a)
                col = mx.column(self.phi, j)
            out = [o + fa * col[i] for i, o in enumerate(out)]
        return out

    def apply_phi1_scaled(self, v):
        """phi_{M,1}(g v) for any v, without dividing by g."""
        fr = self.frame
        g = fr.coerce(fr.g)
        c = fr.coerce(fr.c)
        out = [fr.zero for _ in range(self.h)]
        for j, a in enumerate(v):
            if j < self.nL:
                fa = fr.phi(g * a)
                col = mx.column(self.phi1, j)
            else:
                fa = c * fr.phi(a)
                col = mx.column(self.phi, j)
            out = [o + fa * col[i] for i, o in enumerate(out)]
        return out

    def to_json(self) -> dict:
        return {
            "frame": self.frame.describe(),
            "rank": self.h,
            "L": self.nL,
            "T": self.h - self.nL,
            "phi": mx.to_json(self.phi),
            "phi1": mx.to_json(self.phi1),
        }

    def same_as(self, other: "Window") -> bool:
        return self.nL == other.nL and mx.equal(self.phi, other.phi) and mx.equal(self.phi1, other.phi1)


def window_check(W: Window) -> dict:
    fr = W.frame
    h, nL = W.h, W.nL
    report = {}
    shape_ok = (
        0 <= nL <= h
        and mx.shape(W.phi) == (h, h)
        and mx.shape(W.phi1) == (h, h)
    )
    report["structure"] = {"pass": bool(shape_ok), "rank": h, "L": nL, "T": h - nL}
    if not shape_ok:
        return report
    g, c, varpi = fr.coerce(fr.g), fr.coerce(fr.c), fr.coerce(fr.varpi)
    pg = g.phi()
    bad = []
    for j in range(h):
        for i in range(h):
            if j < nL:
                ok = pg * W.phi1[i][j] == c * W.phi[i][j]
            else:
                ok = W.phi1[i][j] == c * W.phi[i][j]
            if not ok:
                bad.append([i, j])
    report["linearity"] = {"pass": not bad, "failing_entries": bad}
    bad = []
    for j in range(h):
        for i in range(h):
            if j < nL:
                ok = W.phi[i][j] == varpi * W.phi1[i][j]
            else:
                ok = pg * W.phi[i][j] == varpi * W.phi1[i][j]
            if not ok:
                bad.append([i, j])
    report["divided_frobenius"] = {"pass": not bad, "failing_entries": bad}
    rank = mx.residue_rank(mx.hstack(W.phi1, W.phi), fr.p, fr.residue)
    report["generation"] = {"pass": rank == h, "residue_rank": rank}
    if fr.phi1_surjective:
        rank1 = mx.residue_rank(W.phi1, fr.p, fr.residue)
        report["generation_divided"] = {"pass": rank1 == h, "residue_rank": rank1}
    report["all_pass"] = all(v["pass"] for k, v in report.items() if isinstance(v, dict))
    return report


def normal_decomposition(W: Window):
    """(nL, Psi): the split and the matrix of the induced semilinear isomorphism."""
    Psi = W.psi()
    if not W.frame.is_unit(mx.det(Psi)):
        raise NonInvertiblePsi("Psi = [phi_1(L) | phi(T)] is not invertible")
    return W.nL, Psi


def window_from_normal(frame: Frame, nL: int, Psi) -> Window:
    h = len(Psi)
    if not 0 <= nL <= h:
        raise InvalidSpec("L rank must lie in [0, h]")
    Psi = [[frame.coerce(a) for a in row] for row in Psi]
    if not frame.is_unit(mx.det(Psi)):
        raise NonInvertiblePsi("Psi must have unit determinant")
    varpi, c = frame.coerce(frame.varpi), frame.coerce(frame.c)
    phi = [[(varpi * Psi[i][j]) if j < nL else Psi[i][j] for j in range(h)] for i in range(h)]
    phi1 = [[Psi[i][j] if j < nL else (c * Psi[i][j]) for j in range(h)] for i in range(h)]
    return Window(frame, nL, phi, phi1)


def unit_window(frame: Frame) -> Window:
    """M = A with Fil M = Fil A."""
    return window_from_normal(frame, 0, [[frame.one]])


def random_invertible(frame: Frame, h: int, rng, const: bool = True):
    for _ in range(200):
        A = [[frame.random(rng) for _ in range(h)] for _ in range(h)]
        if frame.is_unit(mx.det(A)):
            return A
    raise AssertionError("no invertible matrix found")


def random_window(frame: Frame, h: int, nL: int, rng) -> Window:
    return window_from_normal(frame, nL, random_invertible(frame, h, rng))


# ---------------------------------------------------------------------------
# morphisms


def phi_tilde(frame: Frame, alpha, nL_src: int, nL_tgt: int):
    """The semilinear twist of alpha: [[phi(a_LL), varpi phi(a_LT)], [phi_1(a_TL), phi(a_TT)]]."""
    varpi = frame.coerce(frame.varpi)
    out = []
    for i, row in enumerate(alpha):
        new = []
        for j, a in enumerate(row):
            if i < nL_tgt:
                x = frame.phi(a)
                new.append(varpi * x if j >= nL_src else x)
            else:
                new.append(frame.phi1(a) if j < nL_src else frame.phi(a))
        out.append(new)
    return out


def is_morphism(alpha, W_src: Window, W_tgt: Window) -> dict:
    """Check alpha Psi_src = Psi_tgt phi_tilde(alpha), plus the filtration condition."""
    fr = W_src.frame
    try:
        tw = phi_tilde(fr, alpha, W_src.nL, W_tgt.nL)
    except NotDivisible:
        return {"pass": False, "reason": "alpha does not preserve the filtration"}
    lhs = mx.mul(alpha, W_src.psi())
    rhs = mx.mul(W_tgt.psi(), tw)
    return {"pass": mx.equal(lhs, rhs)}


def check_morphism_direct(alpha, W_src: Window, W_tgt: Window) -> dict:
    """Independent check: phi_N(alpha e_j) = alpha phi_M(e_j) for all j, and the
    same for phi_{.,1} on e_j (j in L) and on g e_j (j in T)."""
    h_src = W_src.h
    phi_ok = True
    phi1_ok = True
    a_phi = mx.mul(alpha, W_src.phi)
    a_phi1 = mx.mul(alpha, W_src.phi1)
    for j in range(h_src):
        col = mx.column(alpha, j)
        phi_ok = phi_ok and _vec_eq(W_tgt.apply_phi(col), mx.column(a_phi, j))
        if j < W_src.nL:
            img = W_tgt.apply_phi1(col)
        else:
            img = W_tgt.apply_phi1_scaled(col)
        phi1_ok = phi1_ok and _vec_eq(img, mx.column(a_phi1, j))
    return {"phi": phi_ok, "phi1": phi1_ok, "pass": phi_ok and phi1_ok}


def _vec_eq(u, v) -> bool:
    return all(a == b for a, b in zip(u, v))


def transport(W: Window, alpha) -> Window:
    """The window on the same module for which alpha: W -> W' is an isomorphism."""
    fr = W.frame
    tw = phi_tilde(fr, alpha, W.nL, W.nL)
    Psi_new = mx.mul(mx.mul(alpha, W.psi()), fr.inverse_matrix(tw))
    return window_from_normal(fr, W.nL, Psi_new)


def random_filtered_automorphism(frame: Frame, h: int, nL: int, rng):
    """Invertible alpha with a_TL in Fil A."""
    for _ in range(200):
        A = [
            [frame.random_fil(rng) if (i >= nL and j < nL) else frame.random(rng) for j in range(h)]
            for i in range(h)
        ]
        LL = mx.block(A, range(nL), range(nL))
        TT = mx.block(A, range(nL, h), range(nL, h))
        if (not LL or frame.is_unit(mx.det(LL))) and (not TT or frame.is_unit(mx.det(TT))):
            return A
    raise AssertionError("no automorphism found")


# ---------------------------------------------------------------------------
# Breuil-Kisin modules


@dataclass
class BKModule:
    prism: Prism
    B: list  # columns: phi(f_j)

    @property
    def h(self):
        return len(self.B)

    def to_json(self):
        return {"prism": self.prism.describe(), "rank": self.h, "phi": mx.to_json(self.B)}


def window_to_bk(W: Window) -> BKModule:
    """(Fil M, d phi_{M,1}) in the basis (e_L, d e_T): B = diag(d 1_L, 1_T) Psi."""
    fr = W.frame
    if fr.flavor != "d":
        raise InvalidSpec("window_to_bk needs a d-flavored frame")
    d = fr.g
    Psi = W.psi()
    B = [[d * a if i < W.nL else a for a in row] for i, row in enumerate(Psi)]
    return BKModule(fr.prism, B)


def gdh_decomposition(B, d: Element):
    """B = G diag(d 1_l, 1_t) H with G, H invertible, or NotMinuscule."""
    R = d.ring
    h = len(B)
    D = [list(row) for row in B]
    Rt = mx.identity(R.zero, R.one, h)  # D = Rt B Ct
    Ct = mx.identity(R.zero, R.one, h)
    r = 0
    while r < h:
        piv = next(((i, j) for i in range(r, h) for j in range(r, h) if D[i][j].is_unit()), None)
        if piv is None:
            break
        i, j = piv
        D[r], D[i] = D[i], D[r]
        Rt[r], Rt[i] = Rt[i], Rt[r]
        for row in D:
            row[r], row[j] = row[j], row[r]
        for row in Ct:
            row[r], row[j] = row[j], row[r]
        inv = D[r][r].inverse()
        D[r] = [a * inv for a in D[r]]
        Rt[r] = [a * inv for a in Rt[r]]
        for k in range(h):
            if k != r and not D[k][r].is_zero():
                f = D[k][r]
                D[k] = [a - f * b for a, b in zip(D[k], D[r])]
                Rt[k] = [a - f * b for a, b in zip(Rt[k], Rt[r])]
        for k in range(h):
            if k != r and not D[r][k].is_zero():
                f = D[r][k]
                for row in D:
                    row[k] = row[k] - f * row[r]
                for row in Ct:
                    row[k] = row[k] - f * row[r]
        r += 1
    rest = [D[i][r:] for i in range(r, h)]
    try:
        C = [[a.div_exact(d) for a in row] for row in rest]
    except NotDivisible as exc:
        raise NotMinuscule("the non-unit block is not divisible by d") from exc
    if rest and not mx.det(C).is_unit():
        raise NotMinuscule("cokernel is not killed by d")
    # D = diag(1_r, d C) = diag(1_r, d 1) diag(1_r, C)
    Cfull = mx.identity(R.zero, R.one, h)
    for a in range(h - r):
        for b in range(h - r):
            Cfull[r + a][r + b] = C[a][b]
    G = mx.inverse(Rt)
    H = mx.mul(Cfull, mx.inverse(Ct))
    # reorder so that the d-part (L) comes first
    perm = list(range(r, h)) + list(range(r))
    P = [[R.one if perm[i] == j else R.zero for j in range(h)] for i in range(h)]
    Pt = mx.transpose(P)
    G = mx.mul(G, Pt)
    H = mx.mul(P, H)
    return G, h - r, H


def bk_to_window(bk: BKModule, frame: Frame | None = None):
    """Window over the d-frame with window_to_bk(W) = G^{-1} B phi(G); returns (W, G)."""
    P = bk.prism
    frame = frame or frame_from_prism(P, "d")
    G, nL, H = gdh_decomposition(bk.B, P.d)
    Psi = mx.mul(H, mx.phi(G))
    return window_from_normal(frame, nL, Psi), G


def bk_is_minuscule(bk: BKModule) -> bool:
    try:
        gdh_decomposition(bk.B, bk.prism.d)
        return True
    except NotMinuscule:
        return False


def random_minuscule(P: Prism, h: int, rng):
    fr = frame_from_prism(P, "d")
    nL = rng.randrange(h + 1)
    G = random_invertible(fr, h, rng)
    H = random_invertible(fr, h, rng)
    R = P.ring
    Delta = mx.diag([P.d if i < nL else R.one for i in range(h)], R.zero)
    return BKModule(P, mx.mul(mx.mul(G, Delta), H))


# ---------------------------------------------------------------------------
# lifting along J


def _series_witness(x) -> object:
    if isinstance(x, EnvElement):
        return x.val()
    return x.val([x.ring(x.ring.p)])


def lift_phi_invariant(frame: Frame, Phi, mbar, max_iter: int = 64):
    """The fixed point of phi_M = Phi . phi congruent to mbar modulo J.

    Returns (m, witness) where the witness lists the valuations of the
    increments phi_M^j(z), z = phi_M(m) - m; the series stops at the first
    increment that vanishes in the working model.
    """
    m = [frame.coerce(a) for a in mbar]
    Phi = [[frame.coerce(a) for a in row] for row in Phi]

    def phi_M(v):
        return [sum((Phi[i][j] * frame.phi(v[j]) for j in range(len(v))), frame.zero) for i in range(len(v))]

    z = [a - b for a, b in zip(phi_M(m), m)]
    if any(not (frame.reduce_J(a) == frame.zero) for a in z):
        raise InvalidSpec("mbar is not phi-invariant modulo J")
    witness = []
    out = list(m)
    term = z
    for _ in range(max_iter):
        if all(t.is_zero() for t in term):
            assert _vec_eq(phi_M(out), out), "series limit is not phi_M-invariant"
            return out, witness
        witness.append([str(_series_witness(t)) for t in term])
        out = [a + b for a, b in zip(out, term)]
        term = phi_M(term)
    raise NoConvergenceWitness(f"increments did not vanish after {max_iter} steps")


def picard_fixed_point(frame: Frame, Phi, m0, max_iter: int = 64):
    """Iterate m -> phi_M(m) until it stabilises (an independent schedule)."""
    m = [frame.coerce(a) for a in m0]
    Phi = [[frame.coerce(a) for a in row] for row in Phi]
    for _ in range(max_iter):
        nxt = [sum((Phi[i][j] * frame.phi(m[j]) for j in range(len(m))), frame.zero) for i in range(len(m))]
        if _vec_eq(nxt, m):
            return m
        m = nxt
    raise NoConvergenceWitness("Picard iteration did not stabilise")


def _U(alpha, W_src: Window, W_tgt: Window, Psi_src_inv):
    fr = W_src.frame
    tw = phi_tilde(fr, alpha, W_src.nL, W_tgt.nL)
    return mx.mul(mx.mul(W_tgt.psi(), tw), Psi_src_inv)


def lift_window_hom(alpha, W_src: Window, W_tgt: Window, max_iter: int = 64):
    """Lift a morphism modulo J: alpha~ = alpha + sum_n U^n(beta), beta = U(alpha) - alpha.

    Returns (alpha~, witness).  The frame must carry a nilpotence certificate
    for phi_1 on J (the envelope frame does); base frames have J = 0.
    """
    fr = W_src.frame
    alpha = [[fr.coerce(a) for a in row] for row in alpha]
    witness = {}
    if isinstance(fr, EnvelopeFrame):
        try:
            m, trace = fr.nilpotence_witness()
        except PrecisionExhausted as exc:
            raise NoConvergenceWitness(str(exc)) from exc
        witness["nilpotence_m"] = m
    Psi_inv = fr.inverse_matrix(W_src.psi())
    U_alpha = _U(alpha, W_src, W_tgt, Psi_inv)
    beta = mx.sub(U_alpha, alpha)
    if any(not (fr.reduce_J(a) == fr.zero) for row in beta for a in row):
        raise InvalidSpec("alpha is not a window morphism modulo J")
    out = alpha
    term = beta
    steps = []
    for _ in range(max_iter):
        if mx.is_zero(term):
            witness["increments"] = steps
            return out, witness
        steps.append(str(min(_series_witness(a) for row in term for a in row if not a.is_zero())))
        out = mx.add(out, term)
        term = _U(term, W_src, W_tgt, Psi_inv)
    raise NoConvergenceWitness(f"U-iterates did not vanish after {max_iter} steps")


def picard_window_hom(alpha, W_src: Window, W_tgt: Window, max_iter: int = 64):
    """Iterate alpha -> U(alpha) until it stabilises."""
    fr = W_src.frame
    alpha = [[fr.coerce(a) for a in row] for row in alpha]
    Psi_inv = fr.inverse_matrix(W_src.psi())
    for _ in range(max_iter):
        nxt = _U(alpha, W_src, W_tgt, Psi_inv)
        if mx.equal(nxt, alpha):
            return alpha
        alpha = nxt
    raise NoConvergenceWitness("Picard iteration did not stabilise")

"""Bimodules over ``S_m`` and ``S_m'`` in rep(H) as quiver representations.

A bimodule ``V`` is stored by a basis whose vectors each lie in one block
``V^i_j = e_i V e_j`` (``labels``), the matrix of the group generator, and
the ``sigma`` map(s). The representation side is a :class:`GammaRep`: a
finite list of vertices ``(lambda, k)`` with spaces ``W``, maps ``A`` along
the a-arrows ``(lambda, k) -> (mu lambda, k + 1)``, nilpotent loops ``B``,
and in the sl2 case maps ``C`` along ``(lambda, k) -> (mu^-1 lambda, k + 1)``.

``phi`` unravels a bimodule into a representation and ``psi`` induces it
back; both are exact, so the round trips are checked with ``==``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import (
    CaseUnsupported,
    ConfigError,
    EigenvaluesNotInField,
    GlueMismatch,
    MixedGamma,
    NotTransitive,
    ScalarConstraintViolated,
    SingularMatrix,
    TauUnsolvable,
    WrongOrderOfQ,
)
from .field import INF, Field, QContext, RationalField, multiplicative_order
from .hopfaction import (
    HopfAction,
    Report,
    UqbArrowData,
    UqbVertexData,
    UqslActionData,
    Witness,
    build_uqb_action,
    build_uqsl_action,
    orbits,
    verify_hopf_action,
    verify_uqsl_action,
)
from .quiverpath import Arrow, Quiver


# vertices and the tau / epsilon bookkeeping --------------------------------------

@dataclass(frozen=True)
class GammaVertex:
    """Vertex ``(lambda, k)`` with ``lambda = mu^s * coset`` and ``coset`` the chosen representative."""

    coset: Any
    s: int
    k: int


def component_shape(mu, N: int, field: Field) -> dict:
    """Shape of a connected component of the quiver with parameters ``(mu, N)``."""
    o = multiplicative_order(mu, field)
    if o == INF:
        return {"kind": "S_inf"}
    return {"kind": "S_p", "p": math.lcm(o, N)}


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


class GammaSetting:
    """All the integers and scalars attached to ``(q, m, m')``."""

    def __init__(self, ctx: QContext, m: int, mprime: int) -> None:
        if m < 1 or mprime < 1:
            raise ConfigError("m and mprime must be positive", "m")
        self.ctx = ctx
        self.field = ctx.field
        self.m, self.mprime = m, mprime
        self.ell = math.lcm(m, mprime)
        self.d = math.gcd(m, mprime)
        self.mu = ctx.qpow(self.ell)
        self.root = ctx.is_root_of_unity
        self.mu_order = multiplicative_order(self.mu, self.field)
        if self.root:
            self.P = math.lcm(self.mu_order, self.d)
            self.z1, self.z2 = self._z_pair(self.P)
        else:
            self.P = None
            self.z1 = self.z2 = None

    def _z_pair(self, P: int) -> tuple[int, int]:
        # P = z1 m + z2 m', z1 the least positive representative mod m'/d
        m, mp, d = self.m, self.mprime, self.d
        mod = mp // d
        if mod == 1:
            z1 = 1
        else:
            _, inv, _ = _ext_gcd((m // d) % mod, mod)
            z1 = ((P // d) * inv) % mod or mod
        z2 = (P - z1 * m) // mp
        assert z1 * m + z2 * mp == P
        return z1, z2

    # cosets of <mu>
    def coset_of(self, lam) -> tuple[Any, int]:
        f = self.field
        if f.is_zero(lam):
            raise ConfigError("eigenvalue 0 does not label a vertex", "lambda")
        if self.mu_order != INF:
            best, best_s = None, 0
            x = lam
            mu_inv = f.inv(self.mu)
            for s in range(self.mu_order):
                # x = lam * mu^-s, so lam = mu^s x
                if best is None or f.sort_key(x) < f.sort_key(best):
                    best, best_s = x, s
                x = f.mul(x, mu_inv)
            return best, best_s
        nu = abs(Fraction(self.mu))
        x = abs(Fraction(lam))
        s = 0
        if nu > 1:
            while x >= nu:
                x /= nu
                s += 1
            while x < 1:
                x *= nu
                s -= 1
        else:
            while x < 1:
                x /= nu
                s += 1
            while x >= 1 / nu:
                x *= nu
                s -= 1
        return f.div(lam, f.pow(self.mu, s)), s

    def lam(self, v: GammaVertex):
        return self.field.mul(f_pow(self.field, self.mu, v.s), v.coset)

    def vertex(self, lam, k: int) -> GammaVertex:
        c, s = self.coset_of(lam)
        return GammaVertex(c, s, k % self.d)

    def normalize(self, v: GammaVertex) -> GammaVertex:
        return self.vertex(self.lam(v), v.k)

    def tau(self, v: GammaVertex) -> int | None:
        d = self.d
        if not self.root:
            return v.s + ((v.k - v.s) % d)
        o = self.mu_order
        for t in range(self.P):
            if t % o == v.s % o and t % d == v.k % d:
                return t
        return None

    def epsilon(self, v: GammaVertex) -> int:
        if not self.root:
            return 0
        return self.z1 * self.m if self.tau(v) == self.P - 1 else 0

    def a_target(self, v: GammaVertex) -> GammaVertex:
        return self.vertex(self.field.mul(self.mu, self.lam(v)), v.k + 1)

    def c_target(self, v: GammaVertex) -> GammaVertex:
        return self.vertex(self.field.div(self.lam(v), self.mu), v.k + 1)

    def sort_key(self, v: GammaVertex):
        return (self.field.sort_key(v.coset), v.s, v.k)

    def describe(self) -> dict:
        return {"m": self.m, "mprime": self.mprime, "ell": self.ell, "d": self.d,
                "mu": self.field.fmt(self.mu), "mu_order": "inf" if self.mu_order == INF else self.mu_order,
                "P": self.P, "z1": self.z1, "z2": self.z2}


def f_pow(field: Field, x, k: int):
    return field.pow(x, k)


def tau(v: GammaVertex, ctx: QContext, m: int, mprime: int) -> int | None:
    return GammaSetting(ctx, m, mprime).tau(v)


def epsilon(v: GammaVertex, ctx: QContext, m: int, mprime: int) -> int:
    return GammaSetting(ctx, m, mprime).epsilon(v)


# representations ---------------------------------------------------------------

@dataclass
class GammaRep:
    mode: str
    m: int
    mprime: int
    vertices: list
    dims: list
    A: list
    B: list
    C: list | None = None

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def total_dim(self) -> int:
        return sum(self.dims)


def gamma_reps_equal(a: GammaRep, b: GammaRep, field: Field) -> bool:
    if (a.mode, a.m, a.mprime, a.vertices, a.dims) != (b.mode, b.m, b.mprime, b.vertices, b.dims):
        return False
    pairs = [(a.A, b.A), (a.B, b.B)]
    if a.mode == "sl2":
        pairs.append((a.C, b.C))
    for xs, ys in pairs:
        for x, y in zip(xs, ys):
            if not field.equal(x, y):
                return False
    return True


def check_gamma_relations(W: GammaRep, S: GammaSetting) -> Witness | None:
    """Nilpotent loops and ``B_target A = mu A B`` (and ``C`` analogues) on every arrow."""
    f = S.field
    idx = W.index()
    for i, v in enumerate(W.vertices):
        if not f.is_zero_matrix(f.matpow(W.B[i], W.dims[i])):
            return Witness("nilpotent", "B", [_vstr(S, v)], "B^dim != 0", "0")
    arrows = [("A", W.A, S.a_target, S.mu)]
    if W.mode == "sl2":
        arrows.append(("C", W.C, S.c_target, f.inv(S.mu)))
    for name, maps, target, factor in arrows:
        for i, v in enumerate(W.vertices):
            t = target(v)
            if t not in idx:
                continue
            j = idx[t]
            lhs = f.matmul(W.B[j], maps[i])
            rhs = f.scale(factor, f.matmul(maps[i], W.B[i]))
            if not f.equal(lhs, rhs):
                return Witness("loop_relation", name, [_vstr(S, v)], str(f.fmt_matrix(lhs)), str(f.fmt_matrix(rhs)))
    return None


def _vstr(S: GammaSetting, v: GammaVertex) -> str:
    return f"({S.field.fmt(v.coset)}, s={v.s}, k={v.k})"


def validate_gamma_rep(W: GammaRep, S: GammaSetting) -> None:
    f = S.field
    if len({*W.vertices}) != len(W.vertices):
        raise ConfigError("duplicate vertices", "vertices")
    idx = W.index()
    for i, v in enumerate(W.vertices):
        if S.normalize(v) != v:
            raise ConfigError(f"vertex {_vstr(S, v)} is not in normal form", "vertices")
        if S.tau(v) is None:
            raise TauUnsolvable(f"vertex {_vstr(S, v)} has no tau")
        n = W.dims[i]
        if W.B[i].shape != (n, n):
            raise ConfigError(f"B at vertex {i} has the wrong shape", "B")
        maps = [("A", W.A, S.a_target)] + ([("C", W.C, S.c_target)] if W.mode == "sl2" else [])
        for name, ms, target in maps:
            t = target(v)
            rows = W.dims[idx[t]] if t in idx else 0
            if ms[i].shape != (rows, n):
                raise ConfigError(f"{name} at vertex {i} has shape {ms[i].shape}, expected {(rows, n)}", name)
    w = check_gamma_relations(W, S)
    if w is not None:
        raise ConfigError(f"{w.check} fails at {w.inputs[0]}", w.generator)


# bimodules ----------------------------------------------------------------

@dataclass
class BorelBimodule:
    m: int
    mprime: int
    labels: list
    g: np.ndarray
    sigma: np.ndarray
    gamma: tuple
    gammap: tuple

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass
class SL2Bimodule:
    m: int
    mprime: int
    labels: list
    K: np.ndarray
    sigmaE: np.ndarray
    sigmaF: np.ndarray
    gammaE: tuple
    gammaEp: tuple
    gammaF: tuple
    gammaFp: tuple

    @property
    def dim(self) -> int:
        return len(self.labels)

    def borel_E(self, ctx: QContext) -> tuple[BorelBimodule, QContext]:
        """``<K, E>`` as U_{q^2}(b) with ``g = K``, ``x = E``."""
        return (BorelBimodule(self.m, self.mprime, self.labels, self.K, self.sigmaE, self.gammaE, self.gammaEp),
                ctx.with_q(ctx.qpow(2)))

    def borel_F(self, ctx: QContext) -> tuple[BorelBimodule, QContext]:
        """``<K, F>`` as U_{q^-2}(b) with ``g = K``, ``x = K F``."""
        return (BorelBimodule(self.m, self.mprime, self.labels, self.K, self.sigmaF, self.gammaF, self.gammaFp),
                ctx.with_q(ctx.qpow(-2)))


def bimodule_quiver(m: int, mprime: int, labels: Sequence[tuple]) -> Quiver:
    """Vertices ``L0..`` and ``R0..``; one arrow ``L_i -> R_j`` per basis vector in block ``(i, j)``."""
    vertices = tuple(f"L{i}" for i in range(m)) + tuple(f"R{j}" for j in range(mprime))
    arrows = tuple(Arrow(f"v{c}", f"L{i}", f"R{j}") for c, (i, j) in enumerate(labels))
    return Quiver(vertices, arrows)


def _bimodule_perm(m: int, mprime: int) -> tuple:
    return tuple((i + 1) % m for i in range(m)) + tuple(m + (j + 1) % mprime for j in range(mprime))


def _embed_sigma(field: Field, n0: int, sigma: np.ndarray) -> np.ndarray:
    n = sigma.shape[0]
    out = field.zeros(n0 + n, n0 + n)
    out[n0:, n0:] = sigma
    return out


def bimodule_action(V: BorelBimodule, ctx: QContext, L: int = 1, validate: bool = True) -> HopfAction:
    """The U_q(b) action on the path algebra ``T_S(V)`` of the bimodule quiver."""
    f = ctx.field
    Q = bimodule_quiver(V.m, V.mprime, V.labels)
    n0 = V.m + V.mprime
    vdata = UqbVertexData(_bimodule_perm(V.m, V.mprime), tuple(V.gamma) + tuple(V.gammap))
    adata = UqbArrowData(V.g, _embed_sigma(f, n0, V.sigma))
    return build_uqb_action(Q, vdata, adata, L, ctx, validate)


def sl2_bimodule_action(V: SL2Bimodule, ctx: QContext, L: int = 1, validate: bool = True) -> HopfAction:
    f = ctx.field
    Q = bimodule_quiver(V.m, V.mprime, V.labels)
    n0 = V.m + V.mprime
    data = UqslActionData(_bimodule_perm(V.m, V.mprime), tuple(V.gammaE) + tuple(V.gammaEp),
                          tuple(V.gammaF) + tuple(V.gammaFp), V.K,
                          _embed_sigma(f, n0, V.sigmaE), _embed_sigma(f, n0, V.sigmaF))
    return build_uqsl_action(Q, data, L, ctx, validate)


# eigenspaces ----------------------------------------------------------------

def charpoly(field: Field, M: np.ndarray) -> list:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(t I - M)`` by the Faddeev-LeVerrier recursion (char 0)."""
    n = M.shape[0]
    coeffs = [field.zero] * (n + 1)
    coeffs[n] = field.one
    Mk = field.zeros(n, n)
    eye = field.eye(n)
    for k in range(1, n + 1):
        Mk = field.madd(field.matmul(M, Mk), field.scale(coeffs[n - k + 1], eye))
        AM = field.matmul(M, Mk)
        tr = field.zero
        for i in range(n):
            tr = field.add(tr, AM[i, i])
        coeffs[n - k] = field.neg(field.div(tr, field(k)))
    return coeffs


def _rational_roots(coeffs: list) -> dict:
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain="QQ")
    return {Fraction(int(r.p), int(r.q)): mult for r, mult in poly.ground_roots().items()}


def generalized_eigenspaces(field: Field, M: np.ndarray) -> list[tuple[Any, np.ndarray]]:
    """``[(lambda, basis)]`` sorted by ``lambda``; raises if the eigenvalues do not all lie in the field."""
    n = M.shape[0]
    if n == 0:
        return []
    if isinstance(field, RationalField):
        candidates = sorted(_rational_roots(charpoly(field, M)), key=field.sort_key)
    else:
        candidates = list(field.elements())
    out = []
    total = 0
    eye = field.eye(n)
    for lam in candidates:
        shifted = field.msub(M, field.scale(lam, eye))
        if field.rank(shifted) == n:
            continue
        basis = field.nullspace(field.matpow(shifted, n))
        out.append((lam, basis))
        total += basis.shape[1]
        if total == n:
            break
    if total != n:
        raise EigenvaluesNotInField(f"only {total} of {n} generalized eigenvectors are defined over the field")
    return out


# Phi -----------------------------------------------------------------------------

def _validate_scalars(S: GammaSetting, gamma: Sequence, gammap: Sequence) -> None:
    f, qinv = S.field, S.ctx.q_inv
    for name, gs, n in (("gamma", gamma, S.m), ("gammap", gammap, S.mprime)):
        if len(gs) != n:
            raise ScalarConstraintViolated(f"{name} needs {n} entries")
        for i in range(n):
            if gs[(i + 1) % n] != f.mul(qinv, gs[i]):
                raise ScalarConstraintViolated(f"{name}[{(i + 1) % n}] != q^-1 {name}[{i}]")


def phi(V: BorelBimodule, ctx: QContext, return_embeddings: bool = False):
    """Unravel a bimodule into a representation (optionally with the embeddings ``W -> V``)."""
    f = ctx.field
    S = GammaSetting(ctx, V.m, V.mprime)
    n = V.dim
    Gl = f.matpow(V.g, S.ell) if n else V.g
    spaces: dict = {}
    lams: dict = {}
    for j in range(V.mprime):
        idx = [c for c, lab in enumerate(V.labels) if lab == (0, j)]
        if not idx:
            continue
        block = Gl[np.ix_(idx, idx)]
        for lam, basis in generalized_eigenspaces(f, block):
            v = S.vertex(lam, j)
            t = S.tau(v)
            if t is None:
                raise TauUnsolvable(f"eigenvalue {f.fmt(lam)} in block (0, {j}) lands on a vertex without tau")
            if t % V.mprime != j:
                continue
            emb = f.zeros(n, basis.shape[1])
            emb[idx, :] = basis
            spaces[v] = emb
            lams[v] = lam
    vertices = sorted(spaces, key=S.sort_key)
    dims = [spaces[v].shape[1] for v in vertices]
    Ginv = f.inv_matrix(V.g) if n else V.g
    A, B = [], []
    for v in vertices:
        E = spaces[v]
        B.append(_solve(f, E, f.msub(f.matmul(Gl, E), f.scale(lams[v], E))))
        img = f.matmul(V.sigma, E)
        eps = S.epsilon(v)
        if eps:
            img = f.matmul(f.matpow(Ginv, eps), img)
        t = S.a_target(v)
        if t in spaces:
            A.append(_solve(f, spaces[t], img))
        else:
            if not f.is_zero_matrix(img):
                raise ScalarConstraintViolated(f"sigma leaves the computed spaces at {_vstr(S, v)}")
            A.append(f.zeros(0, E.shape[1]))
    W = GammaRep("borel", V.m, V.mprime, vertices, dims, A, B)
    if return_embeddings:
        return W, [spaces[v] for v in vertices]
    return W


def _solve(f: Field, E: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if E.shape[1] == 0:
        return f.zeros(0, Y.shape[1])
    try:
        return f.solve(E, Y)
    except SingularMatrix as exc:
        raise ScalarConstraintViolated("image is not contained in the target space") from exc


# Psi -------------------------------------------------------------------------------

def psi(W: GammaRep, gamma: Sequence, gammap: Sequence, ctx: QContext, validate: bool = True) -> BorelBimodule:
    """Induce ``kG (x)_H W~`` with basis ``g^t (x) w`` for ``0 <= t < ell``."""
    f = ctx.field
    S = GammaSetting(ctx, W.m, W.mprime)
    _validate_scalars(S, gamma, gammap)
    one_minus = f.sub(f.pow(ctx.q_inv, S.ell), f.one)
    if not (f.is_zero(f.mul(gamma[0], one_minus)) and all(f.is_zero(f.mul(g, one_minus)) for g in gammap)):
        raise ScalarConstraintViolated("the x-action on the induced module is not well defined")
    if validate:
        validate_gamma_rep(W, S)
    return _induce_borel(W, S, W.A, gamma, gammap)


def _induce(W: GammaRep, S: GammaSetting, maps: list, target) -> tuple:
    """Shared skeleton: basis, labels, the matrix of ``g`` and ``sigma`` for one family of arrow maps."""
    f = S.field
    ell, m, mp = S.ell, S.m, S.mprime
    idx = W.index()
    offsets = {}
    pos = 0
    labels = []
    for t in range(ell):
        for i, v in enumerate(W.vertices):
            offsets[(t, i)] = pos
            tv = S.tau(v)
            labels.extend([(t % m, (tv + t) % mp)] * W.dims[i])
            pos += W.dims[i]
    n = pos
    shift = [f.madd(f.scale(S.lam(v), f.eye(W.dims[i])), W.B[i]) for i, v in enumerate(W.vertices)]
    shift_pows: dict = {}

    def shift_pow(i, e):
        key = (i, e)
        if key not in shift_pows:
            shift_pows[key] = f.matpow(shift[i], e)
        return shift_pows[key]

    def place(out, col, T, i, y):
        # g^T (x) y with y in W_i
        qd, t = divmod(T, ell)
        if qd:
            y = f.matmul(shift_pow(i, qd), y[:, None])[:, 0]
        o = offsets[(t, i)]
        out[o:o + W.dims[i], col] = f.madd(out[o:o + W.dims[i], col][:, None], y[:, None])[:, 0]

    G = f.zeros(n, n)
    sigma = f.zeros(n, n)
    for t in range(ell):
        qt = f.pow(S.ctx.q, -t)
        for i, v in enumerate(W.vertices):
            eps = S.epsilon(v)
            tgt = target(v)
            for c in range(W.dims[i]):
                col = offsets[(t, i)] + c
                e = f.zeros(W.dims[i], 1)[:, 0]
                e[c] = f.one
                place(G, col, t + 1, i, e)
                if tgt in idx and W.dims[idx[tgt]]:
                    y = f.scale(qt, maps[i][:, c])
                    place(sigma, col, t + eps, idx[tgt], y)
    return labels, G, sigma


def _induce_borel(W: GammaRep, S: GammaSetting, maps, gamma, gammap) -> BorelBimodule:
    labels, G, sigma = _induce(W, S, maps, S.a_target)
    return BorelBimodule(W.m, W.mprime, labels, G, sigma, tuple(gamma), tuple(gammap))


# round trips ---------------------------------------------------------------------

def verify_round_trip_W(W: GammaRep, gamma, gammap, ctx: QContext) -> Report:
    f = ctx.field
    S = GammaSetting(ctx, W.m, W.mprime)
    V = psi(W, gamma, gammap, ctx)
    rep = Report(True)
    rep.details["dim_psi"] = V.dim
    rep.details["expected_dim"] = S.ell * W.total_dim()
    rep.add("dimension", None if V.dim == S.ell * W.total_dim() else Witness(
        "dimension", "psi", [], str(V.dim), str(S.ell * W.total_dim())))
    act = bimodule_action(V, ctx, 1, validate=True)
    vr = verify_hopf_action(act)
    rep.add("psi_is_action", vr.witness if not vr.passed else None)
    W2 = phi(V, ctx)
    rep.add("phi_psi_identity", None if gamma_reps_equal(W, W2, f) else Witness(
        "round_trip", "phi o psi", [], "phi(psi(W))", "W"))
    return rep


def xi_matrix(V: BorelBimodule, W: GammaRep, embeddings: list, ctx: QContext) -> np.ndarray:
    """``xi_V(g^t (x) w) = g^t . w`` as a matrix from ``psi(phi(V))`` to ``V``."""
    f = ctx.field
    S = GammaSetting(ctx, W.m, W.mprime)
    cols = []
    gpow = f.eye(V.dim)
    for _t in range(S.ell):
        for i in range(len(W.vertices)):
            cols.append(f.matmul(gpow, embeddings[i]))
        gpow = f.matmul(V.g, gpow)
    if not cols:
        return f.zeros(V.dim, 0)
    return np.concatenate(cols, axis=1)


def _xi_checks(rep: Report, f: Field, V, V2, Xi, pairs) -> None:
    square = Xi.shape[0] == Xi.shape[1]
    bij = square and f.rank(Xi) == Xi.shape[0] if Xi.size else Xi.shape[0] == Xi.shape[1]
    rep.add("xi_bijective", None if bij else Witness("xi", "xi", [], f"shape {Xi.shape}", "invertible"))
    for name, M, M2 in pairs:
        ok = f.equal(f.matmul(Xi, M2), f.matmul(M, Xi))
        rep.add(f"xi_intertwines_{name}", None if ok else Witness("xi", name, [], "xi M' != M xi", "equal"))
    blocks_ok = True
    for c in range(Xi.shape[1]):
        for r in np.nonzero(Xi[:, c])[0]:
            if V.labels[r] != V2.labels[c]:
                blocks_ok = False
    rep.add("xi_preserves_blocks", None if blocks_ok else Witness("xi", "blocks", [], "mixed blocks", "aligned"))


def verify_round_trip_V(V: BorelBimodule, ctx: QContext) -> Report:
    f = ctx.field
    W, emb = phi(V, ctx, return_embeddings=True)
    V2 = psi(W, V.gamma, V.gammap, ctx)
    Xi = xi_matrix(V, W, emb, ctx)
    rep = Report(True)
    n0 = V.m + V.mprime
    x1 = bimodule_action(V, ctx, 1).mats["x"][n0:, n0:]
    x2 = bimodule_action(V2, ctx, 1).mats["x"][n0:, n0:]
    _xi_checks(rep, f, V, V2, Xi, [("g", V.g, V2.g), ("sigma", V.sigma, V2.sigma), ("x", x1, x2)])
    return rep


def verify_round_trip(obj, ctx: QContext, gamma=None, gammap=None) -> Report:
    if isinstance(obj, GammaRep):
        return verify_round_trip_W(obj, gamma, gammap, ctx)
    return verify_round_trip_V(obj, ctx)


# sl2 ---------------------------------------------------------------------------------

def _require_sl2_setting(ctx: QContext, m: int, mprime: int) -> None:
    n = ctx.order
    if n == INF or n <= 2 or n % 2 == 0:
        raise WrongOrderOfQ(f"q must be a primitive n-th root of unity with n odd and > 2, got order {n}")
    if m <= 2 or mprime <= 2:
        raise CaseUnsupported("m and mprime must both exceed 2")


def check_glue(W: GammaRep, ctx: QContext) -> Witness | None:
    """``C_{a(v)} A_v == q^2 A_{c(v)} C_v`` at every vertex."""
    f = ctx.field
    S = GammaSetting(ctx.with_q(ctx.qpow(2)), W.m, W.mprime)
    idx = W.index()
    q2 = ctx.qpow(2)
    for i, v in enumerate(W.vertices):
        ta, tc = S.a_target(v), S.c_target(v)
        end = S.c_target(ta)
        rows = W.dims[idx[end]] if end in idx else 0
        lhs = f.matmul(W.C[idx[ta]], W.A[i]) if ta in idx else f.zeros(rows, W.dims[i])
        rhs = f.scale(q2, f.matmul(W.A[idx[tc]], W.C[i])) if tc in idx else f.zeros(rows, W.dims[i])
        if lhs.shape != rhs.shape or not f.equal(lhs, rhs):
            return Witness("glue", "C A = q^2 A C", [_vstr(S, v)], str(f.fmt_matrix(lhs)), str(f.fmt_matrix(rhs)))
    return None


def phi_prime(V: SL2Bimodule, ctx: QContext) -> GammaRep:
    f = ctx.field
    _require_sl2_setting(ctx, V.m, V.mprime)
    VE, cE = V.borel_E(ctx)
    VF, cF = V.borel_F(ctx)
    WE = phi(VE, cE)
    WF = phi(VF, cF)
    if WE.vertices != WF.vertices or WE.dims != WF.dims:
        raise GlueMismatch("the two Borel unravelings produce different vertex spaces")
    if not all(f.equal(x, y) for x, y in zip(WE.B, WF.B)):
        raise GlueMismatch("the two Borel unravelings produce different loop maps")
    W = GammaRep("sl2", V.m, V.mprime, WE.vertices, WE.dims, WE.A, WE.B, WF.A)
    w = check_glue(W, ctx)
    if w is not None:
        raise GlueMismatch(f"glue relation fails at {w.inputs[0]}")
    return W


def psi_prime(W: GammaRep, gammaE, gammaEp, gammaF, gammaFp, ctx: QContext, validate: bool = True) -> SL2Bimodule:
    f = ctx.field
    _require_sl2_setting(ctx, W.m, W.mprime)
    cE = ctx.with_q(ctx.qpow(2))
    cF = ctx.with_q(ctx.qpow(-2))
    WE = GammaRep("borel", W.m, W.mprime, W.vertices, W.dims, W.A, W.B)
    WF = GammaRep("borel", W.m, W.mprime, W.vertices, W.dims, W.C, W.B)
    VE = psi(WE, gammaE, gammaEp, cE, validate)
    VF = psi(WF, gammaF, gammaFp, cF, validate)
    if VE.labels != VF.labels or not f.equal(VE.g, VF.g):
        raise GlueMismatch("the two Borel inductions disagree on the bimodule or on K")
    if validate:
        w = check_glue(W, ctx)
        if w is not None:
            raise GlueMismatch(f"glue relation fails at {w.inputs[0]}")
    return SL2Bimodule(W.m, W.mprime, VE.labels, VE.g, VE.sigma, VF.sigma,
                       tuple(gammaE), tuple(gammaEp), tuple(gammaF), tuple(gammaFp))


def verify_round_trip_prime(W: GammaRep, gammaE, gammaEp, gammaF, gammaFp, ctx: QContext) -> Report:
    f = ctx.field
    V = psi_prime(W, gammaE, gammaEp, gammaF, gammaFp, ctx)
    rep = Report(True)
    act = sl2_bimodule_action(V, ctx, 1, validate=True)
    vr = verify_uqsl_action(act)
    rep.add("psi_prime_is_action", vr.witness if not vr.passed else None)
    W2 = phi_prime(V, ctx)
    rep.add("phi_psi_identity", None if gamma_reps_equal(W, W2, f) else Witness(
        "round_trip", "phi' o psi'", [], "phi'(psi'(W))", "W"))
    rep.add("glue", check_glue(W2, ctx))
    return rep


# Taft quotients ----------------------------------------------------------------------

def roots_of_unity(field: Field, k: int) -> list:
    """All ``z`` with ``z^k = 1`` in the field, sorted."""
    if isinstance(field, RationalField):
        return [field.one] if k % 2 else [field(-1), field.one]
    return sorted((z for z in field.elements() if not field.is_zero(z) and field.pow(z, k) == field.one),
                  key=field.sort_key)


def build_gamma_T(r: int, n: int, m: int, mprime: int, gamma0, gammap0, ctx: QContext) -> dict:
    """Relation table of the Taft-quotient algebra, one scalar per component."""
    f = ctx.field
    if ctx.order != r:
        raise WrongOrderOfQ(f"q has order {ctx.order}, expected {r}")
    if n % r or n % m or n % mprime:
        raise CaseUnsupported(f"need r, m, m' dividing n (r={r}, m={m}, m'={mprime}, n={n})")
    if (m != r and not f.is_zero(gamma0)) or (mprime != r and not f.is_zero(gammap0)):
        raise CaseUnsupported("a nonzero gamma needs an orbit of size r")
    S = GammaSetting(ctx, m, mprime)
    ell, d = S.ell, S.d
    zetas = roots_of_unity(f, n // ell)
    comps = [{"zeta": z, "vertices": [(z, i) for i in range(d)]} for z in zetas]
    table = {"r": r, "n": n, "m": m, "mprime": mprime, "ell": ell, "d": d, "z1": S.z1, "z2": S.z2,
             "components": comps}
    if m != r and mprime != r:
        table.update(case=1, length=r, scalars={})
        return table
    u = r // d
    g0r, gp0r = f.pow(gamma0, r), f.pow(gammap0, r)
    scalars = {}
    for z in zetas:
        if m == r and mprime == r:
            val = f.mul(f.pow(z, -S.z1), f.sub(f.mul(g0r, z), gp0r))
            case = 2
        elif m == r:
            val = f.mul(f.pow(z, S.z2), g0r)
            case = 3
        else:
            sign = f.one if (r - d + 1) % 2 == 0 else f.neg(f.one)
            val = f.mul(sign, f.mul(f.pow(z, -S.z1), gp0r))
            case = 4
        scalars[z] = val
    table.update(case=case, u=u, length=u * d, scalars=scalars)
    return table


def _path_product(W: GammaRep, S: GammaSetting, start: int, length: int, maps: list, target) -> np.ndarray:
    f = S.field
    idx = W.index()
    cur = f.eye(W.dims[start])
    v = W.vertices[start]
    i = start
    for _ in range(length):
        t = target(v)
        if t not in idx:
            return None
        cur = f.matmul(maps[i], cur)
        v, i = t, idx[t]
    return cur


def check_gamma_T_membership(W: GammaRep, table: dict, ctx: QContext) -> Report:
    """Evaluate the Taft relations as matrix identities around every cycle of ``W``."""
    f = ctx.field
    S = GammaSetting(ctx, table["m"], table["mprime"])
    rep = Report(True)
    zero_b = next((i for i, b in enumerate(W.B) if not f.is_zero_matrix(b)), None)
    rep.add("B_zero", None if zero_b is None else Witness(
        "taft", "B", [_vstr(S, W.vertices[zero_b])], "nonzero", "0"))
    w = None
    for i, v in enumerate(W.vertices):
        prod = _path_product(W, S, i, table["length"], W.A, S.a_target)
        if table["case"] == 1:
            want = None if prod is None else f.zeros(*prod.shape)
        else:
            if prod is None:
                prod = f.zeros(W.dims[i], W.dims[i])
            want = f.scale(table["scalars"].get(S.lam(v), f.zero), f.eye(W.dims[i]))
        if prod is not None and not f.equal(prod, want):
            w = Witness("taft_relation", "a", [_vstr(S, v)], str(f.fmt_matrix(prod)), str(f.fmt_matrix(want)))
            break
    rep.add("a_relation", w)
    return rep


def check_gamma_T_prime_membership(W: GammaRep, gammaE0, gammaEp0, gammaF0, gammaFp0, ctx: QContext) -> Report:
    """``a^d`` and ``c^d`` cycles equal the scalar differences; the glue relation holds."""
    f = ctx.field
    n = ctx.order
    S = GammaSetting(ctx.with_q(ctx.qpow(2)), W.m, W.mprime)
    d = S.d
    rep = Report(True)
    for name, maps, target, val in (
        ("a_cycle", W.A, S.a_target, f.sub(f.pow(gammaE0, n), f.pow(gammaEp0, n))),
        ("c_cycle", W.C, S.c_target, f.sub(f.pow(gammaF0, n), f.pow(gammaFp0, n))),
    ):
        w = None
        for i, v in enumerate(W.vertices):
            prod = _path_product(W, S, i, d, maps, target)
            if prod is None:
                prod = f.zeros(W.dims[i], W.dims[i])
            want = f.scale(val, f.eye(W.dims[i]))
            if not f.equal(prod, want):
                w = Witness("taft_relation", name, [_vstr(S, v)], str(f.fmt_matrix(prod)), str(f.fmt_matrix(want)))
                break
        rep.add(name, w)
    rep.add("glue", check_glue(W, ctx))
    return rep


# Etingof-Ostrik labels ------------------------------------------------------------

def classify_etingof_ostrik(data: UqbVertexData, n: int, ctx: QContext) -> dict:
    f = ctx.field
    if ctx.order != n:
        raise WrongOrderOfQ(f"q has order {ctx.order}, expected {n}")
    orbs = orbits(data.perm)
    if len(orbs) != 1:
        raise NotTransitive(f"{len(orbs)} orbits")
    t = len(data.perm)
    zero = [f.is_zero(g) for g in data.gamma]
    if all(zero):
        if n % t:
            raise CaseUnsupported(f"orbit size {t} does not divide n = {n}")
        return {"label": f"A({n // t})", "t": t}
    if any(zero):
        raise MixedGamma("some gamma_i vanish and others do not")
    if t != n:
        raise CaseUnsupported(f"nonzero gamma needs {n} vertices, got {t}")
    base = f.sub(f.one, ctx.q_inv)
    lams = [f.mul(f.pow(g, -n), f.pow(base, -n)) for g in data.gamma]
    lam = lams[0]
    return {"label": f"A({n}, {f.fmt(lam)})", "t": t, "lambda": f.fmt(lam),
            "independent_of_vertex": all(x == lam for x in lams)}

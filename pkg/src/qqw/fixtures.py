"""Seeded generators for the test corpus.

Every random object is drawn as a random point of the solution space of its
defining linear constraints (nullspace of the constraint matrix), so valid
fixtures are valid by construction and nothing is forced by hand. Over the
rationals at a non-root of unity this means the rigidity of the data is
observed, not imposed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bimodfunctors import (
    GammaRep,
    GammaSetting,
    GammaVertex,
    build_gamma_T,
    check_gamma_T_membership,
    roots_of_unity,
)
from .errors import GammaConstraintViolated, SigmaConstraintViolated
from .field import INF, Field, QContext
from .hopfaction import UqbArrowData, UqbVertexData, UqslActionData, build_uqb_action, perm_power
from .quiverpath import Arrow, Quiver


# linear solution spaces ---------------------------------------------------------

def random_solution(rng: random.Random, field: Field, shapes: Sequence[tuple], constraint: Callable,
                    density: float = 0.7) -> list[np.ndarray]:
    """Random point of ``{X : constraint(X) == 0}`` for a list of matrices ``X`` of the given shapes.

    ``constraint`` must be linear and return a list of matrices.
    """
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)

    def unflatten(vec):
        out, pos = [], 0
        for (r, c), s in zip(shapes, sizes):
            out.append(np.array(vec[pos:pos + s], dtype=field.dtype).reshape(r, c) if s else field.zeros(r, c))
            pos += s
        return out

    if total == 0:
        return unflatten([])
    cols = []
    for i in range(total):
        e = field.zeros(total, 1)[:, 0]
        e[i] = field.one
        img = constraint(unflatten(e))
        cols.append(np.concatenate([m.reshape(-1) for m in img]) if img else field.zeros(0, 1)[:, 0])
    rows = cols[0].shape[0]
    M = field.zeros(rows, total)
    for i, c in enumerate(cols):
        M[:, i] = c
    basis = field.nullspace(M) if rows else field.eye(total)
    vec = field.zeros(total, 1)
    for j in range(basis.shape[1]):
        if rng.random() < density:
            vec = field.madd(vec, field.scale(_coef(rng, field), basis[:, [j]]))
    return unflatten(vec[:, 0])


def _coef(rng: random.Random, field: Field):
    if field.characteristic:
        return field.random_element(rng, nonzero=True)
    return field(rng.choice([-3, -2, -1, 1, 2, 3]))


def _invertible(rng: random.Random, field: Field, n: int) -> np.ndarray:
    while True:
        m = field.zeros(n, n)
        for i in range(n):
            for j in range(n):
                m[i, j] = _coef(rng, field) if rng.random() < 0.6 else field.zero
        if field.rank(m) == n:
            return m


# U_q(b) actions ------------------------------------------------------------

@dataclass
class UqbFixture:
    name: str
    ctx: QContext
    quiver: Quiver
    vertex: UqbVertexData
    arrow: UqbArrowData
    L: int = 4

    def build(self, validate: bool = True):
        return build_uqb_action(self.quiver, self.vertex, self.arrow, self.L, self.ctx, validate)


def _orbit_perm(sizes: Sequence[int]) -> tuple:
    perm, start = [], 0
    for o in sizes:
        perm.extend(start + (k + 1) % o for k in range(o))
        start += o
    return tuple(perm)


def solve_gamma(rng: random.Random, ctx: QContext, perm: Sequence[int], skew=None) -> tuple:
    """Random solution of ``gamma_{g.i} = skew^-1 gamma_i``."""
    f = ctx.field
    sinv = f.inv(ctx.q if skew is None else skew)
    n0 = len(perm)

    def cons(xs):
        g = xs[0][:, 0]
        out = f.zeros(n0, 1)
        for i in range(n0):
            out[perm[i], 0] = f.sub(g[perm[i]], f.mul(sinv, g[i]))
        return [out]

    return tuple(f(x) for x in random_solution(rng, f, [(n0, 1)], cons, density=0.8)[0][:, 0])


def arrow_families(rng: random.Random, field: Field, perm: Sequence[int], max_arrows: int,
                   families: int | None = None, spectrum: Sequence | None = None) -> tuple[list, np.ndarray]:
    """g-stable arrow sets: ``g a_k = a_{k+1}`` and a random invertible monodromy on the last step.

    With ``spectrum`` the monodromy is diagonal with entries drawn from it.
    """
    n0 = len(perm)
    arrows: list[tuple[int, int]] = []
    blocks = []
    tries = families if families is not None else rng.randint(1, 3)
    for _ in range(tries):
        s, t = rng.randrange(n0), rng.randrange(n0)
        o = 1
        while perm_power(perm, o)[s] != s or perm_power(perm, o)[t] != t:
            o += 1
        mult = 2 if rng.random() < 0.3 else 1
        if len(arrows) + o * mult > max_arrows:
            mult = 1
            if len(arrows) + o > max_arrows:
                continue
        start = len(arrows)
        for k in range(o):
            pk = perm_power(perm, k)
            arrows.extend([(pk[s], pk[t])] * mult)
        blocks.append((start, o, mult))
    n1 = len(arrows)
    g1 = field.zeros(n1, n1)
    for start, o, mult in blocks:
        if spectrum is None:
            mono = _invertible(rng, field, mult)
        else:
            mono = field.zeros(mult, mult)
            for c in range(mult):
                mono[c, c] = rng.choice(list(spectrum))
        for k in range(o):
            for c in range(mult):
                src = start + k * mult + c
                if k + 1 < o:
                    g1[start + (k + 1) * mult + c, src] = field.one
                else:
                    for c2 in range(mult):
                        g1[start + c2, src] = mono[c2, c]
    return arrows, g1


def solve_sigma(rng: random.Random, ctx: QContext, perm, arrows, g1: np.ndarray, factor,
                density: float = 0.7) -> np.ndarray:
    """Random sigma supported on ``e_s kQ e_{g.t}`` with ``sigma(g a) = factor g sigma(a)``."""
    from .hopfaction import low_group_matrix

    f = ctx.field
    n0, n1 = len(perm), len(arrows)
    lo = n0 + n1
    labels = [(i, i) for i in range(n0)] + list(arrows)
    allowed = [(r, n0 + c) for c, (s, t) in enumerate(arrows) for r in range(lo) if labels[r] == (s, perm[t])]
    glow = low_group_matrix(f, perm, g1)

    def expand(xs):
        sig = f.zeros(lo, lo)
        for (r, c), val in zip(allowed, xs[0][:, 0]):
            sig[r, c] = val
        return sig

    def cons(xs):
        sig = expand(xs)
        return [f.msub(f.matmul(sig, glow), f.scale(factor, f.matmul(glow, sig)))[:, n0:]]

    sol = random_solution(rng, f, [(len(allowed), 1)], cons, density)
    return expand(sol)


def random_uqb_fixture(rng: random.Random, ctx: QContext, name: str = "uqb", max_vertices: int = 4,
                       max_arrows: int = 6, orbit_sizes: Sequence[int] | None = None, L: int = 4,
                       max_paths: int | None = None, spectrum: Sequence | None = None) -> UqbFixture:
    """Random valid data; ``max_paths`` redraws the arrows until the truncation is small enough."""
    f = ctx.field
    if orbit_sizes is None:
        r = ctx.order
        pool = [1, r, 2 * r] if r != INF else [1, 2, 3]
        pool = [o for o in pool if o <= max_vertices]
        sizes: list[int] = []
        while True:
            o = rng.choice(pool)
            if sum(sizes) + o > max_vertices:
                break
            sizes.append(o)
            if rng.random() < 0.5:
                break
    else:
        sizes = list(orbit_sizes)
    perm = _orbit_perm(sizes)
    n0 = len(perm)
    gamma = solve_gamma(rng, ctx, perm)
    while True:
        arrows, g1 = arrow_families(rng, f, perm, max_arrows, spectrum=spectrum)
        if max_paths is None or _path_count(n0, arrows, L) <= max_paths:
            break
    sigma = solve_sigma(rng, ctx, perm, arrows, g1, ctx.q_inv)
    Q = Quiver(tuple(f"e{i}" for i in range(n0)),
               tuple(Arrow(f"a{c}", f"e{s}", f"e{t}") for c, (s, t) in enumerate(arrows)))
    return UqbFixture(name, ctx, Q, UqbVertexData(perm, gamma), UqbArrowData(g1, sigma), L)


def _path_count(n0: int, arrows: Sequence[tuple], L: int) -> int:
    per = np.ones(n0, dtype=np.int64)
    total = n0
    for _ in range(L):
        nxt = np.zeros(n0, dtype=np.int64)
        for s, t in arrows:
            nxt[t] += per[s]
        per = nxt
        total += int(per.sum())
    return total


def cyclic_loop_fixture(ctx: QContext, c=1, broken_link: bool = False, L: int = 4) -> UqbFixture:
    """``r`` loops on one vertex, ``g a_k = q^k a_k`` and ``sigma(a_k) = c a_{k+1}``."""
    f = ctx.field
    r = ctx.order
    n1 = r
    g1 = f.zeros(n1, n1)
    sigma = f.zeros(n1 + 1, n1 + 1)
    for k in range(r):
        g1[k, k] = ctx.qpow(k)
        if not (broken_link and k == r - 1):
            sigma[1 + (k + 1) % r, 1 + k] = f(c)
    Q = Quiver(("v",), tuple(Arrow(f"a{k}", "v", "v") for k in range(r)))
    name = "cyclic_loops_broken" if broken_link else "cyclic_loops"
    return UqbFixture(name, ctx, Q, UqbVertexData((0,), (f.zero,)), UqbArrowData(g1, sigma), L)


BROKEN_KINDS = ("qgamma", "sigma1", "sigma2", "sigma3")


def break_fixture(rng: random.Random, fx: UqbFixture, kind: str) -> UqbFixture | None:
    """Violate exactly one condition; ``None`` if the fixture has no room for that violation."""
    f = fx.ctx.field
    n0, n1 = len(fx.quiver.vertices), len(fx.quiver.arrows)
    gamma = list(fx.vertex.gamma)
    sigma = fx.arrow.sigma.copy()
    perm = fx.vertex.perm
    vi = fx.quiver.vertex_index
    labels = [(i, i) for i in range(n0)] + [(vi[a.s], vi[a.t]) for a in fx.quiver.arrows]
    if kind == "qgamma":
        i = rng.randrange(n0)
        gamma[i] = f.add(gamma[i], f.one)
    elif kind == "sigma1":
        sigma[rng.randrange(n0 + n1), rng.randrange(n0)] = f.one
    elif kind == "sigma2":
        if not n1:
            return None
        cells = [(r, n0 + c) for c, a in enumerate(fx.quiver.arrows) for r in range(n0 + n1)
                 if labels[r] != (vi[a.s], perm[vi[a.t]])]
        if not cells:
            return None
        r, c = rng.choice(cells)
        sigma[r, c] = f.add(sigma[r, c], f.one)
    elif kind == "sigma3":
        cells = [(r, n0 + c) for c, a in enumerate(fx.quiver.arrows) for r in range(n0 + n1)
                 if labels[r] == (vi[a.s], perm[vi[a.t]])]
        rng.shuffle(cells)
        for r, c in cells:
            trial = sigma.copy()
            trial[r, c] = f.add(trial[r, c], f.one)
            cand = UqbFixture(fx.name, fx.ctx, fx.quiver, fx.vertex, UqbArrowData(fx.arrow.g1, trial), fx.L)
            try:
                cand.build(validate=True)
            except SigmaConstraintViolated as exc:
                if exc.condition == "sigma3":
                    cand.name = f"{fx.name}_broken_sigma3"
                    return cand
        return None
    else:
        raise ValueError(kind)
    return UqbFixture(f"{fx.name}_broken_{kind}", fx.ctx, fx.quiver, UqbVertexData(perm, tuple(gamma)),
                      UqbArrowData(fx.arrow.g1, sigma), fx.L)


def expected_error(kind: str):
    return (GammaConstraintViolated, None) if kind == "qgamma" else (SigmaConstraintViolated, kind)


# U_q(sl2) actions ----------------------------------------------------------

@dataclass
class SL2Fixture:
    name: str
    ctx: QContext
    quiver: Quiver
    data: UqslActionData
    L: int = 3


def _q_int(ctx: QContext, k: int):
    f = ctx.field
    q = ctx.q
    return f.div(f.sub(f.pow(q, k), f.pow(q, -k)), f.sub(q, f.inv(q)))


def highest_weight_fixture(ctx: QContext, m: int, sign: int = 1, L: int = 3) -> SL2Fixture:
    """One vertex with loops ``v_0..v_m`` spanning the module ``V(m)`` twisted by ``sign``."""
    f = ctx.field
    q = ctx.q
    n1 = m + 1
    Q = Quiver(("v",), tuple(Arrow(f"w{j}", "v", "v") for j in range(n1)))
    K1, E1, F1 = f.zeros(n1, n1), f.zeros(n1, n1), f.zeros(n1, n1)
    s = f(sign)
    for j in range(n1):
        K1[j, j] = f.mul(s, f.pow(q, m - 2 * j))
        if j > 0:
            E1[j - 1, j] = f.mul(s, _q_int(ctx, m - j + 1))
        if j < m:
            F1[j + 1, j] = _q_int(ctx, j + 1)
    sE, sF = f.zeros(n1 + 1, n1 + 1), f.zeros(n1 + 1, n1 + 1)
    sE[1:, 1:] = E1
    sF[1:, 1:] = f.matmul(K1, F1)
    data = UqslActionData((0,), (f.zero,), (f.zero,), K1, sE, sF)
    return SL2Fixture(f"V({m}){'+' if sign > 0 else '-'}", ctx, Q, data, L)


def cyclic_orbit_fixture(ctx: QContext, cE=1, variant: str = "ab", L: int = 3, sigma_scale=1) -> SL2Fixture:
    """Vertices ``Z/n`` with ``K i = i + 1``; arrows ``a_i: i -> i+1``, ``b_i: i -> i+2``, loops ``l_i``.

    ``variant``: ``"ab"`` puts ``sigmaE, sigmaF`` on ``a -> b``; ``"cycleE"`` makes
    ``sigmaE`` the 3-cycle ``a -> b -> l -> a`` with ``sigmaF = 0`` (needs ``n = 3``);
    ``"zero"`` has both sigmas zero.
    """
    f = ctx.field
    n = ctx.order
    q2 = ctx.qpow(2)
    verts = tuple(f"e{i}" for i in range(n))
    arrows = ([Arrow(f"a{i}", f"e{i}", f"e{(i + 1) % n}") for i in range(n)]
              + [Arrow(f"b{i}", f"e{i}", f"e{(i + 2) % n}") for i in range(n)]
              + [Arrow(f"l{i}", f"e{i}", f"e{i}") for i in range(n)])
    Q = Quiver(verts, tuple(arrows))
    perm = tuple((i + 1) % n for i in range(n))
    n1 = 3 * n
    K1 = f.zeros(n1, n1)
    for fam in range(3):
        for i in range(n):
            K1[fam * n + (i + 1) % n, fam * n + i] = f.one
    gE = tuple(f.mul(f.pow(q2, -i), f(cE)) for i in range(n))
    target = f.div(f.neg(ctx.q), f.pow(f.sub(f.one, q2), 2))
    gF = tuple(f.div(target, g) for g in gE)
    lo = n + n1
    sE, sF = f.zeros(lo, lo), f.zeros(lo, lo)
    A, B, Lp = (lambda i: n + i), (lambda i: n + n + i), (lambda i: n + 2 * n + i)
    c = f(sigma_scale)
    if variant == "ab":
        for i in range(n):
            sE[B(i), A(i)] = f.mul(c, f.pow(q2, -i))
            sF[B(i), A(i)] = f.mul(f(2), f.pow(q2, i))
    elif variant == "cycleE":
        if n != 3:
            raise ValueError("the 3-cycle variant needs n = 3")
        for i in range(n):
            w = f.mul(c, f.pow(q2, -i))
            sE[B(i), A(i)] = w
            sE[Lp(i), B(i)] = w
            sE[A(i), Lp(i)] = w
    elif variant != "zero":
        raise ValueError(variant)
    data = UqslActionData(perm, gE, gF, K1, sE, sF)
    return SL2Fixture(f"orbit{n}_{variant}", ctx, Q, data, L)


# representations of the Gamma quivers ----------------------------------------

def valid_scalars(rng: random.Random, ctx: QContext, m: int, allow_zero: bool = True) -> tuple:
    """``gamma_i = q^-i c`` when the order of ``q`` divides ``m``, else zeros."""
    f = ctx.field
    if ctx.is_root_of_unity and m % ctx.order == 0 and not (allow_zero and rng.random() < 0.25):
        c = _coef(rng, f)
        return tuple(f.mul(f.pow(ctx.q_inv, i), c) for i in range(m))
    return tuple(f.zero for _ in range(m))


def _random_nilpotent(rng: random.Random, field: Field, n: int) -> np.ndarray:
    b = field.zeros(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.6:
                b[i, j] = _coef(rng, field)
    return b


def _solve_maps(rng, S: GammaSetting, vertices, dims, B, target, factor, density=0.8):
    """Random maps along ``target`` arrows subject to ``B_t X = factor X B``."""
    f = S.field
    idx = {v: i for i, v in enumerate(vertices)}
    shapes = [((dims[idx[target(v)]] if target(v) in idx else 0), dims[i]) for i, v in enumerate(vertices)]

    def cons(xs):
        out = []
        for i, v in enumerate(vertices):
            t = target(v)
            if t in idx:
                out.append(f.msub(f.matmul(B[idx[t]], xs[i]), f.scale(factor, f.matmul(xs[i], B[i]))))
        return out

    return random_solution(rng, f, shapes, cons, density)


def _walk(S: GammaSetting, start: GammaVertex, steps: int, target) -> list:
    out = [start]
    v = start
    for _ in range(steps - 1):
        v = target(v)
        if v in out or S.tau(v) is None:
            break
        out.append(v)
    return out


def random_gamma_rep(rng: random.Random, ctx: QContext, m: int, mprime: int, max_vertices: int = 6,
                     max_dim: int = 3, nilpotent: bool = True) -> GammaRep:
    f = ctx.field
    S = GammaSetting(ctx, m, mprime)
    verts: list = []
    for _ in range(rng.randint(1, 2)):
        for _attempt in range(20):
            if f.characteristic:
                lam = f.random_element(rng, nonzero=True)
            else:
                lam = f(rng.choice([1, -1, 3, -3, 5, 7])) / f(rng.choice([1, 2, 3]))
            v = S.vertex(lam, rng.randrange(S.d))
            if S.tau(v) is not None and v not in verts:
                break
        else:
            continue
        room = max_vertices - len(verts)
        if room <= 0:
            break
        verts.extend(w for w in _walk(S, v, rng.randint(1, room), S.a_target) if w not in verts)
    verts = sorted(verts, key=S.sort_key)
    dims = [rng.randint(1, max_dim) for _ in verts]
    B = [_random_nilpotent(rng, f, d) if nilpotent and rng.random() < 0.5 else f.zeros(d, d) for d in dims]
    A = _solve_maps(rng, S, verts, dims, B, S.a_target, S.mu)
    return GammaRep("borel", m, mprime, verts, dims, A, B)


def random_gamma_rep_prime(rng: random.Random, ctx: QContext, m: int = 3, mprime: int = 3,
                           max_dim: int = 2, lam=None) -> GammaRep:
    """Support inside one component of the primed quiver; ``A`` then ``C`` solved against the glue."""
    f = ctx.field
    q2 = ctx.qpow(2)
    S = GammaSetting(ctx.with_q(q2), m, mprime)
    if lam is None:
        lam = f.random_element(rng, nonzero=True)
    start = S.vertex(lam, rng.randrange(S.d))
    verts = sorted(_walk(S, start, rng.randint(1, S.P), S.a_target), key=S.sort_key)
    idx = {v: i for i, v in enumerate(verts)}
    dims = [rng.randint(1, max_dim) for _ in verts]
    B = [_random_nilpotent(rng, f, d) if rng.random() < 0.4 else f.zeros(d, d) for d in dims]
    A = _solve_maps(rng, S, verts, dims, B, S.a_target, S.mu)
    shapes = [((dims[idx[S.c_target(v)]] if S.c_target(v) in idx else 0), dims[i]) for i, v in enumerate(verts)]
    muinv = f.inv(S.mu)

    def cons(xs):
        out = []
        for i, v in enumerate(verts):
            t = S.c_target(v)
            if t in idx:
                out.append(f.msub(f.matmul(B[idx[t]], xs[i]), f.scale(muinv, f.matmul(xs[i], B[i]))))
            ta, tc = S.a_target(v), S.c_target(v)
            end = S.c_target(ta)
            rows = dims[idx[end]] if end in idx else 0
            lhs = f.matmul(xs[idx[ta]], A[i]) if ta in idx else f.zeros(rows, dims[i])
            rhs = f.scale(q2, f.matmul(A[idx[tc]], xs[i])) if tc in idx else f.zeros(rows, dims[i])
            out.append(f.msub(lhs, rhs))
        return out

    C = random_solution(rng, f, shapes, cons, 0.9)
    return GammaRep("sl2", m, mprime, verts, dims, A, B, C)


def sl2_scalars(rng: random.Random, ctx: QContext, m: int) -> tuple[tuple, tuple]:
    """``gammaE_i = q^-2i c`` and ``gammaF_i = -q / ((1 - q^2)^2 gammaE_i)``."""
    f = ctx.field
    q2 = ctx.qpow(2)
    c = _coef(rng, f)
    gE = tuple(f.mul(f.pow(q2, -i), c) for i in range(m))
    target = f.div(f.neg(ctx.q), f.pow(f.sub(f.one, q2), 2))
    return gE, tuple(f.div(target, g) for g in gE)


# Taft quotients --------------------------------------------------------------

def _nth_root(field: Field, x, k: int):
    if field.is_zero(x):
        return field.zero
    for y in field.elements():
        if y and field.pow(y, k) == x:
            return field(y)
    return None


def taft_gamma_fixture(rng: random.Random, ctx: QContext, r: int, n: int, m: int, mprime: int,
                       factoring: bool, dim: int = 1) -> tuple[GammaRep, tuple, tuple, dict]:
    """A representation that does (or, perturbed, does not) satisfy the Taft relations."""
    f = ctx.field
    S = GammaSetting(ctx, m, mprime)
    for _attempt in range(200):
        # a nonzero gamma only factors on orbits of size exactly r
        gamma = valid_scalars(rng, ctx, m) if m == r else tuple(f.zero for _ in range(m))
        gammap = valid_scalars(rng, ctx, mprime) if mprime == r else tuple(f.zero for _ in range(mprime))
        table = build_gamma_T(r, n, m, mprime, gamma[0], gammap[0], ctx)
        zetas = [c["zeta"] for c in table["components"]]
        chosen = [z for z in zetas if rng.random() < 0.7] or zetas[:1]
        verts = []
        for z in chosen:
            for k in range(S.d):
                v = S.vertex(z, k)
                if S.tau(v) is not None and v not in verts:
                    verts.append(v)
        verts = sorted(verts, key=S.sort_key)
        idx = {v: i for i, v in enumerate(verts)}
        # scalar maps on each a-cycle
        a = [None] * len(verts)
        ok = True
        for i, v in enumerate(verts):
            if a[i] is not None:
                continue
            cyc = [v]
            w = S.a_target(v)
            while w != v and w in idx:
                cyc.append(w)
                w = S.a_target(w)
            vals = [_coef(rng, f) for _ in cyc]
            length = table["length"]
            target = f.zero if table["case"] == 1 else table["scalars"][S.lam(v)]
            if f.is_zero(target):
                # a zero in every window of `length` consecutive arrows
                off = rng.randrange(len(vals))
                for j in range(0, len(vals), length):
                    vals[(off + j) % len(vals)] = f.zero
            else:
                root = _nth_root(f, target, length // len(cyc))
                if root is None:
                    ok = False
                    break
                rest = f.one
                for x in vals[:-1]:
                    rest = f.mul(rest, x)
                vals[-1] = f.div(root, rest)
            for w, x in zip(cyc, vals):
                a[idx[w]] = x
        if not ok:
            continue
        if not factoring:
            j = rng.randrange(len(verts))
            a[j] = f.add(a[j], f.one) if rng.random() < 0.5 or f.is_zero(a[j]) else f.mul(a[j], f(2))
        dims = [dim] * len(verts)
        P = [_invertible(rng, f, dim) for _ in verts]
        A, B = [], []
        for i, v in enumerate(verts):
            t = S.a_target(v)
            B.append(f.zeros(dim, dim))
            if t in idx:
                core = f.scale(a[i], f.eye(dim))
                A.append(f.matmul(f.matmul(P[idx[t]], core), f.inv_matrix(P[i])))
            else:
                A.append(f.zeros(0, dim))
        W = GammaRep("borel", m, mprime, verts, dims, A, B)
        if check_gamma_T_membership(W, table, ctx).passed == factoring:
            return W, gamma, gammap, table
    raise RuntimeError("could not build a Taft fixture with the requested behaviour")


# vertex-only actions for the Etingof-Ostrik labels ---------------------------

def transitive_vertex_data(ctx: QContext, t: int, c=None) -> UqbVertexData:
    f = ctx.field
    perm = tuple((i + 1) % t for i in range(t))
    if c is None:
        return UqbVertexData(perm, tuple(f.zero for _ in range(t)))
    return UqbVertexData(perm, tuple(f.mul(f.pow(ctx.q_inv, i), f(c)) for i in range(t)))

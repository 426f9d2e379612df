"""The shipped CLI corpus, regenerated from one seed.

Each file is a complete config for one subcommand plus two extra keys the
driver ignores: ``command`` and ``expect_exit``, the exit code implied by how
the object was built (valid by construction, broken on purpose, ...).
"""

from __future__ import annotations

import random
from pathlib import Path

from . import serialize as ser
from .bimodfunctors import bimodule_action, psi, psi_prime
from .field import QContext, make_prime_field_context, make_rational_context
from .fixtures import (
    BROKEN_KINDS,
    break_fixture,
    cyclic_orbit_fixture,
    highest_weight_fixture,
    random_gamma_rep,
    random_gamma_rep_prime,
    random_uqb_fixture,
    sl2_scalars,
    taft_gamma_fixture,
    transitive_vertex_data,
    valid_scalars,
)
from .quiverpath import Quiver

DEFAULT_SEED = 20240611


def _base(ctx: QContext, command: str, expect: int, **extra) -> dict:
    doc = ser.context_to_config(ctx)
    doc.update(command=command, expect_exit=expect, **extra)
    return doc


def _uqb_doc(ctx, quiver, vertex, arrow, command, expect, **extra) -> dict:
    doc = _base(ctx, command, expect, **extra)
    doc["quiver"] = quiver.to_config()
    doc["action"] = ser.uqb_action_to_doc(quiver, vertex, arrow, ctx.field)
    return doc


def _sl2_doc(ctx, fx, command, expect, **extra) -> dict:
    doc = _base(ctx, command, expect, L=fx.L, **extra)
    doc["quiver"] = fx.quiver.to_config()
    doc["action"] = ser.uqsl_action_to_doc(fx.quiver, fx.data, ctx.field)
    return doc


def _gamma_doc(ctx, W, scalars: dict, command, expect) -> dict:
    doc = _base(ctx, command, expect)
    doc["gamma_rep"] = ser.gamma_rep_to_doc(W, ctx.field)
    doc.update({k: ser.scalar_list(ctx.field, v) for k, v in scalars.items()})
    return doc


def build_corpus(seed: int = DEFAULT_SEED) -> dict[str, dict]:
    rng = random.Random(seed)
    F7 = make_prime_field_context(7, 2)
    F13 = make_prime_field_context(13, 5)
    Q2 = make_rational_context(2)
    out: dict[str, dict] = {}

    # U_q(b) actions
    for i, ctx in enumerate((F7, F7, F13, Q2)):
        fx = random_uqb_fixture(rng, ctx, max_paths=400)
        out[f"verify_uqb_{i}"] = _uqb_doc(ctx, fx.quiver, fx.vertex, fx.arrow, "verify-action", 0,
                                          algebra="uqb", L=fx.L)
    for kind in BROKEN_KINDS:
        while True:
            fx = random_uqb_fixture(rng, F7, max_vertices=3, orbit_sizes=[3], max_paths=400)
            bad = break_fixture(rng, fx, kind)
            if bad is not None:
                break
        out[f"verify_uqb_broken_{kind}"] = _uqb_doc(F7, bad.quiver, bad.vertex, bad.arrow, "verify-action", 1,
                                                    algebra="uqb", L=bad.L)
    missing = dict(out["verify_uqb_0"])
    del missing["q"]
    out["verify_uqb_missing_q"] = {**missing, "expect_exit": 2}

    # U_q(sl2) actions
    for name, fx in (("hw2", highest_weight_fixture(F7, 2)), ("orbit3", cyclic_orbit_fixture(F7))):
        out[f"verify_uqsl2_{name}"] = _sl2_doc(F7, fx, "verify-action", 0, algebra="uqsl2")

    # Taft and small-quantum-group criteria; the bimodule of a Gamma fixture carries the action
    for factoring in (True, False):
        W, gamma, gammap, _ = taft_gamma_fixture(rng, F7, 3, 3, 3, 3, factoring)
        act = bimodule_action(psi(W, gamma, gammap, F7), F7)
        vertex, arrow = act.data
        name = "taft_factoring" if factoring else "taft_nonfactoring"
        out[name] = _uqb_doc(F7, act.algebra.quiver, vertex, arrow, "check-factorization",
                             0 if factoring else 1, algebra="taft", r=3, n=3, L=1)
    out["uqsl2_small_orbit3"] = _sl2_doc(F7, cyclic_orbit_fixture(F7, variant="zero"), "check-factorization", 0,
                                         algebra="uq_sl2", n=3)
    F5 = make_prime_field_context(5, 2)
    even = _sl2_doc(F5, highest_weight_fixture(F5, 1), "check-factorization", 2, algebra="uq_sl2", n=4)
    out["uqsl2_small_even_n"] = even

    # Gamma representations and the bimodule functors
    for name, ctx, m, mp in (("F7_3_3", F7, 3, 3), ("F13_2_4", F13, 2, 4), ("Q_1_2", Q2, 1, 2)):
        W = random_gamma_rep(rng, ctx, m, mp, max_vertices=4, max_dim=2)
        scal = {"gamma": valid_scalars(rng, ctx, m), "gammap": valid_scalars(rng, ctx, mp)}
        out[f"psi_{name}"] = _gamma_doc(ctx, W, scal, "psi", 0)
        out[f"roundtrip_{name}"] = _gamma_doc(ctx, W, scal, "roundtrip", 0)
        V = psi(W, scal["gamma"], scal["gammap"], ctx)
        out[f"phi_{name}"] = _base(ctx, "phi", 0, bimodule=ser.bimodule_to_doc(V, ctx.field))
    W = random_gamma_rep_prime(rng, F7)
    gE, gF = sl2_scalars(rng, F7, 3)
    gEp, gFp = sl2_scalars(rng, F7, 3)
    scal = {"gammaE": gE, "gammaEp": gEp, "gammaF": gF, "gammaFp": gFp}
    out["roundtrip_prime_F7"] = _gamma_doc(F7, W, scal, "roundtrip", 0)
    V = psi_prime(W, gE, gEp, gF, gFp, F7)
    out["phi_prime_F7"] = _base(F7, "phi", 0, bimodule=ser.bimodule_to_doc(V, F7.field))

    # coproduct closed form
    out["coproduct_F7_l3_k3"] = _base(F7, "coproduct-check", 0, algebra="uqb", l=3, k=3)
    out["coproduct_Q_sl2"] = _base(Q2, "coproduct-check", 0, algebra="uqsl2", l=[1, 2, 3, 4], k=[1, 2, 3, 4])

    # Etingof-Ostrik labels
    for name, t, c in (("t3_gamma1", 3, 1), ("t3_gamma0", 3, None), ("t1_gamma0", 1, None)):
        data = transitive_vertex_data(F7, t, c)
        quiver = Quiver(tuple(f"e{i}" for i in range(t)), ())
        doc = _base(F7, "classify-eo", 0, n=3, quiver=quiver.to_config())
        doc["action"] = {"g_perm": [quiver.vertices[j] for j in data.perm],
                         "gamma": ser.scalar_list(F7.field, data.gamma)}
        out[f"classify_{name}"] = doc
    return out


def write_corpus(cfg: dict, out_dir: str | Path) -> list[str]:
    seed = cfg.get("seed", DEFAULT_SEED)
    if not isinstance(seed, int):
        raise ser.ConfigError("expected an integer", "seed")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for name, doc in sorted(build_corpus(seed).items()):
        (out_dir / f"{name}.json").write_text(ser.dumps(doc))
        names.append(f"{name}.json")
    return names

"""Command-line driver: one subcommand per verification or transform.

Every subcommand reads a JSON config and prints a JSON report with sorted
keys. Exit codes: 0 pass, 1 verification failure (report carries a witness
or the violated condition), 2 malformed config or any other library error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import serialize as ser
from .bimodfunctors import (
    SL2Bimodule,
    classify_etingof_ostrik,
    phi,
    phi_prime,
    psi,
    psi_prime,
    verify_round_trip_prime,
    verify_round_trip_V,
    verify_round_trip_W,
)
from .corpus import write_corpus
from .errors import (
    ConfigError,
    GammaConstraintViolated,
    GammaEFConditionViolated,
    GroupActionIncompatible,
    QQWError,
    SigmaConstraintViolated,
)
from .freehopf import BorelAlgebra, SL2Algebra, skew_power, skew_power_closed_form
from .hopfaction import (
    build_uqb_action,
    build_uqsl_action,
    check_taft_factorization,
    check_uqsl_factorization,
    validate_vertex_data,
    verify_hopf_action,
    verify_uqsl_action,
)

# data that is well-formed but violates a defining condition of an action
_VERIFICATION_ERRORS = (GammaConstraintViolated, SigmaConstraintViolated, GammaEFConditionViolated,
                        GroupActionIncompatible)


class Outcome:
    def __init__(self, code: int, report: dict, payload: dict | None = None) -> None:
        self.code = code
        self.report = report
        self.payload = payload


def _int(cfg: dict, key: str, default=None) -> int:
    val = cfg.get(key, default)
    if val is None:
        raise ConfigError("missing key", key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError("expected an integer", key)
    return val


def _int_list(cfg: dict, key: str) -> list[int]:
    val = ser.require(cfg, key)
    vals = val if isinstance(val, list) else [val]
    if not vals or any(not isinstance(v, int) or v < 1 for v in vals):
        raise ConfigError("expected a positive integer or a list of them", key)
    return vals


def _algebra(cfg: dict, allowed: tuple) -> str:
    alg = ser.require(cfg, "algebra")
    if alg not in allowed:
        raise ConfigError(f"expected one of {', '.join(allowed)}", "algebra")
    return alg


def _build_action(cfg: dict, ctx, sl2: bool, L: int):
    quiver = ser.quiver_from_doc(ser.require(cfg, "quiver"))
    act = ser.require(cfg, "action")
    if sl2:
        data = ser.uqsl_action_from_doc(quiver, act, ctx.field)
        return build_uqsl_action(quiver, data, L, ctx)
    vdata, adata = ser.uqb_action_from_doc(quiver, act, ctx.field)
    return build_uqb_action(quiver, vdata, adata, L, ctx)


# subcommands -------------------------------------------------------------------

def cmd_verify_action(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    sl2 = _algebra(cfg, ("uqb", "uqsl2")) == "uqsl2"
    action = _build_action(cfg, ctx, sl2, _int(cfg, "L", 4))
    rep = (verify_uqsl_action if sl2 else verify_hopf_action)(action, threads)
    return Outcome(0 if rep.passed else 1, rep.to_dict())


def cmd_check_factorization(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    alg = _algebra(cfg, ("taft", "uq_sl2"))
    L = _int(cfg, "L", 4)
    n = _int(cfg, "n")
    if alg == "taft":
        action = _build_action(cfg, ctx, False, L)
        rep = check_taft_factorization(action, _int(cfg, "r"), n)
    else:
        action = _build_action(cfg, ctx, True, L)
        rep = check_uqsl_factorization(action, n)
    out = rep.to_dict()
    out["factors"] = rep.passed
    return Outcome(0 if rep.passed else 1, out)


def _gamma_rep_input(cfg: dict, ctx):
    W = ser.gamma_rep_from_doc(ser.require(cfg, "gamma_rep"), ctx)
    f = ctx.field
    if W.mode == "sl2":
        scal = tuple(ser.parse_scalars(f, ser.require(cfg, k), k, m)
                     for k, m in (("gammaE", W.m), ("gammaEp", W.mprime), ("gammaF", W.m), ("gammaFp", W.mprime)))
    else:
        scal = (ser.parse_scalars(f, ser.require(cfg, "gamma"), "gamma", W.m),
                ser.parse_scalars(f, ser.require(cfg, "gammap"), "gammap", W.mprime))
    return W, scal


def cmd_phi(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    V = ser.bimodule_from_doc(ser.require(cfg, "bimodule"), ctx.field)
    W = phi_prime(V, ctx) if isinstance(V, SL2Bimodule) else phi(V, ctx)
    doc = ser.context_to_config(ctx)
    doc["gamma_rep"] = ser.gamma_rep_to_doc(W, ctx.field)
    return Outcome(0, {"passed": True, "vertices": len(W.vertices), "dimension": W.total_dim()}, doc)


def cmd_psi(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    W, scal = _gamma_rep_input(cfg, ctx)
    V = psi_prime(W, *scal, ctx) if W.mode == "sl2" else psi(W, *scal, ctx)
    doc = ser.context_to_config(ctx)
    doc["bimodule"] = ser.bimodule_to_doc(V, ctx.field)
    return Outcome(0, {"passed": True, "dimension": len(V.labels)}, doc)


def cmd_roundtrip(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    if "bimodule" in cfg:
        V = ser.bimodule_from_doc(cfg["bimodule"], ctx.field)
        if isinstance(V, SL2Bimodule):
            W = phi_prime(V, ctx)
            rep = verify_round_trip_prime(W, V.gammaE, V.gammaEp, V.gammaF, V.gammaFp, ctx)
        else:
            rep = verify_round_trip_V(V, ctx)
    else:
        W, scal = _gamma_rep_input(cfg, ctx)
        rep = (verify_round_trip_prime if W.mode == "sl2" else verify_round_trip_W)(W, *scal, ctx)
    return Outcome(0 if rep.passed else 1, rep.to_dict())


def cmd_coproduct_check(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    alg = BorelAlgebra(ctx) if _algebra(cfg, ("uqb", "uqsl2")) == "uqb" else SL2Algebra(ctx)
    checks = {}
    for l in _int_list(cfg, "l"):
        for k in _int_list(cfg, "k"):
            lhs = skew_power_closed_form(l, k, alg)
            rhs = alg.coproduct_power(l, skew_power(alg, k))
            checks[f"l={l},k={k}"] = lhs == rhs
    passed = all(checks.values())
    return Outcome(0 if passed else 1, {"passed": passed, "checks": checks})


def cmd_classify_eo(cfg: dict, threads: int | None) -> Outcome:
    ctx = ser.context_from_doc(cfg)
    quiver = ser.quiver_from_doc(ser.require(cfg, "quiver"))
    data = ser.vertex_data_from_doc(quiver, ser.require(cfg, "action"), ctx.field)
    validate_vertex_data(quiver, data, ctx)
    out = classify_etingof_ostrik(data, _int(cfg, "n"), ctx)
    out["passed"] = True
    return Outcome(0, out)


def cmd_fixtures(cfg: dict, threads: int | None, out_dir: str | None = None) -> Outcome:
    written = write_corpus(cfg, out_dir or ".")
    return Outcome(0, {"passed": True, "written": written})


COMMANDS: dict[str, Callable[[dict, int | None], Outcome]] = {
    "verify-action": cmd_verify_action,
    "check-factorization": cmd_check_factorization,
    "phi": cmd_phi,
    "psi": cmd_psi,
    "roundtrip": cmd_roundtrip,
    "coproduct-check": cmd_coproduct_check,
    "classify-eo": cmd_classify_eo,
    "fixtures": cmd_fixtures,
}


def _error_report(exc: QQWError) -> dict:
    err = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, ConfigError):
        err["path"] = exc.path
    if isinstance(exc, SigmaConstraintViolated):
        err["condition"] = exc.condition
    return {"passed": False, "error": err}


def run(command: str, cfg: dict, threads: int | None = None, out_dir: str | None = None) -> Outcome:
    """Run one subcommand on a parsed config; never raises library errors."""
    try:
        if command == "fixtures":
            out = cmd_fixtures(cfg, threads, out_dir)
        else:
            out = COMMANDS[command](cfg, threads)
    except _VERIFICATION_ERRORS as exc:
        out = Outcome(1, _error_report(exc))
    except QQWError as exc:
        out = Outcome(2, _error_report(exc))
    out.report = {"command": command, **out.report}
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qqw", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", help="output file (transforms: the object, others: the report); "
                                      "for fixtures, the target directory")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for verification")
    args = parser.parse_args(argv)
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        sys.stdout.write(ser.dumps({"command": args.command, "passed": False,
                                    "error": {"code": "ConfigError", "message": str(exc), "path": ""}}))
        return 2
    if args.command == "fixtures":
        out = run("fixtures", cfg, out_dir=args.out or str(Path(args.config).parent))
        sys.stdout.write(ser.dumps(out.report))
        return out.code
    out = run(args.command, cfg, args.threads)
    report = out.report
    if args.out:
        Path(args.out).write_text(ser.dumps(out.payload if out.payload is not None else report))
    elif out.payload is not None:
        report = {**report, "output": out.payload}
    sys.stdout.write(ser.dumps(report))
    return out.code


if __name__ == "__main__":
    sys.exit(main())

"""JSON forms of contexts, actions, bimodules and Gamma representations.

Scalars are strings (``"3/7"``, ``"5"``). Matrices are row-major lists of
rows; column ``c`` is the image of basis vector ``c``. Documents are dumped
with sorted keys so identical objects give identical bytes.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

import numpy as np

from .bimodfunctors import BorelBimodule, GammaRep, GammaSetting, GammaVertex, SL2Bimodule
from .errors import ConfigError
from .field import Field, QContext, context_from_config
from .hopfaction import UqbArrowData, UqbVertexData, UqslActionData
from .quiverpath import Quiver


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def context_to_config(ctx: QContext) -> dict:
    return {"field": ctx.field.describe(), "q": ctx.field.fmt(ctx.q)}


# scalars and matrices ----------------------------------------------------------

def scalar_list(field: Field, xs: Sequence) -> list[str]:
    return [field.fmt(x) for x in xs]


def parse_scalars(field: Field, doc: Any, path: str, length: int | None = None) -> tuple:
    if not isinstance(doc, list):
        raise ConfigError("expected a list of scalars", path)
    if length is not None and len(doc) != length:
        raise ConfigError(f"expected {length} entries, got {len(doc)}", path)
    out = []
    for i, x in enumerate(doc):
        try:
            out.append(field(x))
        except ConfigError as exc:
            raise ConfigError(str(exc), f"{path}[{i}]") from exc
    return tuple(out)


def matrix_doc(field: Field, M: np.ndarray) -> list:
    return [[field.fmt(x) for x in row] for row in M]


def parse_matrix(field: Field, doc: Any, path: str, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    if doc in (None, []) and (rows == 0 or cols == 0):
        return field.zeros(rows, cols)
    if not isinstance(doc, list) or len(doc) != rows or any(not isinstance(r, list) or len(r) != cols for r in doc):
        raise ConfigError(f"expected a {rows}x{cols} matrix", path)
    M = field.zeros(rows, cols)
    for i, row in enumerate(doc):
        for j, x in enumerate(row):
            try:
                M[i, j] = field(x)
            except ConfigError as exc:
                raise ConfigError(str(exc), f"{path}[{i}][{j}]") from exc
    return M


def require(doc: dict, key: str, path: str = "") -> Any:
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", path)
    if key not in doc:
        raise ConfigError("missing key", f"{path}.{key}" if path else key)
    return doc[key]


# actions --------------------------------------------------------------------

def perm_from_doc(quiver: Quiver, doc: Any, path: str) -> tuple:
    vi = quiver.vertex_index
    if not isinstance(doc, list) or len(doc) != len(quiver.vertices):
        raise ConfigError("expected one target vertex per vertex", path)
    try:
        return tuple(vi[v] for v in doc)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"unknown vertex {exc}", path) from exc


def uqb_action_to_doc(quiver: Quiver, vertex: UqbVertexData, arrow: UqbArrowData, field: Field) -> dict:
    return {
        "g_perm": [quiver.vertices[j] for j in vertex.perm],
        "gamma": scalar_list(field, vertex.gamma),
        "g_on_arrows": matrix_doc(field, arrow.g1),
        "sigma": matrix_doc(field, arrow.sigma),
    }


def vertex_data_from_doc(quiver: Quiver, doc: dict, field: Field, path: str = "action") -> UqbVertexData:
    perm = perm_from_doc(quiver, require(doc, "g_perm", path), f"{path}.g_perm")
    gamma = parse_scalars(field, require(doc, "gamma", path), f"{path}.gamma", len(quiver.vertices))
    return UqbVertexData(perm, gamma)


def uqb_action_from_doc(quiver: Quiver, doc: dict, field: Field, path: str = "action"):
    n0, n1 = len(quiver.vertices), len(quiver.arrows)
    vdata = vertex_data_from_doc(quiver, doc, field, path)
    g1 = parse_matrix(field, require(doc, "g_on_arrows", path), f"{path}.g_on_arrows", (n1, n1))
    sigma = parse_matrix(field, require(doc, "sigma", path), f"{path}.sigma", (n0 + n1, n0 + n1))
    return vdata, UqbArrowData(g1, sigma)


def uqsl_action_to_doc(quiver: Quiver, data: UqslActionData, field: Field) -> dict:
    return {
        "g_perm": [quiver.vertices[j] for j in data.perm],
        "gammaE": scalar_list(field, data.gammaE),
        "gammaF": scalar_list(field, data.gammaF),
        "g_on_arrows": matrix_doc(field, data.K1),
        "sigmaE": matrix_doc(field, data.sigmaE),
        "sigmaF": matrix_doc(field, data.sigmaF),
    }


def uqsl_action_from_doc(quiver: Quiver, doc: dict, field: Field, path: str = "action") -> UqslActionData:
    n0, n1 = len(quiver.vertices), len(quiver.arrows)
    lo = n0 + n1
    return UqslActionData(
        perm_from_doc(quiver, require(doc, "g_perm", path), f"{path}.g_perm"),
        parse_scalars(field, require(doc, "gammaE", path), f"{path}.gammaE", n0),
        parse_scalars(field, require(doc, "gammaF", path), f"{path}.gammaF", n0),
        parse_matrix(field, require(doc, "g_on_arrows", path), f"{path}.g_on_arrows", (n1, n1)),
        parse_matrix(field, require(doc, "sigmaE", path), f"{path}.sigmaE", (lo, lo)),
        parse_matrix(field, require(doc, "sigmaF", path), f"{path}.sigmaF", (lo, lo)),
    )


def quiver_from_doc(doc: Any) -> Quiver:
    return Quiver.from_config(doc)


# bimodules -------------------------------------------------------------------

def bimodule_to_doc(V, field: Field) -> dict:
    doc = {"m": V.m, "mprime": V.mprime, "blocks": [list(lab) for lab in V.labels]}
    if isinstance(V, SL2Bimodule):
        doc.update(mode="sl2", g_on_arrows=matrix_doc(field, V.K), sigmaE=matrix_doc(field, V.sigmaE),
                   sigmaF=matrix_doc(field, V.sigmaF), gammaE=scalar_list(field, V.gammaE),
                   gammaEp=scalar_list(field, V.gammaEp), gammaF=scalar_list(field, V.gammaF),
                   gammaFp=scalar_list(field, V.gammaFp))
    else:
        doc.update(mode="borel", g_on_arrows=matrix_doc(field, V.g), sigma=matrix_doc(field, V.sigma),
                   gamma=scalar_list(field, V.gamma), gammap=scalar_list(field, V.gammap))
    return doc


def bimodule_from_doc(doc: dict, field: Field, path: str = "bimodule"):
    m, mp = require(doc, "m", path), require(doc, "mprime", path)
    if not (isinstance(m, int) and isinstance(mp, int) and m > 0 and mp > 0):
        raise ConfigError("m and mprime must be positive integers", path)
    blocks = require(doc, "blocks", path)
    labels = []
    for c, lab in enumerate(blocks):
        if not (isinstance(lab, list) and len(lab) == 2 and 0 <= lab[0] < m and 0 <= lab[1] < mp):
            raise ConfigError("expected [i, j] with 0 <= i < m, 0 <= j < mprime", f"{path}.blocks[{c}]")
        labels.append((int(lab[0]), int(lab[1])))
    n = len(labels)
    mode = doc.get("mode", "borel")
    g = parse_matrix(field, require(doc, "g_on_arrows", path), f"{path}.g_on_arrows", (n, n))
    if mode == "sl2":
        return SL2Bimodule(
            m, mp, labels, g,
            parse_matrix(field, require(doc, "sigmaE", path), f"{path}.sigmaE", (n, n)),
            parse_matrix(field, require(doc, "sigmaF", path), f"{path}.sigmaF", (n, n)),
            parse_scalars(field, require(doc, "gammaE", path), f"{path}.gammaE", m),
            parse_scalars(field, require(doc, "gammaEp", path), f"{path}.gammaEp", mp),
            parse_scalars(field, require(doc, "gammaF", path), f"{path}.gammaF", m),
            parse_scalars(field, require(doc, "gammaFp", path), f"{path}.gammaFp", mp),
        )
    if mode != "borel":
        raise ConfigError(f"unknown mode {mode!r}", f"{path}.mode")
    return BorelBimodule(
        m, mp, labels, g,
        parse_matrix(field, require(doc, "sigma", path), f"{path}.sigma", (n, n)),
        parse_scalars(field, require(doc, "gamma", path), f"{path}.gamma", m),
        parse_scalars(field, require(doc, "gammap", path), f"{path}.gammap", mp),
    )


# Gamma representations --------------------------------------------------------

def gamma_rep_to_doc(W: GammaRep, field: Field) -> dict:
    doc = {
        "mode": W.mode,
        "m": W.m,
        "mprime": W.mprime,
        "vertices": [{"coset": field.fmt(v.coset), "s": v.s, "k": v.k, "dim": d}
                     for v, d in zip(W.vertices, W.dims)],
        "A": [matrix_doc(field, x) for x in W.A],
        "B": [matrix_doc(field, x) for x in W.B],
    }
    if W.mode == "sl2":
        doc["C"] = [matrix_doc(field, x) for x in W.C]
    return doc


def gamma_rep_from_doc(doc: dict, ctx: QContext, path: str = "gamma_rep") -> GammaRep:
    f = ctx.field
    mode = doc.get("mode", "borel")
    if mode not in ("borel", "sl2"):
        raise ConfigError(f"unknown mode {mode!r}", f"{path}.mode")
    m, mp = require(doc, "m", path), require(doc, "mprime", path)
    if not (isinstance(m, int) and isinstance(mp, int) and m > 0 and mp > 0):
        raise ConfigError("m and mprime must be positive integers", path)
    bctx = ctx.with_q(ctx.qpow(2)) if mode == "sl2" else ctx
    S = GammaSetting(bctx, m, mp)
    verts, dims = [], []
    for i, vd in enumerate(require(doc, "vertices", path)):
        p = f"{path}.vertices[{i}]"
        try:
            v = GammaVertex(f(require(vd, "coset", p)), int(require(vd, "s", p)), int(require(vd, "k", p)))
            dim = int(require(vd, "dim", p))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), p) from exc
        if dim < 0:
            raise ConfigError("negative dimension", p)
        verts.append(v)
        dims.append(dim)
    idx = {v: i for i, v in enumerate(verts)}

    def maps(key, target):
        docs = require(doc, key, path)
        if not isinstance(docs, list) or len(docs) != len(verts):
            raise ConfigError("expected one matrix per vertex", f"{path}.{key}")
        out = []
        for i, v in enumerate(verts):
            t = target(v) if target else v
            rows = dims[idx[t]] if t in idx else 0
            out.append(parse_matrix(f, docs[i], f"{path}.{key}[{i}]", (rows, dims[i])))
        return out

    A = maps("A", S.a_target)
    B = maps("B", None)
    C = maps("C", S.c_target) if mode == "sl2" else None
    return GammaRep(mode, m, mp, verts, dims, A, B, C)


def context_from_doc(doc: dict) -> QContext:
    return context_from_config(doc)

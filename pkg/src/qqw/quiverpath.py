"""Quivers, truncated path algebras, and linear maps on their graded pieces.

Paths are read left to right: ``a*b`` means ``a`` then ``b`` and requires
``t(a) == s(b)``. The truncated algebra keeps every path of length ``<= L``;
its basis is ordered by length, then vertices in quiver order for length 0,
then lexicographically by arrow position.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Hashable, Sequence

import numpy as np

from .errors import ConfigError, NotBimoduleCompatible, TruncationOverflow
from .field import Field


@dataclass(frozen=True)
class Arrow:
    id: Hashable
    s: Hashable
    t: Hashable


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")
        if vset & set(ids):
            raise ValueError("vertex and arrow ids must be distinct")
        for a in self.arrows:
            if a.s not in vset or a.t not in vset:
                raise ValueError(f"arrow {a.id!r} has an endpoint outside the vertex set")

    @classmethod
    def from_config(cls, cfg: dict) -> "Quiver":
        try:
            vertices = tuple(cfg["vertices"])
            arrows = tuple(Arrow(a["id"], a["s"], a["t"]) for a in cfg["arrows"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad quiver: {exc}", "quiver") from exc
        try:
            return cls(vertices, arrows)
        except ValueError as exc:
            raise ConfigError(str(exc), "quiver") from exc

    def to_config(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "s": a.s, "t": a.t} for a in self.arrows],
        }

    @property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def arrow_index(self) -> dict:
        return {a.id: i for i, a in enumerate(self.arrows)}


@dataclass(frozen=True)
class Path:
    """A vertex (``arrows == ()``) or a composable arrow sequence."""

    start: Hashable
    end: Hashable
    arrows: tuple = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return f"e_{self.start}" if not self.arrows else "*".join(str(a) for a in self.arrows)


class PathAlgebra:
    """The path algebra of ``quiver`` truncated at length ``L`` over ``field``."""

    def __init__(self, quiver: Quiver, field: Field, L: int = 4) -> None:
        if L < 0:
            raise ValueError("L must be nonnegative")
        self.quiver = quiver
        self.field = field
        self.L = L
        by_id = {a.id: a for a in quiver.arrows}
        basis: list[Path] = [Path(v, v) for v in quiver.vertices]
        layer = [Path(a.s, a.t, (a.id,)) for a in quiver.arrows] if L >= 1 else []
        self.degree_start = [0]
        while layer:
            self.degree_start.append(len(basis))
            basis.extend(layer)
            if len(self.degree_start) > L:
                break
            layer = [Path(p.start, by_id[a.id].t, p.arrows + (a.id,))
                     for p in layer for a in quiver.arrows if a.s == p.end]
        self.degree_start.append(len(basis))
        # pad so degree_start[d]..degree_start[d+1] is valid for all d <= L
        while len(self.degree_start) < L + 2:
            self.degree_start.append(len(basis))
        self.basis = basis
        self.index = {p: i for i, p in enumerate(basis)}
        self.dim = len(basis)
        self.degrees = np.array([p.length for p in basis], dtype=np.int64)
        self.n0 = len(quiver.vertices)
        self.n1 = len(quiver.arrows)
        self._build_tables()

    def _build_tables(self) -> None:
        n = self.dim
        concat = np.full((n, n), -1, dtype=np.int64)
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                if p.end != q.start or p.length + q.length > self.L:
                    continue
                if p.length == 0:
                    concat[i, j] = j
                elif q.length == 0:
                    concat[i, j] = i
                else:
                    concat[i, j] = self.index[Path(p.start, q.end, p.arrows + q.arrows)]
        self.concat = concat
        # p = head * tail with head the first arrow; -1 for paths of length < 2
        self.head = np.full(n, -1, dtype=np.int64)
        self.tail = np.full(n, -1, dtype=np.int64)
        by_id = {a.id: a for a in self.quiver.arrows}
        for i, p in enumerate(self.basis):
            if p.length >= 2:
                first = by_id[p.arrows[0]]
                self.head[i] = self.index[Path(first.s, first.t, (first.id,))]
                self.tail[i] = self.index[Path(first.t, p.end, p.arrows[1:])]
        # left multiplication by basis path u: rows v -> rows u*v
        self.left_src = []
        self.left_dst = []
        for u in range(n):
            src = np.nonzero(concat[u] >= 0)[0]
            self.left_src.append(src)
            self.left_dst.append(concat[u, src])

    def vertex(self, v) -> int:
        return self.index[Path(v, v)]

    def arrow(self, a) -> int:
        arr = next(x for x in self.quiver.arrows if x.id == a)
        return self.index[Path(arr.s, arr.t, (a,))]

    def degree_slice(self, d: int) -> slice:
        return slice(self.degree_start[d], self.degree_start[d + 1])

    def low_slice(self) -> slice:
        """Indices of vertices and arrows (degree <= 1)."""
        return slice(0, self.degree_start[min(2, len(self.degree_start) - 1)])

    # vectors
    def zero_vector(self) -> np.ndarray:
        return self.field.zeros(self.dim, 1)[:, 0]

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero_vector()
        v[i] = self.field.one
        return v

    def identity_vector(self) -> np.ndarray:
        v = self.zero_vector()
        v[: self.n0] = self.field.one
        return v

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two vectors; raises TruncationOverflow if a product leaves the truncation."""
        f = self.field
        out = self.zero_vector()
        xs = np.nonzero(x)[0]
        ys = np.nonzero(y)[0]
        for i in xs:
            for j in ys:
                p, q = self.basis[i], self.basis[j]
                if p.end != q.start:
                    continue
                if p.length + q.length > self.L:
                    raise TruncationOverflow(f"{p} * {q} exceeds length {self.L}")
                k = self.concat[i, j]
                out[k] = f.add(out[k], f.mul(x[i], y[j]))
        return out

    def left_apply(self, vec: np.ndarray, mat: np.ndarray) -> np.ndarray:
        """Rows of ``vec * mat[:, c]`` for every column ``c``; out-of-range products are dropped."""
        f = self.field
        out = f.zeros(self.dim, mat.shape[1])
        for u in np.nonzero(vec)[0]:
            src, dst = self.left_src[u], self.left_dst[u]
            if src.size:
                out[dst] = f.madd(out[dst], f.scale(vec[u], mat[src]))
        return out

    def format_vector(self, v: np.ndarray) -> str:
        f = self.field
        terms = [f"{f.fmt(v[i])}*{self.basis[i]}" for i in np.nonzero(v)[0]]
        return " + ".join(terms) if terms else "0"

    def block_of(self, i: int) -> tuple:
        p = self.basis[i]
        return (p.start, p.end)


@dataclass
class PathVector:
    """A linear combination of paths, stored sparsely by path."""

    algebra: PathAlgebra
    coeffs: dict = dc_field(default_factory=dict)

    @classmethod
    def from_array(cls, algebra: PathAlgebra, v: np.ndarray) -> "PathVector":
        return cls(algebra, {algebra.basis[i]: v[i] for i in np.nonzero(v)[0]})

    @classmethod
    def path(cls, algebra: PathAlgebra, p: Path) -> "PathVector":
        return cls(algebra, {p: algebra.field.one})

    def to_array(self) -> np.ndarray:
        v = self.algebra.zero_vector()
        for p, c in self.coeffs.items():
            if p not in self.algebra.index:
                raise TruncationOverflow(f"{p} is longer than L = {self.algebra.L}")
            v[self.algebra.index[p]] = self.algebra.field(c)
        return v

    def __mul__(self, other: "PathVector") -> "PathVector":
        return PathVector.from_array(self.algebra, self.algebra.multiply(self.to_array(), other.to_array()))

    def __add__(self, other: "PathVector") -> "PathVector":
        f = self.algebra.field
        return PathVector.from_array(self.algebra, f.madd(self.to_array()[:, None], other.to_array()[:, None])[:, 0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathVector):
            return NotImplemented
        return self.algebra.field.equal(self.to_array(), other.to_array())

    def __str__(self) -> str:
        return self.algebra.format_vector(self.to_array())


@dataclass
class GradedLinearMap:
    """Dense matrix between two graded pieces; column ``c`` is the image of source basis path ``c``."""

    algebra: PathAlgebra
    src_degree: int
    dst_degree: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        s = self.algebra.degree_slice(self.src_degree)
        d = self.algebra.degree_slice(self.dst_degree)
        shape = (d.stop - d.start, s.stop - s.start)
        if self.matrix.shape != shape:
            raise ValueError(f"matrix shape {self.matrix.shape} does not match path counts {shape}")


def arrow_space_decomposition(
    field: Field,
    labels: Sequence[tuple],
    matrix: np.ndarray | None = None,
) -> dict:
    """Split a space with homogeneous basis into blocks ``V^i_j = e_i V e_j``.

    ``labels[c]`` is the ``(i, j)`` block of basis vector ``c``. With a
    ``matrix`` (columns = images of basis vectors) each block entry is the
    sub-matrix from that block to every block it hits; otherwise the
    result maps blocks to the basis indices they contain.
    """
    blocks: dict = {}
    for c, lab in enumerate(labels):
        if not (isinstance(lab, tuple) and len(lab) == 2):
            raise NotBimoduleCompatible(f"basis vector {c} is not supported in a single block")
        blocks.setdefault(lab, []).append(c)
    if matrix is None:
        return blocks
    out: dict = {}
    for src, cols in blocks.items():
        for dst, rows in blocks.items():
            sub = matrix[np.ix_(rows, cols)]
            if not field.is_zero_matrix(sub) or src == dst:
                out[(dst, src)] = sub
    # reassembly check: nothing may be lost
    rebuilt = field.zeros(*matrix.shape)
    for (dst, src), sub in out.items():
        rebuilt[np.ix_(blocks[dst], blocks[src])] = sub
    if not field.equal(rebuilt, matrix):
        raise NotBimoduleCompatible("matrix has entries outside the block structure")
    return out


def path_blocks(algebra: PathAlgebra, indices: Sequence[int]) -> list[tuple]:
    """Block labels ``(s, t)`` of the given basis paths."""
    return [algebra.block_of(i) for i in indices]

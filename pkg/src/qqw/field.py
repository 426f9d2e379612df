"""Exact scalar and matrix arithmetic over the rationals or a prime field.

Scalars are plain Python values: ``Fraction`` for the rationals and ``int``
residues in ``[0, p)`` for F_p. A :class:`Field` object supplies the
arithmetic, so the same algorithms run over either backend. Matrices are
numpy arrays, ``dtype=object`` holding Fractions, or ``int64`` residues.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError, NotPrime, QIsTrivial, SingularMatrix, ZeroInput

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface of the two backends."""

    kind: str
    characteristic: int

    # scalars
    def __call__(self, value: Any) -> Any:
        raise NotImplementedError

    @property
    def zero(self) -> Any:
        return self(0)

    @property
    def one(self) -> Any:
        return self(1)

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_zero(self, a) -> bool:
        return bool(a == 0)

    def fmt(self, a) -> str:
        raise NotImplementedError

    def sort_key(self, a):
        raise NotImplementedError

    def random_element(self, rng: random.Random, nonzero: bool = False):
        raise NotImplementedError

    def elements(self) -> Iterable:
        raise TypeError(f"{self!r} is infinite")

    def describe(self) -> dict:
        raise NotImplementedError

    # matrices
    dtype: Any

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.one
        return m

    def matrix(self, rows: Sequence[Sequence[Any]], shape: tuple[int, int] | None = None) -> np.ndarray:
        rows = list(rows)
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        m = self.zeros(*shape)
        if len(rows) != shape[0]:
            raise ValueError(f"expected {shape[0]} rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != shape[1]:
                raise ValueError(f"row {i}: expected {shape[1]} entries, got {len(row)}")
            for j, v in enumerate(row):
                m[i, j] = self(v)
        return m

    def vector(self, values: Sequence[Any]) -> np.ndarray:
        return self.matrix([[v] for v in values], shape=(len(values), 1))[:, 0]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def madd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def msub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and bool(np.all(a == b))

    def is_zero_matrix(self, a: np.ndarray) -> bool:
        return bool(np.all(a == 0))

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        raise NotImplementedError

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def nullspace(self, a: np.ndarray) -> np.ndarray:
        """Basis of ``{v : a v = 0}`` as the columns of the result, in RREF-canonical form."""
        rows, cols = a.shape
        if rows == 0:
            return self.eye(cols)
        r, pivots = self.rref(a)
        free = [j for j in range(cols) if j not in set(pivots)]
        basis = self.zeros(cols, len(free))
        for k, fj in enumerate(free):
            basis[fj, k] = self.one
            for i, pj in enumerate(pivots):
                basis[pj, k] = self.neg(r[i, fj])
        return basis

    def column_space(self, a: np.ndarray) -> np.ndarray:
        """Canonical basis of the column span (reduced echelon, as columns)."""
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], 0)
        r, pivots = self.rref(a.T.copy())
        return r[: len(pivots)].T.copy()

    def inv_matrix(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        if a.shape != (n, n):
            raise SingularMatrix("not square")
        if n == 0:
            return self.zeros(0, 0)
        aug = np.concatenate([a, self.eye(n)], axis=1)
        r, pivots = self.rref(aug)
        if list(pivots[:n]) != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return r[:, n:].copy()

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact solution ``x`` of ``a x = b`` for ``a`` of full column rank."""
        n = a.shape[1]
        aug = np.concatenate([a, b], axis=1)
        r, pivots = self.rref(aug)
        pivots = list(pivots)
        if pivots[:n] != list(range(n)) or any(pj >= n for pj in pivots):
            raise SingularMatrix("system has no unique solution")
        return r[:n, n:].copy()

    def matpow(self, a: np.ndarray, k: int) -> np.ndarray:
        if k < 0:
            return self.matpow(self.inv_matrix(a), -k)
        result = self.eye(a.shape[0])
        base = a
        while k:
            if k & 1:
                result = self.matmul(result, base)
            base = self.matmul(base, base)
            k >>= 1
        return result

    def fmt_matrix(self, a: np.ndarray) -> list[list[str]]:
        return [[self.fmt(v) for v in row] for row in a]

    def fmt_vector(self, v: np.ndarray) -> list[str]:
        return [self.fmt(x) for x in v]


class RationalField(Field):
    kind = "rational"
    characteristic = 0
    dtype = object

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"cannot parse {value!r} as a rational") from exc
        raise ConfigError(f"cannot interpret {value!r} as a rational scalar")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def fmt(self, a) -> str:
        return str(Fraction(a))

    def sort_key(self, a):
        return Fraction(a)

    def random_element(self, rng, nonzero=False):
        while True:
            v = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            if v or not nonzero:
                return v

    def describe(self) -> dict:
        return {"kind": "rational"}

    def zeros(self, rows, cols):
        return np.full((rows, cols), Fraction(0), dtype=object)

    def matmul(self, a, b):
        # outer-product accumulation skips the many zero entries of path-algebra matrices
        out = self.zeros(a.shape[0], b.shape[1])
        for k in range(a.shape[1]):
            rows = np.nonzero(a[:, k])[0]
            if rows.size == 0:
                continue
            cols = np.nonzero(b[k])[0]
            if cols.size:
                out[np.ix_(rows, cols)] += np.multiply.outer(a[rows, k], b[k, cols])
        return out

    def madd(self, a, b):
        return a + b

    def msub(self, a, b):
        return a - b

    def scale(self, c, a):
        out = self.zeros(*a.shape) if a.ndim == 2 else np.full(a.shape, Fraction(0), dtype=object)
        if c == 0 or not a.size:
            return out
        idx = np.nonzero(a)
        out[idx] = a[idx] * c
        return out

    def rref(self, a):
        r = a.copy()
        rows, cols = r.shape
        pivots: list[int] = []
        row = 0
        for col in range(cols):
            if row == rows:
                break
            piv = next((i for i in range(row, rows) if r[i, col] != 0), None)
            if piv is None:
                continue
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            r[row] = r[row] / r[row, col]
            for i in range(rows):
                if i != row and r[i, col] != 0:
                    r[i] = r[i] - r[i, col] * r[row]
            pivots.append(col)
            row += 1
        return r, pivots

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("Q")


class PrimeField(Field):
    kind = "prime"
    dtype = np.int64

    def __init__(self, p: int) -> None:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p >= _kernels.MAX_MODULUS:
            raise NotPrime(f"modulus {p} exceeds the supported range")
        self.p = p
        self.characteristic = p

    def __call__(self, value):
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, str):
            try:
                return self(Fraction(value.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"cannot parse {value!r} in F_{self.p}") from exc
        raise ConfigError(f"cannot interpret {value!r} as an element of F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(a), -1, self.p)

    def fmt(self, a) -> str:
        return str(int(a) % self.p)

    def sort_key(self, a):
        return int(a) % self.p

    def random_element(self, rng, nonzero=False):
        return rng.randint(1 if nonzero else 0, self.p - 1)

    def elements(self):
        return range(self.p)

    def describe(self) -> dict:
        return {"kind": "prime", "p": self.p}

    def zeros(self, rows, cols):
        return np.zeros((rows, cols), dtype=np.int64)

    def matrix(self, rows, shape=None):
        return super().matrix(rows, shape).astype(np.int64)

    def matmul(self, a, b):
        return _kernels.matmul_mod(a, b, self.p)

    def madd(self, a, b):
        return (a + b) % self.p

    def msub(self, a, b):
        return (a - b) % self.p

    def scale(self, c, a):
        return (a * (int(c) % self.p)) % self.p

    def rref(self, a):
        if a.size == 0:
            return a.copy(), []
        r, pivots = _kernels.rref_mod(a, self.p)
        return r, [int(x) for x in pivots]

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))


def multiplicative_order(x, field: Field):
    """Least ``r >= 1`` with ``x**r == 1``, or ``INF``."""
    if field.is_zero(x):
        raise ZeroInput("zero has no multiplicative order")
    if isinstance(field, RationalField):
        if x == 1:
            return 1
        if x == -1:
            return 2
        return INF
    r, acc = 1, x
    while acc != 1:
        acc = field.mul(acc, x)
        r += 1
    return r


@dataclass(frozen=True)
class QContext:
    """The ground field together with the deformation parameter ``q``."""

    field: Field
    q: Any
    order: int | float

    @property
    def is_root_of_unity(self) -> bool:
        return self.order != INF

    @property
    def q_inv(self):
        return self.field.inv(self.q)

    def qpow(self, k: int):
        return self.field.pow(self.q, k)

    def with_q(self, q) -> "QContext":
        """Same field, different parameter (used for the Borel subalgebras of U_q(sl2))."""
        return QContext(self.field, q, multiplicative_order(q, self.field))

    def describe(self) -> dict:
        return {"field": self.field.describe(), "q": self.field.fmt(self.q)}


def _check_nontrivial(field: Field, q) -> None:
    if field.is_zero(q) or q == field.one or q == field.neg(field.one):
        raise QIsTrivial(f"q = {field.fmt(q)} is 0, 1 or -1")


def make_prime_field_context(p: int, q_residue: int) -> QContext:
    field = PrimeField(p)
    q = field(q_residue)
    _check_nontrivial(field, q)
    return QContext(field, q, multiplicative_order(q, field))


def make_rational_context(q: Any = 2) -> QContext:
    field = RationalField()
    qv = field(q)
    _check_nontrivial(field, qv)
    return QContext(field, qv, INF)


def context_from_config(cfg: dict) -> QContext:
    """Build a context from ``{"field": {...}, "q": ...}``."""
    if not isinstance(cfg, dict):
        raise ConfigError("expected an object", "")
    if "field" not in cfg:
        raise ConfigError("missing key", "field")
    if "q" not in cfg:
        raise ConfigError("missing key", "q")
    spec = cfg["field"]
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("expected {'kind': ...}", "field")
    if spec["kind"] == "rational":
        return make_rational_context(cfg["q"])
    if spec["kind"] == "prime":
        if not isinstance(spec.get("p"), int):
            raise ConfigError("prime field needs integer 'p'", "field.p")
        field = PrimeField(spec["p"])
        q = field(cfg["q"])
        _check_nontrivial(field, q)
        return QContext(field, q, multiplicative_order(q, field))
    raise ConfigError(f"unknown field kind {spec['kind']!r}", "field.kind")

"""q-integers, q-binomial and q-multinomial coefficients, weak compositions."""

from __future__ import annotations

from functools import lru_cache
from itertools import accumulate
from typing import Any, Sequence

from .errors import OutOfRange
from .field import QContext

__all__ = [
    "q_integer",
    "q_binomial",
    "q_multinomial",
    "weak_compositions",
    "partial_sums",
]


def q_integer(m: int, ctx: QContext, q: Any = None) -> Any:
    """``[m]_q = 1 + q + ... + q^(m-1)``; ``[0]_q = 0``."""
    if m < 0:
        raise OutOfRange(f"q-integer of negative m={m}")
    field = ctx.field
    q = ctx.q if q is None else q
    total, power = field.zero, field.one
    for _ in range(m):
        total = field.add(total, power)
        power = field.mul(power, q)
    return total


def partial_sums(lam: Sequence[int]) -> list[int]:
    """``[lam^1, ..., lam^l]`` with ``lam^i = lam_1 + ... + lam_(i-1)``."""
    return [0] + list(accumulate(lam))[:-1]


def q_multinomial(k: int, lam: Sequence[int], ctx: QContext, q: Any = None) -> Any:
    """``[k; lam]_q`` via the Pascal-type recursion (no division).

    ``[k; lam] = sum over i with lam_i > 0 of q^(lam^i) [k-1; lam - e_i]``.
    """
    lam = tuple(lam)
    if any(x < 0 for x in lam) or sum(lam) != k:
        raise OutOfRange(f"{lam} is not a weak composition of {k}")
    field = ctx.field
    q = ctx.q if q is None else q

    @lru_cache(maxsize=None)
    def rec(mu: tuple[int, ...]) -> Any:
        if sum(mu) == 0:
            return field.one
        total = field.zero
        before = 0
        for i, part in enumerate(mu):
            if part > 0:
                smaller = mu[:i] + (part - 1,) + mu[i + 1:]
                total = field.add(total, field.mul(field.pow(q, before), rec(smaller)))
            before += part
        return total

    return rec(lam)


def q_binomial(n: int, m: int, ctx: QContext, q: Any = None) -> Any:
    if not 0 <= m <= n:
        raise OutOfRange(f"q_binomial({n}, {m}) needs 0 <= m <= n")
    return q_multinomial(n, (m, n - m), ctx, q)


def weak_compositions(k: int, l: int) -> list[tuple[int, ...]]:
    """All length-``l`` tuples of nonnegative integers summing to ``k``, lexicographically."""
    if k < 0 or l < 1:
        raise OutOfRange(f"weak_compositions({k}, {l})")
    if l == 1:
        return [(k,)]
    return [(first,) + rest for first in range(k + 1) for rest in weak_compositions(k - first, l - 1)]

"""Prime-field matrix kernels on int64 arrays.

Each kernel has a numba implementation and a pure-numpy implementation.
Setting ``QQW_NO_NUMBA=1`` (or running without numba installed) selects
the numpy versions. Entries are residues in ``[0, p)`` with ``p < 2**31``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("QQW_NO_NUMBA", "").lower() not in ("1", "true", "yes")

MAX_MODULUS = 2**31


# numpy versions ---------------------------------------------------------

def matmul_mod_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # chunk the inner dimension so partial sums stay below 2**63
    step = max(1, (2**62) // ((p - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, step):
        out = (out + a[:, lo:lo + step] @ b[lo:lo + step, :]) % p
    return out


def rref_mod_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    r = a.copy() % p
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        r[row] = (r[row] * inv) % p
        factors = r[:, col].copy()
        factors[row] = 0
        r = (r - np.outer(factors, r[row])) % p
        pivots.append(col)
        row += 1
    return r, np.asarray(pivots, dtype=np.int64)


# numba versions ---------------------------------------------------------

def _matmul_mod_loops(a, b, p, chunk):
    # reduce once per ``chunk`` inner steps; chunk * (p - 1)**2 stays below 2**63
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        steps = 0
        for t in range(k):
            av = a[i, t]
            if av == 0:
                continue
            for j in range(m):
                out[i, j] += av * b[t, j]
            steps += 1
            if steps == chunk:
                for j in range(m):
                    out[i, j] %= p
                steps = 0
        for j in range(m):
            out[i, j] %= p
    return out


def _chunk(p: int) -> int:
    return max(1, (2**63 - 1) // max(1, (p - 1) ** 2) - 1)


def _inv_mod(x, p):
    # extended Euclid; x is a nonzero residue
    t0, t1 = 0, 1
    r0, r1 = p, x
    while r1 != 0:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        t0, t1 = t1, t0 - quo * t1
    return t0 % p


def _rref_mod_loops(a, p):
    r = a.copy()
    rows, cols = r.shape
    for i in range(rows):
        for j in range(cols):
            r[i, j] = r[i, j] % p
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    npiv = 0
    row = 0
    for col in range(cols):
        if row == rows:
            break
        piv = -1
        for i in range(row, rows):
            if r[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(cols):
                tmp = r[row, j]
                r[row, j] = r[piv, j]
                r[piv, j] = tmp
        inv = _inv_mod(r[row, col], p)
        for j in range(cols):
            r[row, j] = (r[row, j] * inv) % p
        for i in range(rows):
            if i == row:
                continue
            f = r[i, col]
            if f == 0:
                continue
            for j in range(cols):
                r[i, j] = (r[i, j] - f * r[row, j]) % p
        pivots[npiv] = col
        npiv += 1
        row += 1
    return r, pivots[:npiv]


if numba is not None:
    _inv_mod = numba.njit(cache=True)(_inv_mod)
    matmul_mod_numba = numba.njit(cache=True)(_matmul_mod_loops)
    rref_mod_numba = numba.njit(cache=True)(_rref_mod_loops)
else:  # pragma: no cover
    matmul_mod_numba = None
    rref_mod_numba = None


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if USE_NUMBA:
        return matmul_mod_numba(a, b, np.int64(p), np.int64(_chunk(p)))
    return matmul_mod_numpy(a, b, p)


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(a, dtype=np.int64)
    if USE_NUMBA:
        return rref_mod_numba(a, np.int64(p))
    return rref_mod_numpy(a, p)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"

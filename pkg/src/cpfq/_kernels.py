"""Enumeration kernels over integer-encoded function tables.

A function A_f -> A_g is a row sigma[0..D-1] of codomain residue indices,
one per domain representative.  Congruence preservation is encoded as
constraints: for each monic divisor h of g and each domain pair i < j
congruent mod h, the values must satisfy
    cod_class[h][sigma[i]] == cod_class[h][sigma[j]]
where cod_class[h][c] labels the residue of codomain representative c
mod h.  Constraints are stored CSR-style by the later position j:
cons_ptr[j]..cons_ptr[j+1] index (cons_src, cons_div) pairs, so position
j only ever refers to earlier positions.  That makes the same arrays
serve both engines:

  * exhaustive: odometer over all C^D rows, checking each row;
  * backtracking: depth-first extension, pruning at the first violated
    constraint (this mirrors the one-position-at-a-time extension
    argument and typically visits far fewer rows).

Each kernel exists twice: a numba @njit version and a pure-numpy
vectorized version.  CPFQ_KERNEL_BACKEND=auto|numba|numpy picks one
(auto prefers numba when importable).  Callers bound C^D and result
sizes before dispatch; kernels assume the bounds hold.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via CPFQ_KERNEL_BACKEND
    HAVE_NUMBA = False

ENV_VAR = "CPFQ_KERNEL_BACKEND"


def backend_name(override: str | None = None) -> str:
    choice = override or os.environ.get(ENV_VAR, "auto")
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"unknown backend {choice!r} (want auto, numba or numpy)")


# ----------------------------------------------------------- numpy path
_CHUNK = 1 << 18


def count_exhaustive_numpy(D, C, cons_ptr, cons_src, cons_div, cod_class) -> int:
    total = C ** D
    count = 0
    flat = [(j, cons_src[c], cons_div[c])
            for j in range(D) for c in range(cons_ptr[j], cons_ptr[j + 1])]
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = [(idx // C ** j) % C for j in range(D)]
        valid = np.ones(idx.shape[0], dtype=bool)
        for j, i, h in flat:
            valid &= cod_class[h][digits[j]] == cod_class[h][digits[i]]
        count += int(valid.sum())
    return count


def enumerate_backtracking_numpy(D, C, cons_ptr, cons_src, cons_div, cod_class,
                                 cap: int):
    """All valid rows as an (n, D) array, or None when n would exceed cap."""
    rows = np.zeros((1, 0), dtype=np.int64)
    vals_all = np.arange(C, dtype=np.int64)
    for j in range(D):
        n = rows.shape[0]
        ext = np.repeat(rows, C, axis=0)
        vals = np.tile(vals_all, n)
        mask = np.ones(n * C, dtype=bool)
        for c in range(cons_ptr[j], cons_ptr[j + 1]):
            h = cons_div[c]
            mask &= cod_class[h][vals] == cod_class[h][ext[:, cons_src[c]]]
        rows = np.concatenate([ext[mask], vals[mask, None]], axis=1)
        if cap >= 0 and rows.shape[0] > cap:
            return None
    return rows


def count_backtracking_numpy(D, C, cons_ptr, cons_src, cons_div, cod_class) -> int:
    rows = enumerate_backtracking_numpy(D, C, cons_ptr, cons_src, cons_div,
                                        cod_class, -1)
    return int(rows.shape[0])


# ----------------------------------------------------------- numba path
if HAVE_NUMBA:

    @njit(cache=True)
    def _count_exhaustive_numba(D, C, cons_ptr, cons_src, cons_div, cod_class):
        sigma = np.zeros(D, dtype=np.int64)
        count = 0
        while True:
            ok = True
            for j in range(D):
                for c in range(cons_ptr[j], cons_ptr[j + 1]):
                    h = cons_div[c]
                    if cod_class[h, sigma[j]] != cod_class[h, sigma[cons_src[c]]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                count += 1
            pos = 0
            while pos < D and sigma[pos] == C - 1:
                sigma[pos] = 0
                pos += 1
            if pos == D:
                return count
            sigma[pos] += 1

    @njit(cache=True)
    def _count_backtracking_numba(D, C, cons_ptr, cons_src, cons_div, cod_class):
        sigma = np.zeros(D, dtype=np.int64)
        count = 0
        j = 0
        sigma[0] = -1
        while j >= 0:
            sigma[j] += 1
            if sigma[j] >= C:
                j -= 1
                continue
            ok = True
            for c in range(cons_ptr[j], cons_ptr[j + 1]):
                h = cons_div[c]
                if cod_class[h, sigma[j]] != cod_class[h, sigma[cons_src[c]]]:
                    ok = False
                    break
            if not ok:
                continue
            if j == D - 1:
                count += 1
            else:
                j += 1
                sigma[j] = -1
        return count

    @njit(cache=True)
    def _enumerate_backtracking_numba(D, C, cons_ptr, cons_src, cons_div,
                                      cod_class, out):
        sigma = np.zeros(D, dtype=np.int64)
        cap = out.shape[0]
        count = 0
        j = 0
        sigma[0] = -1
        while j >= 0:
            sigma[j] += 1
            if sigma[j] >= C:
                j -= 1
                continue
            ok = True
            for c in range(cons_ptr[j], cons_ptr[j + 1]):
                h = cons_div[c]
                if cod_class[h, sigma[j]] != cod_class[h, sigma[cons_src[c]]]:
                    ok = False
                    break
            if not ok:
                continue
            if j == D - 1:
                if count >= cap:
                    return -1
                for i in range(D):
                    out[count, i] = sigma[i]
                count += 1
            else:
                j += 1
                sigma[j] = -1
        return count


def count_exhaustive(D, C, cons_ptr, cons_src, cons_div, cod_class,
                     backend: str | None = None) -> int:
    if backend_name(backend) == "numba":
        return int(_count_exhaustive_numba(D, C, cons_ptr, cons_src, cons_div,
                                           cod_class))
    return count_exhaustive_numpy(D, C, cons_ptr, cons_src, cons_div, cod_class)


def count_backtracking(D, C, cons_ptr, cons_src, cons_div, cod_class,
                       backend: str | None = None) -> int:
    if backend_name(backend) == "numba":
        return int(_count_backtracking_numba(D, C, cons_ptr, cons_src, cons_div,
                                             cod_class))
    return count_backtracking_numpy(D, C, cons_ptr, cons_src, cons_div, cod_class)


def enumerate_backtracking(D, C, cons_ptr, cons_src, cons_div, cod_class,
                           cap: int, backend: str | None = None):
    """(n, D) array of all valid rows, or None when n exceeds cap."""
    if backend_name(backend) == "numba":
        out = np.empty((cap, D), dtype=np.int64)
        n = _enumerate_backtracking_numba(D, C, cons_ptr, cons_src, cons_div,
                                          cod_class, out)
        if n < 0:
            return None
        return out[:n].copy()
    return enumerate_backtracking_numpy(D, C, cons_ptr, cons_src, cons_div,
                                        cod_class, cap)

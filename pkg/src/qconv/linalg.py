"""Binary linear algebra with rows packed into Python ints."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def pack_rows(m: np.ndarray | Sequence[Sequence[int]]) -> list[int]:
    """Pack each row into an int; column 0 is the most significant bit."""
    m = np.asarray(m, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] == 0:
        return []
    w = m.shape[1]
    out = []
    for row in m:
        out.append(int("".join("1" if b & 1 else "0" for b in row), 2) if w else 0)
    return out


def unpack_row(v: int, width: int) -> np.ndarray:
    return np.array([(v >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def _reduce(rows: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return basis


def gf2_rank(m) -> int:
    return len(_reduce(pack_rows(m)))


class Span:
    """Row span over GF(2) that remembers which input rows build each basis vector."""

    def __init__(self, rows: np.ndarray | Sequence[Sequence[int]]):
        rows = np.asarray(rows, dtype=np.uint8)
        self.width = rows.shape[1] if rows.ndim == 2 else 0
        self.basis: dict[int, tuple[int, int]] = {}
        for idx, r in enumerate(pack_rows(rows)):
            combo = 1 << idx
            while r:
                top = r.bit_length() - 1
                if top in self.basis:
                    br, bc = self.basis[top]
                    r ^= br
                    combo ^= bc
                else:
                    self.basis[top] = (r, combo)
                    break

    @property
    def rank(self) -> int:
        return len(self.basis)

    def decompose(self, v) -> list[int] | None:
        """Indices of input rows summing to ``v``, or None when ``v`` is outside the span."""
        r = pack_rows(np.asarray(v, dtype=np.uint8).reshape(1, -1))[0] if self.width else 0
        combo = 0
        while r:
            top = r.bit_length() - 1
            if top not in self.basis:
                return None
            br, bc = self.basis[top]
            r ^= br
            combo ^= bc
        return [i for i in range(combo.bit_length()) if (combo >> i) & 1]

    def __contains__(self, v) -> bool:
        return self.decompose(v) is not None


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``a @ x = b`` over GF(2), or None."""
    a = np.asarray(a, dtype=np.uint8) & 1
    b = np.asarray(b, dtype=np.uint8) & 1
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1).copy()
    piv_cols = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(aug[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        mask = aug[:, c].astype(bool)
        mask[r] = False
        aug[mask] ^= aug[r]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    if np.any(aug[r:, -1]):
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(piv_cols):
        x[c] = aug[i, -1]
    return x


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}`` over GF(2)."""
    a = np.asarray(a, dtype=np.uint8) & 1
    rows, cols = a.shape
    m = a.copy()
    piv_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = m[:, c].astype(bool)
        mask[r] = False
        m[mask] ^= m[r]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in set(piv_cols)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(piv_cols):
            basis[k, c] = m[i, f]
    return basis

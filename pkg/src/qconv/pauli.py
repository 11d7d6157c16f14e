"""Pauli operators on a block-structured qubit stream.

A :class:`PauliPoly` stores the X and Z parts as length-``n`` vectors of GF(2)[D]
polynomials: qubit ``j*n + c`` (0-based) carries X when the ``D^j`` coefficient of
``x[c]`` is set, Z when that of ``z[c]`` is, and Y when both are.  Global phases
are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf2poly import Laurent, Poly, format_poly, parse_poly

LETTERS = "IXZY"  # index = x + 2*z


class WidthMismatch(ValueError):
    pass


class SupportOverflow(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    """Letters over {I,X,Y,Z} starting at qubit ``offset`` (0-based)."""

    ops: str = ""
    offset: int = 0

    def __post_init__(self):
        ops = self.ops.upper()
        bad = set(ops) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letter(s) {''.join(sorted(bad))!r}")
        stripped = ops.lstrip("I")
        off = self.offset + len(ops) - len(stripped)
        stripped = stripped.rstrip("I")
        object.__setattr__(self, "ops", stripped)
        object.__setattr__(self, "offset", off if stripped else 0)

    @classmethod
    def from_dense(cls, text: str) -> "PauliString":
        return cls(text, 0)

    @property
    def end(self) -> int:
        return self.offset + len(self.ops)

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.ops)

    def dense(self, N: int) -> str:
        if self.end > N:
            raise SupportOverflow(f"operator reaches qubit {self.end} but only {N} exist")
        return "I" * self.offset + self.ops + "I" * (N - self.end)

    def symplectic(self, N: int) -> np.ndarray:
        """Flat ``(x | z)`` uint8 vector of length ``2N``."""
        out = np.zeros(2 * N, dtype=np.uint8)
        for i, c in enumerate(self.dense(N)):
            if c in "XY":
                out[i] = 1
            if c in "ZY":
                out[N + i] = 1
        return out

    @classmethod
    def from_symplectic(cls, v: Sequence[int]) -> "PauliString":
        v = np.asarray(v, dtype=np.uint8) & 1
        N = len(v) // 2
        return cls("".join(LETTERS[int(v[i]) + 2 * int(v[N + i])] for i in range(N)))

    def __str__(self) -> str:
        return self.ops if not self.offset else f"{'I' * self.offset}{self.ops}"


@dataclass(frozen=True)
class PauliPoly:
    n: int
    x: tuple[Poly, ...]
    z: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "z", tuple(self.z))
        if self.n < 1:
            raise ValueError("block width must be at least 1")
        if len(self.x) != self.n or len(self.z) != self.n:
            raise WidthMismatch(f"expected {self.n} entries per part")

    @classmethod
    def identity(cls, n: int) -> "PauliPoly":
        zero = (Poly(),) * n
        return cls(n, zero, zero)

    @classmethod
    def from_polys(cls, x: Sequence[Poly | str], z: Sequence[Poly | str]) -> "PauliPoly":
        conv = [p if isinstance(p, Poly) else parse_poly(p) for p in x]
        convz = [p if isinstance(p, Poly) else parse_poly(p) for p in z]
        return cls(len(conv), tuple(conv), tuple(convz))

    def is_identity(self) -> bool:
        return not any(p.bits for p in self.x + self.z)

    @property
    def degree(self) -> float | int:
        return max(p.degree for p in self.x + self.z)

    @property
    def num_qubits(self) -> int:
        """One past the last qubit carrying a non-identity letter."""
        last = -1
        for c in range(self.n):
            for p in (self.x[c], self.z[c]):
                if p.bits:
                    last = max(last, (p.bits.bit_length() - 1) * self.n + c)
        return last + 1

    def letter(self, qubit: int) -> str:
        j, c = divmod(qubit, self.n)
        return LETTERS[self.x[c].coeff(j) + 2 * self.z[c].coeff(j)]

    def rewidth(self, n: int) -> "PauliPoly":
        return from_string(to_string(self), n)

    def __mul__(self, other: "PauliPoly") -> "PauliPoly":
        return multiply(self, other)

    def __str__(self) -> str:
        xs = ",".join(format_poly(p) for p in self.x)
        zs = ",".join(format_poly(p) for p in self.z)
        return f"({xs}|{zs})"


def from_string(s: PauliString | str, n: int) -> PauliPoly:
    if n < 1:
        raise ValueError("block width must be at least 1")
    if isinstance(s, str):
        s = PauliString(s)
    xb, zb = [0] * n, [0] * n
    for i, ch in enumerate(s.ops):
        j, c = divmod(s.offset + i, n)
        if ch in "XY":
            xb[c] |= 1 << j
        if ch in "ZY":
            zb[c] |= 1 << j
    return PauliPoly(n, tuple(Poly(b) for b in xb), tuple(Poly(b) for b in zb))


def to_string(p: PauliPoly) -> PauliString:
    N = p.num_qubits
    return PauliString("".join(p.letter(q) for q in range(N)))


def delay(p: PauliPoly, j: int) -> PauliPoly:
    if j < 0:
        raise ValueError("delay must be non-negative")
    return PauliPoly(p.n, tuple(a.shift(j) for a in p.x), tuple(a.shift(j) for a in p.z))


def _same_width(p: PauliPoly, q: PauliPoly):
    if p.n != q.n:
        raise WidthMismatch(f"block widths differ: {p.n} vs {q.n}")


def multiply(p: PauliPoly, q: PauliPoly) -> PauliPoly:
    _same_width(p, q)
    return PauliPoly(
        p.n, tuple(a + b for a, b in zip(p.x, q.x)), tuple(a + b for a, b in zip(p.z, q.z))
    )


def commute_at(p: PauliPoly, q: PauliPoly) -> bool:
    """Ordinary commutation of the two operators as placed."""
    _same_width(p, q)
    acc = 0
    for c in range(p.n):
        acc ^= (p.x[c].bits & q.z[c].bits).bit_count() & 1
        acc ^= (p.z[c].bits & q.x[c].bits).bit_count() & 1
    return acc == 0


def gen_commutator(p: PauliPoly, q: PauliPoly) -> Laurent:
    """``P_X(D) Q_Z(1/D) + P_Z(D) Q_X(1/D)``.

    The coefficient of ``D^(s-r)`` is the commutation parity of ``D^r[P]`` and
    ``D^s[Q]``.
    """
    _same_width(p, q)
    acc = Laurent()
    for c in range(p.n):
        acc = acc + Laurent(p.x[c]) * Laurent(q.z[c]).inv_var()
        acc = acc + Laurent(p.z[c]) * Laurent(q.x[c]).inv_var()
    return acc


def gen_commute(p: PauliPoly, q: PauliPoly) -> bool:
    """True iff every block shift of ``p`` commutes with every block shift of ``q``."""
    return gen_commutator(p, q).is_zero()


def apply_poly(P: Poly, a: PauliPoly) -> PauliPoly:
    """Product of ``D^j[a]`` over the terms ``D^j`` of ``P``."""
    if not gen_commute(a, a):
        raise ValueError("operator does not commute with its own shifts")
    return PauliPoly(a.n, tuple(P * e for e in a.x), tuple(P * e for e in a.z))


def expand(p: PauliPoly, shift: int, N: int) -> np.ndarray:
    """Binary ``(x | z)`` vector of ``D^shift[p]`` on ``N`` qubits."""
    if shift < 0:
        raise ValueError("shift must be non-negative")
    out = np.zeros(2 * N, dtype=np.uint8)
    for c in range(p.n):
        for half, poly in ((0, p.x[c]), (N, p.z[c])):
            for j in poly.terms():
                q = (j + shift) * p.n + c
                if q >= N:
                    raise SupportOverflow(f"qubit {q} outside 0..{N - 1}")
                out[half + q] = 1
    return out


def symplectic_hex(v: np.ndarray) -> tuple[str, str]:
    """Debug dump: X bits and Z bits as hex strings (qubit 0 is the MSB)."""
    N = len(v) // 2

    def enc(bits):
        if N == 0:
            return "0"
        val = int("".join(str(int(b)) for b in bits), 2)
        return format(val, f"0{(N + 3) // 4}x")

    return enc(v[:N]), enc(v[N:])


def symplectic_product(a: np.ndarray, b: np.ndarray) -> int:
    N = len(a) // 2
    return int((a[:N].astype(np.int64) @ b[N:] + a[N:].astype(np.int64) @ b[:N]) & 1)

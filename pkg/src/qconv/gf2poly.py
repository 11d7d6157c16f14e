"""Polynomials and finite Laurent series over GF(2) in the delay variable D.

Coefficients are packed into a Python int, little-endian in D: bit ``j`` holds
the coefficient of ``D^j``.  Everything here is immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

MAX_DEGREE = 1 << 16


class PolyOverflowError(ArithmeticError):
    """Raised when a result would exceed the degree cap."""

    def __init__(self, degree: int):
        super().__init__(f"polynomial degree {degree} exceeds cap {MAX_DEGREE}")
        self.degree = degree


def _check(bits: int) -> int:
    if bits.bit_length() - 1 > MAX_DEGREE:
        raise PolyOverflowError(bits.bit_length() - 1)
    return bits


@dataclass(frozen=True, order=False)
class Poly:
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("coefficient bits must be non-negative")
        _check(self.bits)

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls) -> "Poly":
        return _ZERO

    @classmethod
    def one(cls) -> "Poly":
        return _ONE

    @classmethod
    def monomial(cls, j: int) -> "Poly":
        if j < 0:
            raise ValueError("negative exponent in a polynomial")
        return cls(1 << j)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "Poly":
        bits = 0
        for j, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << j
        return cls(bits)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)

    # -- inspection ---------------------------------------------------------
    @property
    def degree(self) -> float | int:
        """Degree, or ``-inf`` for the zero polynomial."""
        return self.bits.bit_length() - 1 if self.bits else float("-inf")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple((self.bits >> j) & 1 for j in range(self.bits.bit_length()))

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_monomial(self) -> bool:
        return is_monomial(self)

    def valuation(self) -> int:
        """Exponent of the lowest nonzero term (0 for the zero polynomial)."""
        if not self.bits:
            return 0
        return (self.bits & -self.bits).bit_length() - 1

    def terms(self) -> list[int]:
        out, b, j = [], self.bits, 0
        while b:
            if b & 1:
                out.append(j)
            b >>= 1
            j += 1
        return out

    def coeff(self, j: int) -> int:
        return (self.bits >> j) & 1 if j >= 0 else 0

    def reverse(self, length: int | None = None) -> "Poly":
        """Mirror coefficients within ``length`` slots (default ``degree + 1``)."""
        if length is None:
            length = self.bits.bit_length()
        out = 0
        for j in self.terms():
            if j >= length:
                raise ValueError("reversal window shorter than polynomial")
            out |= 1 << (length - 1 - j)
        return Poly(out)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __divmod__(self, other: "Poly"):
        return poly_divmod(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[1]

    def shift(self, t: int) -> "Poly":
        """Multiply by ``D^t``; negative ``t`` requires exact divisibility."""
        if t >= 0:
            return Poly(_check(self.bits << t))
        if self.bits & ((1 << -t) - 1):
            raise ValueError(f"{self} is not divisible by D^{-t}")
        return Poly(self.bits >> -t)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


_ZERO = Poly(0)
_ONE = Poly(1)


def poly_add(a: Poly, b: Poly) -> Poly:
    return Poly(a.bits ^ b.bits)


def _clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a.bits and b.bits and (a.bits.bit_length() + b.bits.bit_length() - 2) > MAX_DEGREE:
        raise PolyOverflowError(a.bits.bit_length() + b.bits.bit_length() - 2)
    return Poly(_clmul(a.bits, b.bits))


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b.bits:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bits.bit_length()
    r, q = a.bits, 0
    while r.bit_length() >= db:
        s = r.bit_length() - db
        q |= 1 << s
        r ^= b.bits << s
    return Poly(q), Poly(r)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b.bits:
        a, b = b, poly_divmod(a, b)[1]
    return a


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a.bits or not b.bits:
        return _ZERO
    return poly_divmod(a * b, poly_gcd(a, b))[0]


def is_monomial(a: Poly) -> bool:
    return a.bits != 0 and (a.bits & (a.bits - 1)) == 0


# ---------------------------------------------------------------------------
# text syntax: 0, 1, D, D^3, 1+D+D^3

def parse_poly(text: str) -> Poly:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial")
    if s == "0":
        return _ZERO
    bits = 0
    for term in s.split("+"):
        if term == "1" or term == "D^0":
            j = 0
        elif term == "D":
            j = 1
        elif re.fullmatch(r"D\^\d+", term):
            j = int(term[2:])
        else:
            raise ValueError(f"bad polynomial term {term!r} in {text!r}")
        bits ^= 1 << j
    return Poly(bits)


def _fmt_term(j: int) -> str:
    if j == 0:
        return "1"
    if j == 1:
        return "D"
    return f"D^{j}"


def format_poly(p: Poly) -> str:
    if not p.bits:
        return "0"
    return "+".join(_fmt_term(j) for j in p.terms())


# ---------------------------------------------------------------------------
# Laurent


@dataclass(frozen=True)
class Laurent:
    """``D^shift * body`` with ``body`` having a nonzero constant term."""

    body: Poly = _ZERO
    shift: int = 0

    def __post_init__(self):
        if not self.body.bits:
            object.__setattr__(self, "shift", 0)
            return
        v = self.body.valuation()
        if v:
            object.__setattr__(self, "body", Poly(self.body.bits >> v))
            object.__setattr__(self, "shift", self.shift + v)

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "Laurent":
        return cls(p, shift)

    @classmethod
    def monomial(cls, j: int) -> "Laurent":
        return cls(_ONE, j)

    def is_zero(self) -> bool:
        return not self.body.bits

    @property
    def min_exp(self) -> int:
        return self.shift

    @property
    def max_exp(self) -> float | int:
        if not self.body.bits:
            return float("-inf")
        return self.shift + self.body.bits.bit_length() - 1

    def to_poly(self) -> Poly:
        if self.shift < 0:
            raise ValueError(f"{self} has negative powers of D")
        return self.body.shift(self.shift)

    def inv_var(self) -> "Laurent":
        """Substitute ``D -> 1/D`` (coefficient mirror)."""
        if not self.body.bits:
            return self
        d = self.body.bits.bit_length() - 1
        return Laurent(self.body.reverse(), -self.shift - d)

    def times_monomial(self, t: int) -> "Laurent":
        return Laurent(self.body, self.shift + t)

    def __add__(self, other: "Laurent") -> "Laurent":
        if not self.body.bits:
            return other
        if not other.body.bits:
            return self
        s = min(self.shift, other.shift)
        bits = (self.body.bits << (self.shift - s)) ^ (other.body.bits << (other.shift - s))
        return Laurent(Poly(bits), s)

    def __mul__(self, other: "Laurent") -> "Laurent":
        return Laurent(self.body * other.body, self.shift + other.shift)

    def __str__(self) -> str:
        if not self.body.bits:
            return "0"
        return "+".join(
            "1" if j + self.shift == 0 else ("D" if j + self.shift == 1 else f"D^{j + self.shift}")
            for j in self.body.terms()
        )


def laurent_normalize_group(ls: Sequence[Laurent]) -> list[Poly]:
    """Multiply every element by the same ``D^p`` so that none has negative powers."""
    nonzero = [x.shift for x in ls if not x.is_zero()]
    p = max(0, -min(nonzero)) if nonzero else 0
    return [x.times_monomial(p).to_poly() for x in ls]


# ---------------------------------------------------------------------------
# matrices and elimination


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple[tuple[Poly, ...], ...] = ()
    ncols: int = 0

    def __post_init__(self):
        ent = tuple(tuple(row) for row in self.entries)
        if ent:
            widths = {len(r) for r in ent}
            if len(widths) != 1:
                raise ValueError("ragged polynomial matrix")
            object.__setattr__(self, "ncols", widths.pop())
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Poly]], ncols: int | None = None) -> "PolyMatrix":
        rows = [tuple(r) for r in rows]
        return cls(tuple(rows), len(rows[0]) if rows else (ncols or 0))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "PolyMatrix":
        return cls(tuple((_ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def parse(cls, text: str) -> "PolyMatrix":
        rows = [line.split() for line in text.strip().splitlines() if line.strip()]
        return cls.from_rows([[parse_poly(t) for t in r] for r in rows])

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Poly, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Poly, ...]:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, rows: range | slice, cols: range | slice) -> "PolyMatrix":
        rr = range(self.nrows)[rows] if isinstance(rows, slice) else rows
        cc = range(self.ncols)[cols] if isinstance(cols, slice) else cols
        return PolyMatrix(tuple(tuple(self.entries[i][j] for j in cc) for i in rr), len(cc))

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return PolyMatrix(
            tuple(a + b for a, b in zip(self.entries, other.entries)), self.ncols + other.ncols
        )

    def permute_cols(self, perm: Sequence[int]) -> "PolyMatrix":
        """New column ``c`` is old column ``perm[c]``."""
        return PolyMatrix(tuple(tuple(r[p] for p in perm) for r in self.entries), self.ncols)

    def is_diagonal(self) -> bool:
        return all(
            not self.entries[i][j].bits
            for i in range(self.nrows)
            for j in range(self.ncols)
            if i != j
        )

    def max_degree(self) -> float | int:
        return max((p.degree for r in self.entries for p in r), default=float("-inf"))

    def to_text(self) -> list[list[str]]:
        return [[format_poly(p) for p in r] for r in self.entries]

    def __str__(self) -> str:
        cells = self.to_text()
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)


class ElimStep(NamedTuple):
    op: str  # "swap_rows" | "add" | "shift" | "swap_cols"
    a: int
    b: int = 0
    poly: Poly = _ZERO


class Elimination(NamedTuple):
    reduced: PolyMatrix
    col_perm: tuple[int, ...]
    log: tuple[ElimStep, ...]
    pivots: tuple[tuple[int, int], ...]
    diagonal: bool
    linked: PolyMatrix | None

    @property
    def rank(self) -> int:
        return len(self.pivots)


class _Grid:
    """Mutable scratch copy used during elimination."""

    def __init__(self, m: PolyMatrix | None):
        self.rows = [list(r) for r in m.entries] if m is not None else None

    def swap_rows(self, i, j):
        if self.rows is not None:
            self.rows[i], self.rows[j] = self.rows[j], self.rows[i]

    def add(self, dst, src, p: Poly):
        if self.rows is not None:
            self.rows[dst] = [a + p * b for a, b in zip(self.rows[dst], self.rows[src])]

    def shift(self, i, t):
        if self.rows is not None:
            self.rows[i] = [x.shift(t) for x in self.rows[i]]

    def swap_cols(self, a, b):
        if self.rows is not None:
            for r in self.rows:
                r[a], r[b] = r[b], r[a]

    def freeze(self, ncols) -> PolyMatrix | None:
        if self.rows is None:
            return None
        return PolyMatrix(tuple(tuple(r) for r in self.rows), ncols)


def _common_valuation(row: Sequence[Poly]) -> int:
    vals = [p.valuation() for p in row if p.bits]
    return min(vals) if vals else 0


def eliminate(
    m: PolyMatrix,
    column_range: tuple[int, int] | range | None = None,
    *,
    row_start: int = 0,
    linked: PolyMatrix | None = None,
) -> Elimination:
    """Row-reduce ``m`` over GF(2)[D] inside ``column_range``.

    Columns are scanned left to right; in each, the nonzero entry of minimal
    degree (ties: lowest row) among rows at or below the current pivot row is
    the pivot.  Entries below are reduced by Euclidean steps until they vanish.
    Entries above a pivot are cleared only when the pivot divides them; if it
    does not, ``diagonal`` is False.  A pivot row sharing a common ``D^t``
    factor (across ``m`` and ``linked``) is divided by it first.

    ``linked`` receives the identical row operations and column swaps, which is
    how the Z half of a stabilizer matrix tracks eliminations of the X half.
    Rows above ``row_start`` are never touched.
    """
    if column_range is None:
        c0, c1 = 0, m.ncols
    elif isinstance(column_range, range):
        c0, c1 = column_range.start, column_range.stop
    else:
        c0, c1 = column_range
    if linked is not None and linked.nrows != m.nrows:
        raise ValueError("linked matrix must have the same row count")

    g, lg = _Grid(m), _Grid(linked)
    nrows = m.nrows
    perm = list(range(m.ncols))
    log: list[ElimStep] = []
    pivots: list[tuple[int, int]] = []
    diagonal = True

    def do(step: ElimStep):
        log.append(step)
        for grid in (g, lg):
            if step.op == "swap_rows":
                grid.swap_rows(step.a, step.b)
            elif step.op == "add":
                grid.add(step.a, step.b, step.poly)
            elif step.op == "shift":
                grid.shift(step.a, step.b)
            elif step.op == "swap_cols":
                grid.swap_cols(step.a, step.b)

    prow = row_start
    for col in range(c0, c1):
        if prow >= nrows:
            break
        src = next(
            (c for c in range(col, c1) if any(g.rows[i][c].bits for i in range(prow, nrows))),
            None,
        )
        if src is None:
            break
        if src != col:
            do(ElimStep("swap_cols", col, src))
            perm[col], perm[src] = perm[src], perm[col]
        while True:
            cand = [i for i in range(prow, nrows) if g.rows[i][col].bits]
            piv = min(cand, key=lambda i: (g.rows[i][col].degree, i))
            if piv != prow:
                do(ElimStep("swap_rows", prow, piv))
            full = g.rows[prow] + (lg.rows[prow] if lg.rows is not None else [])
            t = _common_valuation(full)
            if t:
                do(ElimStep("shift", prow, -t))
            p = g.rows[prow][col]
            done = True
            for i in range(prow + 1, nrows):
                e = g.rows[i][col]
                if e.bits:
                    q, _ = poly_divmod(e, p)
                    do(ElimStep("add", i, prow, q))
                    if g.rows[i][col].bits:
                        done = False
            if done:
                break
        p = g.rows[prow][col]
        for i in range(row_start, prow):
            e = g.rows[i][col]
            if e.bits:
                q, r = poly_divmod(e, p)
                if r.bits:
                    diagonal = False
                else:
                    do(ElimStep("add", i, prow, q))
        pivots.append((prow, col))
        prow += 1

    return Elimination(
        reduced=g.freeze(m.ncols),
        col_perm=tuple(perm),
        log=tuple(log),
        pivots=tuple(pivots),
        diagonal=diagonal,
        linked=lg.freeze(linked.ncols) if linked is not None else None,
    )


def replay(log: Iterable[ElimStep], m: PolyMatrix, *, columns: bool = True) -> PolyMatrix:
    """Apply a recorded elimination transcript to another matrix."""
    g = _Grid(m)
    for step in log:
        if step.op == "swap_rows":
            g.swap_rows(step.a, step.b)
        elif step.op == "add":
            g.add(step.a, step.b, step.poly)
        elif step.op == "shift":
            g.shift(step.a, step.b)
        elif step.op == "swap_cols" and columns:
            g.swap_cols(step.a, step.b)
    return g.freeze(m.ncols)


def replay_transform(log: Iterable[ElimStep], nrows: int) -> list[list[Laurent]]:
    """Row-operation matrix ``T`` (Laurent entries) with ``reduced = T @ original``."""
    t = [[Laurent.monomial(0) if i == j else Laurent() for j in range(nrows)] for i in range(nrows)]
    for step in log:
        if step.op == "swap_rows":
            t[step.a], t[step.b] = t[step.b], t[step.a]
        elif step.op == "add":
            p = Laurent(step.poly)
            t[step.a] = [a + p * b for a, b in zip(t[step.a], t[step.b])]
        elif step.op == "shift":
            t[step.a] = [x.times_monomial(step.b) for x in t[step.a]]
    return t

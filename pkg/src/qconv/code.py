"""(n, k, m) convolutional stabilizer codes: definition, validation, file format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .linalg import gf2_rank
from .pauli import PauliPoly, PauliString, expand, from_string, gen_commute, symplectic_product, to_string


class CodeSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class InvalidCode(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(report.errors) or "invalid code")
        self.report = report


@dataclass(frozen=True)
class CodeSpec:
    n: int
    k: int
    m: int
    gens: tuple[PauliPoly, ...]
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        signs = tuple(self.signs) if self.signs else (1,) * len(self.gens)
        object.__setattr__(self, "signs", signs)
        if not (0 <= self.k <= self.n):
            raise ValueError(f"need 0 <= k <= n, got n={self.n}, k={self.k}")
        if self.m < 0:
            raise ValueError("overlap m must be non-negative")
        if self.m > self.n:
            raise ValueError(f"m={self.m} > n={self.n} is not supported (overlap must fit in one block)")
        if len(self.gens) != self.n - self.k:
            raise ValueError(f"expected {self.n - self.k} generators, got {len(self.gens)}")
        if len(signs) != len(self.gens) or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1/-1, one per generator")
        for g in self.gens:
            if g.n != self.n:
                raise ValueError("generator block width differs from n")

    @classmethod
    def from_strings(cls, n: int, k: int, m: int, strings, signs=()) -> "CodeSpec":
        return cls(n, k, m, tuple(from_string(s, n) for s in strings), tuple(signs))

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def overlap_blocks(self) -> int:
        """``ceil(m / n)``."""
        return math.ceil(self.m / self.n)

    @property
    def span(self) -> int:
        return self.n + self.m

    def generator_strings(self) -> list[str]:
        return [to_string(g).dense(self.span) for g in self.gens]

    def __str__(self) -> str:
        return serialize_code(self)


@dataclass
class ValidationReport:
    valid: bool
    pairs: dict[tuple[int, int], bool] = field(default_factory=dict)
    rank: int = 0
    expected_rank: int = 0
    errors: list[str] = field(default_factory=list)

    def failing_pairs(self) -> list[tuple[int, int]]:
        return [p for p, ok in self.pairs.items() if not ok]

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "pairs": [
                {"i": i + 1, "j": j + 1, "commute": ok} for (i, j), ok in sorted(self.pairs.items())
            ],
            "errors": list(self.errors),
        }


def validate(c: CodeSpec) -> ValidationReport:
    rep = ValidationReport(valid=True)
    for idx, g in enumerate(c.gens):
        if g.num_qubits > c.span:
            rep.errors.append(f"generator {idx + 1} reaches beyond qubit {c.span}")
    for i in range(len(c.gens)):
        for j in range(i, len(c.gens)):
            ok = gen_commute(c.gens[i], c.gens[j])
            rep.pairs[(i, j)] = ok
            if not ok:
                rep.errors.append(f"generators {i + 1} and {j + 1} do not commute (generalized)")
    if c.gens and not rep.errors:
        q = 2 * (c.overlap_blocks + 1)
        rows = _expanded_rows(c, q)
        rep.rank = gf2_rank(rows)
        rep.expected_rank = len(rows)
        if rep.rank != rep.expected_rank:
            rep.errors.append(f"generators are dependent: rank {rep.rank} < {rep.expected_rank}")
    rep.valid = not rep.errors
    return rep


def _expanded_rows(c: CodeSpec, q: int) -> np.ndarray:
    N = c.n * q + c.m
    rows = [expand(g, j, N) for j in range(q) for g in c.gens]
    return np.array(rows, dtype=np.uint8).reshape(len(rows), 2 * N)


@dataclass(frozen=True)
class ExpandedStabilizer:
    q: int
    N: int
    rows: np.ndarray  # ((n-k)*q, 2N), row index j*(n-k) + i
    signs: tuple[int, ...]
    boundary_rows: np.ndarray | None = None

    def is_abelian(self) -> bool:
        for a in range(len(self.rows)):
            for b in range(a + 1, len(self.rows)):
                if symplectic_product(self.rows[a], self.rows[b]):
                    return False
        return True


def expand_stabilizer(c: CodeSpec, q: int) -> ExpandedStabilizer:
    if q < 1:
        raise ValueError("need at least one generator block")
    rep = validate(c)
    if not rep.valid:
        raise InvalidCode(rep)
    return ExpandedStabilizer(
        q=q, N=c.n * q + c.m, rows=_expanded_rows(c, q), signs=tuple(c.signs) * q
    )


# ---------------------------------------------------------------------------
# file format


def parse_code(text: str, *, check: bool = True) -> CodeSpec:
    header = None
    gens, signs = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if header is None:
            parts = body.split()
            if len(parts) != 3 or not all(p.isdigit() for p in parts):
                raise CodeSyntaxError("expected header 'n k m'", lineno, col)
            header = tuple(int(p) for p in parts)
            n, k, m = header
            if n < 1 or k > n:
                raise CodeSyntaxError(f"need n >= 1 and k <= n, got {n} {k} {m}", lineno, col)
            if m > n:
                raise CodeSyntaxError(
                    f"m={m} > n={n} is not supported (overlap must fit in one block)", lineno, col
                )
            continue
        sign = 1
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
            col += 1
        for off, ch in enumerate(body):
            if ch not in "IXYZ":
                raise CodeSyntaxError(f"invalid Pauli letter {ch!r}", lineno, col + off)
        n, k, m = header
        if len(body) != n + m:
            raise CodeSyntaxError(f"generator must have n+m={n + m} letters, got {len(body)}", lineno, col)
        gens.append(from_string(PauliString(body), n))
        signs.append(sign)
    if header is None:
        raise CodeSyntaxError("missing header", 1)
    n, k, m = header
    if len(gens) != n - k:
        raise CodeSyntaxError(f"expected {n - k} generator lines, got {len(gens)}", max(1, len(text.splitlines())))
    code = CodeSpec(n, k, m, tuple(gens), tuple(signs))
    if check:
        rep = validate(code)
        if not rep.valid:
            raise InvalidCode(rep)
    return code


def serialize_code(c: CodeSpec) -> str:
    lines = [f"{c.n} {c.k} {c.m}"]
    for g, s, text in zip(c.gens, c.signs, c.generator_strings()):
        lines.append(("-" if s < 0 else "") + text)
    return "\n".join(lines) + "\n"


def load_code(path: str | Path, *, check: bool = True) -> CodeSpec:
    """Read a code file; bare names such as ``qcc5`` resolve to bundled codes."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = Path(str(p) + ".code")
    if not p.exists():
        bundled = resources.files("qconv") / "data" / p.name
        if bundled.is_file():
            return parse_code(bundled.read_text(), check=check)
    return parse_code(p.read_text(), check=check)


def example_code(name: str = "qcc5") -> CodeSpec:
    return parse_code((resources.files("qconv") / "data" / f"{name}.code").read_text())

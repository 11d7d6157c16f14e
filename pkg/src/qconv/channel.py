"""Memoryless Pauli channels, error sampling, likelihoods and ideal syndrome readout."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .code import CodeSpec
from .pauli import LETTERS, PauliString, expand

NEG_INF = float("-inf")


@dataclass(frozen=True)
class ChannelModel:
    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        ps = (self.p_i, self.p_x, self.p_y, self.p_z)
        if any(p < 0 or p > 1 for p in ps):
            raise ValueError(f"probabilities must lie in [0, 1]: {ps}")
        if abs(sum(ps) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {sum(ps)!r}")

    @classmethod
    def pauli(cls, px: float, py: float, pz: float) -> "ChannelModel":
        return cls(1.0 - px - py - pz, px, py, pz)

    def prob(self, letter: str) -> float:
        return {"I": self.p_i, "X": self.p_x, "Y": self.p_y, "Z": self.p_z}[letter]

    def probs(self) -> np.ndarray:
        """Probabilities indexed by letter code ``x + 2z`` (I, X, Z, Y)."""
        return np.array([self.p_i, self.p_x, self.p_z, self.p_y])

    def log_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.probs())

    def classes(self) -> tuple[np.ndarray, np.ndarray]:
        """Group letter codes by equal probability.

        Returns ``(letter_class, class_log)``; likelihoods are then computed from
        integer class counts so equal-probability errors tie exactly.  Zero
        probability letters get class -1.
        """
        probs = self.probs()
        uniq: list[float] = []
        cls = np.full(4, -1, dtype=np.int64)
        for code in range(4):
            p = probs[code]
            if p <= 0:
                continue
            if p not in uniq:
                uniq.append(p)
            cls[code] = uniq.index(p)
        return cls, np.log(np.array(uniq, dtype=float))

    def as_dict(self) -> dict:
        return {"p_i": self.p_i, "p_x": self.p_x, "p_y": self.p_y, "p_z": self.p_z}


def depolarizing(p: float) -> ChannelModel:
    if not 0 <= p <= 1:
        raise ValueError(f"depolarizing probability {p} outside [0, 1]")
    return ChannelModel(1.0 - p, p / 3, p / 3, p / 3)


def score_from_counts(counts: np.ndarray, class_log: np.ndarray) -> np.ndarray:
    """Log-likelihood from per-class counts, summed in a fixed order."""
    counts = np.asarray(counts)
    out = np.zeros(counts.shape[:-1], dtype=float)
    for c in range(len(class_log)):
        out = out + counts[..., c] * class_log[c]
    return out


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def trial_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Independent per-trial stream, identical however trials are split across workers."""
    return np.random.SeedSequence([int(seed), int(index)])


def sample_error(ch: ChannelModel, N: int, seed=None, *, rng: np.random.Generator | None = None) -> PauliString:
    if N < 1:
        raise ValueError("need at least one qubit")
    if rng is None:
        rng = make_rng(seed)
    letters = np.array(list("IXYZ"))
    draw = rng.choice(4, size=N, p=[ch.p_i, ch.p_x, ch.p_y, ch.p_z])
    return PauliString("".join(letters[draw]))


def _dense(e: PauliString | str, N: int) -> str:
    if isinstance(e, str):
        if len(e) != N:
            raise ValueError(f"error string has {len(e)} letters, expected {N}")
        return e
    return e.dense(N)


def log_likelihood(ch: ChannelModel, e: PauliString | str, N: int) -> float:
    """Sum of per-qubit log probabilities over all ``N`` qubits (``-inf`` if impossible)."""
    dense = _dense(e, N)
    total = 0.0
    for letter in dense:
        p = ch.prob(letter)
        if p <= 0:
            return NEG_INF
        total += math.log(p)
    return total


@dataclass(frozen=True)
class SyndromeStream:
    q: int
    values: tuple[tuple[int, ...], ...]  # values[j][i] in {+1, -1}

    def __post_init__(self):
        vals = tuple(tuple(int(v) for v in row) for row in self.values)
        if len(vals) != self.q:
            raise ValueError(f"expected {self.q} syndrome blocks, got {len(vals)}")
        widths = {len(r) for r in vals}
        if len(widths) > 1:
            raise ValueError("syndrome blocks have different lengths")
        if any(v not in (1, -1) for r in vals for v in r):
            raise ValueError("syndrome values must be +1 or -1")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "SyndromeStream":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(len(bits), tuple(tuple(-1 if b else 1 for b in row) for row in bits))

    def bits(self) -> np.ndarray:
        return np.array([[1 if v < 0 else 0 for v in r] for r in self.values], dtype=np.uint8).reshape(
            self.q, -1
        )

    @property
    def weight(self) -> int:
        return int(self.bits().sum())

    def to_text(self) -> str:
        return "".join("".join("+" if v > 0 else "-" for v in r) + "\n" for r in self.values)

    @classmethod
    def from_text(cls, text: str) -> "SyndromeStream":
        rows = []
        for ln in text.splitlines():
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if set(ln) - set("+-"):
                raise ValueError(f"bad syndrome line {ln!r}")
            rows.append(tuple(1 if ch == "+" else -1 for ch in ln))
        return cls(len(rows), tuple(rows))


def syndrome_matrix(c: CodeSpec, q: int) -> np.ndarray:
    """Rows ``expand(M_{0,i}, j, N)`` ordered ``j*(n-k) + i``."""
    N = c.n * q + c.m
    rows = [expand(g, j, N) for j in range(q) for g in c.gens]
    return np.array(rows, dtype=np.uint8).reshape(len(rows), 2 * N)


def syndrome_bits(c: CodeSpec, e_sym: np.ndarray, q: int) -> np.ndarray:
    """Anticommutation bits ``(q, n-k)`` of a binary-symplectic error."""
    H = syndrome_matrix(c, q)
    N = c.n * q + c.m
    e_sym = np.asarray(e_sym, dtype=np.int64)
    b = (H[:, :N].astype(np.int64) @ e_sym[N:] + H[:, N:].astype(np.int64) @ e_sym[:N]) & 1
    return b.reshape(q, c.n - c.k).astype(np.uint8)


def extract_syndromes(c: CodeSpec, e: PauliString | str, q: int) -> SyndromeStream:
    N = c.n * q + c.m
    if isinstance(e, str) and len(e) != N:
        raise ValueError(f"error has {len(e)} letters, expected N={N}")
    e_ps = PauliString(e) if isinstance(e, str) else e
    return SyndromeStream.from_bits(syndrome_bits(c, e_ps.symplectic(N), q))


def letter_codes(dense: str) -> np.ndarray:
    return np.array([LETTERS.index(ch) for ch in dense], dtype=np.int64)

"""scikit-learn style wrappers around syndrome extraction and decoding.

Errors are integer arrays of letter codes ``x + 2z`` (I=0, X=1, Z=2, Y=3), one
row per sample and one column per qubit.  Syndromes are 0/1 arrays with
``q * (n - k)`` columns, block-major.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .channel import ChannelModel, SyndromeStream, depolarizing, syndrome_bits
from .code import CodeSpec, load_code
from .decoder import Trellis, classify_residual, viterbi_decode
from .pauli import LETTERS, PauliString
from .structure import logical_ops, standard_form


def _resolve(code) -> CodeSpec:
    return code if isinstance(code, CodeSpec) else load_code(code)


def codes_to_strings(X) -> list[str]:
    X = check_array(X, dtype=np.int64)
    if X.size and (X.min() < 0 or X.max() > 3):
        raise ValueError("letter codes must lie in 0..3")
    return ["".join(LETTERS[v] for v in row) for row in X]


def strings_to_codes(strings) -> np.ndarray:
    return np.array([[LETTERS.index(ch) for ch in s] for s in strings], dtype=np.int64)


def _symplectic(row: np.ndarray) -> np.ndarray:
    return np.concatenate([row & 1, row >> 1]).astype(np.uint8)


class SyndromeExtractor(TransformerMixin, BaseEstimator):
    """Map error patterns on ``n*blocks + m`` qubits to their syndrome bits."""

    def __init__(self, code="qcc5", blocks=2):
        self.code = code
        self.blocks = blocks

    def fit(self, X=None, y=None):
        self.code_ = _resolve(self.code)
        if self.blocks < 1:
            raise ValueError("blocks must be positive")
        self.n_qubits_ = self.code_.n * self.blocks + self.code_.m
        return self

    def transform(self, X):
        check_is_fitted(self, "code_")
        X = check_array(X, dtype=np.int64)
        if X.shape[1] != self.n_qubits_:
            raise ValueError(f"expected {self.n_qubits_} qubits per row, got {X.shape[1]}")
        out = [syndrome_bits(self.code_, _symplectic(row), self.blocks).reshape(-1) for row in X]
        return np.array(out, dtype=np.uint8)


class ViterbiDecoder(BaseEstimator):
    """Most-likely-error decoder; ``predict`` maps syndromes to error estimates."""

    def __init__(self, code="qcc5", p=0.05, channel=None, traceback_depth=None, tie_break="lex",
                 terminated=False, random_state=None):
        self.code = code
        self.p = p
        self.channel = channel
        self.traceback_depth = traceback_depth
        self.tie_break = tie_break
        self.terminated = terminated
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.code_ = _resolve(self.code)
        self.channel_ = self.channel if isinstance(self.channel, ChannelModel) else depolarizing(self.p)
        self.trellis_ = Trellis(self.code_, self.channel_)
        self.logicals_ = logical_ops(standard_form(self.code_))
        return self

    def _streams(self, S):
        S = check_array(S, dtype=np.int64)
        r = self.code_.n - self.code_.k
        if r == 0 or S.shape[1] % r:
            raise ValueError(f"syndrome rows must have a multiple of {r} columns")
        return [SyndromeStream.from_bits(row.reshape(-1, r)) for row in S]

    def decode(self, S):
        check_is_fitted(self, "trellis_")
        seed = self.random_state
        return [
            viterbi_decode(self.code_, self.channel_, s, tie_break=self.tie_break,
                           seed=None if seed is None else seed + i, traceback_depth=self.traceback_depth,
                           terminated=self.terminated, trellis=self.trellis_)
            for i, s in enumerate(self._streams(S))
        ]

    def predict(self, S):
        res = self.decode(S)
        return strings_to_codes([r.estimate.dense(r.N) for r in res])

    def score(self, S, y):
        """Fraction of samples whose residual is harmless (``y`` holds the true errors)."""
        est = self.predict(S)
        truth = codes_to_strings(y)
        q = len(check_array(S)[0]) // (self.code_.n - self.code_.k)
        ok = [
            classify_residual(PauliString(e), PauliString(t), self.code_, self.logicals_, q).success
            for e, t in zip(codes_to_strings(est), truth)
        ]
        return float(np.mean(ok))

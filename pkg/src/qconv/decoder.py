"""Trellis maximum-likelihood error estimation for convolutional stabilizer codes.

Letters are coded ``x + 2z`` (I=0, X=1, Z=2, Y=3).  A pattern on several qubits
is a base-4 integer with the first qubit most significant, so integer order is
the lexicographic order used for tie-breaking.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelModel, SyndromeStream, score_from_counts, syndrome_bits, syndrome_matrix
from .code import CodeSpec
from .linalg import nullspace, solve
from .pauli import LETTERS, PauliString, SupportOverflow, expand
from .structure import LogicalOps

MAX_WINDOW = 10  # 4^10 window patterns
MAX_EXHAUSTIVE = 14
MAX_KERNEL = 24


class InfeasibleSyndrome(ValueError):
    def __init__(self, step: int):
        super().__init__(f"no error pattern is compatible with the syndromes up to block {step}")
        self.step = step


def digits(idx: np.ndarray | int, width: int) -> np.ndarray:
    """Base-4 digits, most significant first, along a new last axis."""
    idx = np.asarray(idx, dtype=np.int64)
    pw = 4 ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // pw) % 4


def pattern_string(idx: int, width: int) -> str:
    return "".join(LETTERS[d] for d in digits(idx, width))


def _pattern_symplectic(codes: np.ndarray) -> np.ndarray:
    """(..., w) letter codes -> (..., 2w) binary ``x | z``."""
    return np.concatenate([codes & 1, codes >> 1], axis=-1).astype(np.uint8)


def _class_counts(codes: np.ndarray, letter_class: np.ndarray, nclass: int) -> np.ndarray:
    cls = letter_class[codes]
    out = np.stack([(cls == c).sum(axis=-1) for c in range(nclass)], axis=-1)
    return out.astype(np.int64)


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis into ints, first bit most significant."""
    w = bits.shape[-1]
    pw = (1 << np.arange(w - 1, -1, -1, dtype=np.int64))
    return (bits.astype(np.int64) * pw).sum(axis=-1)


class Trellis:
    """Precomputed window syndromes and per-(state, syndrome, next state) best extensions."""

    def __init__(self, c: CodeSpec, ch: ChannelModel):
        if c.m > c.n:
            raise ValueError(f"overlap m={c.m} exceeds block size n={c.n}")
        w = c.n + c.m
        if w > MAX_WINDOW:
            raise ValueError(f"window of {w} qubits too large to tabulate")
        self.code, self.channel = c, ch
        self.n, self.m, self.r = c.n, c.m, c.n - c.k
        self.S = 4 ** c.m
        self.E = 4 ** c.n
        self.letter_class, self.class_log = ch.classes()
        self.nclass = len(self.class_log)

        W = 4 ** w
        codes = digits(np.arange(W), w)
        H = syndrome_matrix(c, 1)  # rows act on the first n+m qubits
        Hx, Hz = H[:, :w].astype(np.int64), H[:, w:].astype(np.int64)
        sym = _pattern_symplectic(codes).astype(np.int64)
        bits = ((sym[:, w:] @ Hx.T) + (sym[:, :w] @ Hz.T)) & 1
        self.window_syndrome = _pack_bits(bits) if self.r else np.zeros(W, dtype=np.int64)
        self.window_valid = np.all(self.letter_class[codes] >= 0, axis=1)
        self.window_counts = _class_counts(codes, self.letter_class, self.nclass)
        ext_codes = codes[:, self.m:]
        self.ext_valid = np.all(self.letter_class[ext_codes] >= 0, axis=1)
        self.ext_counts = _class_counts(ext_codes, self.letter_class, self.nclass)
        self._build()

    def _select(self, group, score, ext, valid, ngroups):
        """First element of each group under (score desc, ext asc); -1 where the group is empty."""
        idx = np.nonzero(valid)[0]
        order = np.lexsort((ext[idx], -score[idx], group[idx]))
        g_sorted = group[idx][order]
        first = np.ones(len(order), dtype=bool)
        first[1:] = g_sorted[1:] != g_sorted[:-1]
        best = np.full(ngroups, -1, dtype=np.int64)
        best[g_sorted[first]] = idx[order[first]]
        # tie counts per group, used by the randomized tie-break
        top = score[idx][order]
        gstart = np.flatnonzero(first)
        gid = np.cumsum(first) - 1
        tied = top == top[gstart][gid]
        ties = np.zeros(ngroups, dtype=np.int64)
        np.add.at(ties, g_sorted[tied], 1)
        return best, ties, idx[order], g_sorted

    def _build(self):
        S, R, E = self.S, 2 ** self.r, self.E
        W = len(self.window_syndrome)
        widx = np.arange(W, dtype=np.int64)
        state, ext, nxt = widx // E, widx % E, widx % S
        syn = self.window_syndrome

        # step 0: the whole window is free
        score0 = score_from_counts(self.window_counts, self.class_log)
        g0 = syn * S + nxt
        b0, t0, o0, gs0 = self._select(g0, score0, widx, self.window_valid, R * S)
        self.first_window = b0.reshape(R, S)
        self.first_ties = t0.reshape(R, S)
        self._first_sorted = (o0, gs0)

        score = score_from_counts(self.ext_counts, self.class_log)
        g = (state * R + syn) * S + nxt
        b, t, o, gs = self._select(g, score, ext, self.ext_valid, S * R * S)
        self.best_window = b.reshape(S, R, S)
        self.best_ties = t.reshape(S, R, S)
        self._sorted = (o, gs)

    def tied_windows(self, first: bool, group: int) -> np.ndarray:
        """All windows in ``group`` sharing the best score (for the randomized tie-break)."""
        o, gs = self._first_sorted if first else self._sorted
        lo, hi = np.searchsorted(gs, group), np.searchsorted(gs, group, side="right")
        ties = (self.first_ties if first else self.best_ties).reshape(-1)[group]
        return o[lo:lo + ties] if hi > lo else o[:0]

    # direct enumeration, used to cross-check the tables
    def direct_first(self, sigma: int) -> np.ndarray:
        """Best window per next state for the first block, by enumerating every window."""
        w = self.n + self.m
        W = 4 ** w
        codes = digits(np.arange(W), w)
        H = syndrome_matrix(self.code, 1).astype(np.int64)
        sym = _pattern_symplectic(codes).astype(np.int64)
        bits = ((sym[:, w:] @ H[:, :w].T) + (sym[:, :w] @ H[:, w:].T)) & 1
        syn = _pack_bits(bits) if self.r else np.zeros(W, dtype=np.int64)
        ok = (syn == sigma) & np.all(self.letter_class[codes] >= 0, axis=1)
        sc = score_from_counts(_class_counts(codes, self.letter_class, self.nclass), self.class_log)
        out = np.full(self.S, -1, dtype=np.int64)
        best: dict[int, tuple] = {}
        for idx in np.nonzero(ok)[0]:
            key = (-sc[idx], int(idx))
            e2 = int(idx % self.S)
            if e2 not in best or key < best[e2]:
                best[e2] = key
                out[e2] = idx
        return out

    def direct_step(self, state: int, sigma: int) -> dict[int, int]:
        """Best window for each next state, found by enumerating all extensions of ``state``."""
        n, m, w = self.n, self.m, self.n + self.m
        ext = np.arange(self.E, dtype=np.int64)
        codes = np.concatenate([np.broadcast_to(digits(state, m), (self.E, m)), digits(ext, n)], axis=1)
        H = syndrome_matrix(self.code, 1)
        sym = _pattern_symplectic(codes).astype(np.int64)
        bits = ((sym[:, w:] @ H[:, :w].T.astype(np.int64)) + (sym[:, :w] @ H[:, w:].T.astype(np.int64))) & 1
        syn = _pack_bits(bits) if self.r else np.zeros(self.E, dtype=np.int64)
        ec = codes[:, m:]
        ok = (syn == sigma) & np.all(self.letter_class[ec] >= 0, axis=1)
        sc = score_from_counts(_class_counts(ec, self.letter_class, self.nclass), self.class_log)
        out: dict[int, int] = {}
        best: dict[int, tuple] = {}
        for e in np.nonzero(ok)[0]:
            nx = int(e % self.S)
            key = (-sc[e], int(e))
            if nx not in best or key < best[nx]:
                best[nx] = key
                out[nx] = int(state * self.E + e)
        return out


@dataclass
class DecodeResult:
    estimate: PauliString
    loglik: float
    N: int
    per_block_converged: list[bool] = field(default_factory=list)
    truncated_estimate: PauliString | None = None
    traceback_depth: int | None = None
    survivors: list[np.ndarray] | None = None  # per step: state -> survivor loglik (-inf if none)

    @property
    def truncation_agrees(self) -> bool | None:
        if self.truncated_estimate is None:
            return None
        return self.truncated_estimate.dense(self.N) == self.estimate.dense(self.N)

    def as_dict(self) -> dict:
        d = {
            "estimate": self.estimate.dense(self.N),
            "loglik": self.loglik,
            "N": self.N,
        }
        if self.traceback_depth is not None:
            d["traceback_depth"] = self.traceback_depth
            d["per_block_converged"] = list(self.per_block_converged)
            d["truncated_estimate"] = self.truncated_estimate.dense(self.N)
            d["truncation_agrees"] = self.truncation_agrees
        return d


def _syndrome_ints(s: SyndromeStream, r: int) -> list[int]:
    bits = s.bits()
    if bits.shape[1] != r and s.q:
        raise ValueError(f"syndrome blocks have {bits.shape[1]} entries, code has {r} generators")
    return [int(v) for v in _pack_bits(bits)] if r else [0] * s.q


def _choose_pred(score: np.ndarray, rank: np.ndarray) -> np.ndarray:
    """Column-wise argmax of ``score`` (states x next) with ties to the smallest rank."""
    best = score.max(axis=0)
    tie = (score == best) & np.isfinite(score)
    big = np.iinfo(np.int64).max
    return np.argmin(np.where(tie, rank[:, None], big), axis=0)


def viterbi_decode(
    c: CodeSpec,
    ch: ChannelModel,
    s: SyndromeStream,
    *,
    tie_break: str = "lex",
    seed: int | None = None,
    traceback_depth: int | None = None,
    terminated: bool = False,
    trellis: Trellis | None = None,
    use_cache: bool = True,
    trace: bool = False,
) -> DecodeResult:
    """Most likely error compatible with every syndrome, found block by block.

    ``tie_break="lex"`` returns the lexicographically smallest among equally
    likely errors; ``"random"`` picks uniformly among tied extensions using
    ``seed``.  ``traceback_depth=d`` additionally commits block ``j-d`` after
    step ``j`` from the current best survivor.  ``terminated`` forces the last
    ``m`` qubits to be error free.
    """
    if tie_break not in ("lex", "random"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    if c.m > c.n:
        raise ValueError(f"overlap m={c.m} exceeds block size n={c.n}")
    if s.q < 1:
        raise ValueError("empty syndrome stream")
    T = trellis if trellis is not None else Trellis(c, ch)
    if T.code != c or T.channel != ch:
        raise ValueError("trellis was built for a different code or channel")
    rng = np.random.Generator(np.random.PCG64(seed)) if tie_break == "random" else None
    n, m, S, E = T.n, T.m, T.S, T.E
    q = s.q
    N = n * q + m
    sig = _syndrome_ints(s, T.r)
    NEG = -np.inf

    windows, preds = [], []  # per step, indexed by state; -1 when dead
    survivors = []

    # step 0
    if use_cache and rng is None:
        w0 = T.first_window[sig[0]].copy()
    elif use_cache:
        w0 = np.full(S, -1, dtype=np.int64)
        for e2 in range(S):
            cand = T.tied_windows(True, sig[0] * S + e2)
            if len(cand):
                w0[e2] = rng.choice(cand)
    else:
        w0 = T.direct_first(sig[0])
    alive = w0 >= 0
    if not alive.any():
        raise InfeasibleSyndrome(0)
    counts = np.zeros((S, T.nclass), dtype=np.int64)
    counts[alive] = T.window_counts[w0[alive]]
    rank = _ranks(alive, np.zeros(S, dtype=np.int64), w0)
    windows.append(w0)
    preds.append(np.full(S, -1, dtype=np.int64))
    score = np.where(alive, score_from_counts(counts, T.class_log), NEG)
    survivors.append(score)

    committed: dict[int, int] = {}
    converged: list[bool] = []

    def commit(j):
        b = j - traceback_depth
        if b < 0:
            return
        sc = survivors[-1]
        best = _best_state(sc, rank)
        vals = _block_values(windows, preds, j, b, m)
        live = np.isfinite(sc)
        committed[b] = int(vals[best])
        converged.append(bool(np.all(vals[live] == vals[best])))

    if traceback_depth is not None:
        if traceback_depth < 0:
            raise ValueError("traceback depth must be non-negative")
        commit(0)

    for j in range(1, q):
        if use_cache:
            wtab = T.best_window[:, sig[j], :]  # state x next -> window
        else:
            wtab = np.full((S, S), -1, dtype=np.int64)
            for e in np.nonzero(alive)[0]:
                for e2, wv in T.direct_step(int(e), sig[j]).items():
                    wtab[e, e2] = wv
        ok = (wtab >= 0) & alive[:, None]
        cand = counts[:, None, :] + T.ext_counts[np.where(ok, wtab % E, 0)]
        csc = np.where(ok, score_from_counts(cand, T.class_log), NEG)
        if rng is None:
            pred = _choose_pred(csc, rank)
            wsel = wtab[pred, np.arange(S)]
        else:
            pred, wsel = _random_pred(T, csc, sig[j], rng)
        new_alive = np.isfinite(csc.max(axis=0))
        if not new_alive.any():
            raise InfeasibleSyndrome(j)
        pred = np.where(new_alive, pred, -1)
        wsel = np.where(new_alive, wsel, -1)
        counts = np.where(new_alive[:, None], cand[np.maximum(pred, 0), np.arange(S)], 0)
        rank = _ranks(new_alive, np.where(new_alive, rank[np.maximum(pred, 0)], 0), wsel % E)
        alive = new_alive
        windows.append(wsel)
        preds.append(pred)
        survivors.append(np.where(alive, score_from_counts(counts, T.class_log), NEG))
        if traceback_depth is not None:
            commit(j)

    final = survivors[-1]
    if terminated:
        if not np.isfinite(final[0]):
            raise InfeasibleSyndrome(q - 1)
        end = 0
    else:
        end = _best_state(final, rank)

    blocks = _traceback(windows, preds, end, m)
    est = _assemble(blocks, end, n, m)
    loglik = float(score_from_counts(counts[end], T.class_log))

    res = DecodeResult(PauliString(est), loglik, N, survivors=survivors if trace else None)
    if traceback_depth is not None:
        tb = list(blocks)
        for b, v in committed.items():
            tb[b] = v
        res.truncated_estimate = PauliString(_assemble(tb, end, n, m))
        res.per_block_converged = converged
        res.traceback_depth = traceback_depth
    return res


def _random_pred(T: Trellis, csc: np.ndarray, sigma: int, rng: np.random.Generator):
    S, R = T.S, 2 ** T.r
    pred = np.zeros(S, dtype=np.int64)
    wsel = np.full(S, -1, dtype=np.int64)
    for e2 in range(S):
        col = csc[:, e2]
        top = col.max()
        if not np.isfinite(top):
            continue
        es = np.nonzero(col == top)[0]
        weights = np.array([T.best_ties[e, sigma, e2] for e in es], dtype=float)
        e = int(rng.choice(es, p=weights / weights.sum()))
        pred[e2] = e
        wsel[e2] = rng.choice(T.tied_windows(False, (e * R + sigma) * S + e2))
    return pred, wsel


def _ranks(alive: np.ndarray, major: np.ndarray, minor: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each live survivor's prefix."""
    idx = np.nonzero(alive)[0]
    order = idx[np.lexsort((minor[idx], major[idx]))]
    rank = np.full(len(alive), np.iinfo(np.int64).max // 2, dtype=np.int64)
    rank[order] = np.arange(len(order))
    return rank


def _best_state(score: np.ndarray, rank: np.ndarray) -> int:
    top = score.max()
    tie = np.nonzero(score == top)[0]
    return int(tie[np.argmin(rank[tie])])


def _block_values(windows, preds, j: int, b: int, m: int) -> np.ndarray:
    """Pattern of block ``b`` for every state's survivor at step ``j``."""
    S = len(windows[j])
    cur = np.arange(S)
    for t in range(j, b, -1):
        cur = np.where(cur >= 0, preds[t][np.maximum(cur, 0)], -1)
    return np.where(cur >= 0, windows[b][np.maximum(cur, 0)] // (4 ** m), -1)


def _traceback(windows, preds, end: int, m: int) -> list[int]:
    out = []
    cur = end
    for t in range(len(windows) - 1, -1, -1):
        out.append(int(windows[t][cur]) // (4 ** m))
        cur = int(preds[t][cur])
    return out[::-1]


def _assemble(blocks: list[int], tail: int, n: int, m: int) -> str:
    return "".join(pattern_string(v, n) for v in blocks) + (pattern_string(tail, m) if m else "")


# ---------------------------------------------------------------------------
# exhaustive oracle


def _lex_best(codes: np.ndarray, score: np.ndarray) -> int:
    """Row index of the best score, ties to the lexicographically smallest row."""
    top = score.max()
    cand = np.nonzero(score == top)[0]
    sub = codes[cand]
    order = np.lexsort(sub.T[::-1])
    return int(cand[order[0]])


def brute_force_ml(
    c: CodeSpec,
    ch: ChannelModel,
    s: SyndromeStream,
    q: int | None = None,
    *,
    mode: str = "coset",
    terminated: bool = False,
) -> DecodeResult:
    """Global most likely compatible error by enumeration.

    ``mode="coset"`` solves for one compatible error and enumerates the whole
    solution space; ``mode="exhaustive"`` scans all ``4^N`` patterns.
    """
    q = s.q if q is None else q
    if q != s.q:
        raise ValueError(f"syndrome stream has {s.q} blocks, expected {q}")
    N = c.n * q + c.m
    target = s.bits().reshape(-1)
    H = syndrome_matrix(c, q)
    letter_class, class_log = ch.classes()
    nclass = len(class_log)
    # syndrome map on (x | z): anticommutation with each generator
    A = np.concatenate([H[:, N:], H[:, :N]], axis=1)
    if terminated and c.m:
        extra = np.zeros((2 * c.m, 2 * N), dtype=np.uint8)
        for i in range(c.m):
            extra[i, N - c.m + i] = 1
            extra[c.m + i, 2 * N - c.m + i] = 1
        A = np.concatenate([A, extra])
        target = np.concatenate([target, np.zeros(2 * c.m, dtype=np.uint8)])

    if mode == "exhaustive":
        if N > MAX_EXHAUSTIVE:
            raise ValueError(f"{N} qubits too many for exhaustive search (limit {MAX_EXHAUSTIVE})")
        best_key, best_codes = None, None
        chunk = 4 ** min(N, 8)
        for start in range(0, 4 ** N, chunk):
            codes = digits(np.arange(start, start + chunk), N)
            sym = _pattern_symplectic(codes)
            ok = np.all(((sym.astype(np.int64) @ A.T.astype(np.int64)) & 1) == target, axis=1)
            ok &= np.all(letter_class[codes] >= 0, axis=1)
            if not ok.any():
                continue
            codes = codes[ok]
            sc = score_from_counts(_class_counts(codes, letter_class, nclass), class_log)
            i = _lex_best(codes, sc)
            key = (-sc[i], tuple(codes[i]))
            if best_key is None or key < best_key:
                best_key, best_codes = key, codes[i]
        if best_codes is None:
            raise InfeasibleSyndrome(q - 1)
    elif mode == "coset":
        e0 = solve(A, target)
        if e0 is None:
            raise InfeasibleSyndrome(q - 1)
        K = nullspace(A)
        if len(K) > MAX_KERNEL:
            raise ValueError(f"solution space of dimension {len(K)} too large to enumerate")
        # iterate over the span with a Gray code would save memory; plain products are fast enough here
        combos = ((np.arange(2 ** len(K))[:, None] >> np.arange(len(K))[None, :]) & 1).astype(np.uint8)
        sols = ((combos.astype(np.int32) @ K.astype(np.int32)) & 1).astype(np.uint8) ^ e0
        codes = sols[:, :N].astype(np.int64) + 2 * sols[:, N:].astype(np.int64)
        okc = np.all(letter_class[codes] >= 0, axis=1)
        if not okc.any():
            raise InfeasibleSyndrome(q - 1)
        codes = codes[okc]
        sc = score_from_counts(_class_counts(codes, letter_class, nclass), class_log)
        best_codes = codes[_lex_best(codes, sc)]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    est = "".join(LETTERS[v] for v in best_codes)
    counts = _class_counts(np.asarray(best_codes)[None, :], letter_class, nclass)[0]
    return DecodeResult(PauliString(est), float(score_from_counts(counts, class_log)), N)


def prefix_oracle(c: CodeSpec, ch: ChannelModel, q: int) -> np.ndarray:
    """Best loglik for every (syndrome stream, final overlap pattern) on ``q`` blocks.

    Scans all ``4^N`` patterns; returns an array ``(2^(q(n-k)), 4^m)`` with
    ``-inf`` where no pattern fits.  Syndrome streams are indexed with block 0
    most significant.
    """
    N = c.n * q + c.m
    if N > MAX_EXHAUSTIVE:
        raise ValueError(f"{N} qubits too many for exhaustive search")
    H = syndrome_matrix(c, q)
    letter_class, class_log = ch.classes()
    nclass = len(class_log)
    lo_w = min(N, 7)
    hi_w = N - lo_w

    def tables(width, offset):
        codes = digits(np.arange(4 ** width), width)
        full = np.zeros((len(codes), N), dtype=np.int64)
        full[:, offset:offset + width] = codes
        sym = _pattern_symplectic(full).astype(np.int64)
        bits = ((sym[:, N:] @ H[:, :N].T.astype(np.int64)) + (sym[:, :N] @ H[:, N:].T.astype(np.int64))) & 1
        syn = _pack_bits(bits)
        valid = np.all(letter_class[codes] >= 0, axis=1)
        return syn, _class_counts(codes, letter_class, nclass), valid

    syn_hi, cnt_hi, ok_hi = tables(hi_w, 0)
    syn_lo, cnt_lo, ok_lo = tables(lo_w, hi_w)
    S = 4 ** c.m
    state_lo = np.arange(4 ** lo_w) % S
    nsyn = 2 ** (q * (c.n - c.k))
    best = np.full(nsyn * S, -np.inf)
    step = max(1, (1 << 20) // len(syn_lo))
    for h0 in range(0, len(syn_hi), step):
        hs = slice(h0, h0 + step)
        ok = ok_hi[hs, None] & ok_lo[None, :]
        key = (syn_hi[hs, None] ^ syn_lo[None, :]) * S + state_lo[None, :]
        sc = score_from_counts(cnt_hi[hs, None, :] + cnt_lo[None, :, :], class_log)
        np.maximum.at(best, key[ok], sc[ok])
    return best.reshape(nsyn, S)


# ---------------------------------------------------------------------------
# residual classification


@dataclass
class Classification:
    success: bool
    violated: list[tuple[int, int, str]] = field(default_factory=list)  # (block s, logical r, "X"/"Z")
    warning: str | None = None

    @property
    def label(self) -> str:
        return "Success" if self.success else "LogicalError"

    def as_dict(self) -> dict:
        d = {"classification": self.label, "violated": [list(v) for v in self.violated]}
        if self.warning:
            d["warning"] = self.warning
        return d


def _sym(e: PauliString | str, N: int) -> np.ndarray:
    if isinstance(e, str):
        if len(e) != N:
            raise ValueError(f"operator has {len(e)} letters, expected {N}")
        e = PauliString(e)
    if e.end > N:
        raise ValueError(f"operator support exceeds {N} qubits")
    return e.symplectic(N)


def classify_residual(
    est: PauliString | str, truth: PauliString | str, c: CodeSpec, lo: LogicalOps, q: int
) -> Classification:
    """Success iff ``est * truth`` commutes with every encoded operator fully inside the stream."""
    N = c.n * q + c.m
    a, b = _sym(est, N), _sym(truth, N)
    if not np.array_equal(syndrome_bits(c, a, q), syndrome_bits(c, b, q)):
        raise ValueError("estimate does not reproduce the syndromes of the true error")
    R = (a ^ b).astype(np.int64)
    kinds = [("X", lo.xbar_ops())]
    warn = None
    zs = lo.zbar_ops()
    if zs is None:
        warn = "Z-bar unavailable (catastrophic code); only X-bar operators checked"
        warnings.warn(warn, stacklevel=2)
    else:
        kinds.append(("Z", zs))
    bad = []
    for s_blk, (kind, ops) in itertools.product(range(q), kinds):
        for r, op in enumerate(ops):
            try:
                v = expand(op, s_blk + lo.lambda_deg, N).astype(np.int64)
            except SupportOverflow:
                continue
            if (v[:N] @ R[N:] + v[N:] @ R[:N]) & 1:
                bad.append((s_blk, r, kind))
    bad.sort()
    return Classification(not bad, bad, warn)

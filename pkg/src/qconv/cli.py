"""``qconv`` command line: code inspection, encoder synthesis, decoding and Monte Carlo runs."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .channel import (
    ChannelModel,
    SyndromeStream,
    depolarizing,
    extract_syndromes,
    make_rng,
    sample_error,
    trial_seed,
)
from .circuit import build_encoder, verify_encoder
from .code import CodeSpec, CodeSyntaxError, InvalidCode, load_code, parse_code, validate
from .decoder import InfeasibleSyndrome, Trellis, classify_residual, viterbi_decode
from .gf2poly import Poly
from .structure import CatastrophicCode, NonDiagonalForm, logical_ops, standard_form

SCHEMA = 1

# required top-level keys of each --json payload
JSON_KEYS = {
    "validate": {"valid": bool, "rank": int, "expected_rank": int, "failing_pairs": list},
    "standard-form": {"r": int, "col_perm": list, "diagonal": bool, "rows": list},
    "logicals": {"xbar": list, "zbar": (list, type(None)), "conditioning": str, "lambda": int},
    "encode": {"qubits": int, "gates": int, "counts": dict, "verify": dict},
    "check-catastrophic": {"catastrophic": bool, "conditioning": str},
    "decode": {"estimate": str, "loglik": float, "N": int},
    "simulate": {"trials": int, "q": int, "channel": dict, "logical_error_rate": float, "failures": int},
}


class UsageError(Exception):
    pass


def check_payload(payload: dict) -> None:
    """Raise ValueError unless ``payload`` has the documented keys and types."""
    if payload.get("schema") != SCHEMA:
        raise ValueError("missing or wrong schema version")
    cmd = payload.get("command")
    if cmd not in JSON_KEYS:
        raise ValueError(f"unknown command {cmd!r}")
    for key, typ in JSON_KEYS[cmd].items():
        if key not in payload:
            raise ValueError(f"{cmd}: missing key {key!r}")
        if not isinstance(payload[key], typ) or (typ is int and isinstance(payload[key], bool)):
            raise ValueError(f"{cmd}: key {key!r} has type {type(payload[key]).__name__}")


# ---------------------------------------------------------------------------
# formatting


def _vec(entries: list[Poly]) -> str:
    texts = [str(e) for e in entries]
    sep = "" if all(t in ("0", "1") for t in texts) else ","
    return sep.join(texts)


def format_operator(m, row: int, n: int, perm) -> str:
    xs, zs = [Poly()] * n, [Poly()] * n
    for c in range(n):
        xs[perm[c]] = m[row, c]
        zs[perm[c]] = m[row, n + c]
    return f"({_vec(xs)}|{_vec(zs)})"


def _emit(args, text: str, payload: dict):
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, **payload}
        text = json.dumps(payload, sort_keys=True) + "\n"
    if args.output and args.command != "encode":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _code(args) -> CodeSpec:
    path = args.code_opt or args.code_pos
    if path is None:
        raise UsageError("a code file is required")
    return load_code(path)


def _channel(args) -> ChannelModel:
    if args.channel == "depolarizing":
        if args.p is None:
            raise UsageError("--channel depolarizing needs --p")
        return depolarizing(args.p)
    if None in (args.px, args.py, args.pz):
        raise UsageError("--channel pauli needs --px, --py and --pz")
    return ChannelModel.pauli(args.px, args.py, args.pz)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    path = args.code_opt or args.code_pos
    if path is None:
        raise UsageError("a code file is required")
    text = Path(path).read_text() if Path(path).exists() else None
    c = load_code(path, check=False) if text is None else parse_code(text, check=False)
    rep = validate(c)
    d = rep.as_dict()
    d["failing_pairs"] = [[i + 1, j + 1] for i, j in rep.failing_pairs()]
    lines = [f"code ({c.n},{c.k},{c.m}): {'valid' if rep.valid else 'INVALID'}"]
    if rep.expected_rank:
        lines.append(f"rank {rep.rank} (expected {rep.expected_rank})")
    lines += [f"error: {e}" for e in rep.errors]
    _emit(args, "\n".join(lines) + "\n", d)
    return 0 if rep.valid else 1


def cmd_standard_form(args) -> int:
    c = _code(args)
    sf = standard_form(c)
    rows = [
        " ".join(str(sf.x[i, j]) for j in range(c.n)) + " | " + " ".join(str(sf.z[i, j]) for j in range(c.n))
        for i in range(c.n - c.k)
    ]
    text = [f"r = {sf.r}, s = {sf.s}, column order = {' '.join(str(p + 1) for p in sf.col_perm)}"]
    text += rows
    if not sf.diagonal_ok:
        text.append("warning: pivots could not be made diagonal")
    payload = {"r": sf.r, "col_perm": list(sf.col_perm), "diagonal": sf.diagonal_ok, "rows": rows}
    _emit(args, "\n".join(text) + "\n", payload)
    return 0


def cmd_logicals(args) -> int:
    c = _code(args)
    lo = logical_ops(standard_form(c))
    xs = [format_operator(lo.xbar, i, c.n, lo.col_perm) for i in range(c.k)]
    zs = [format_operator(lo.zbar, i, c.n, lo.col_perm) for i in range(c.k)] if lo.zbar is not None else None
    lines = []
    for i in range(c.k):
        suffix = f"[{i + 1}]" if c.k > 1 else ""
        lines.append(f"X̄{suffix} = {xs[i]}")
        lines.append(f"Z̄{suffix} = {zs[i]}" if zs else f"Z̄{suffix} unavailable (catastrophic)")
    lines.append(f"Λ = {lo.conditioning}, λ = {lo.lambda_deg}")
    payload = {"xbar": xs, "zbar": zs, "conditioning": str(lo.conditioning), "lambda": lo.lambda_deg}
    _emit(args, "\n".join(lines) + "\n", payload)
    return 0


def cmd_check_catastrophic(args) -> int:
    c = _code(args)
    lo = logical_ops(standard_form(c))
    word = "catastrophic" if lo.catastrophic else "non-catastrophic"
    _emit(args, f"{word} (Λ = {lo.conditioning})\n",
          {"catastrophic": lo.catastrophic, "conditioning": str(lo.conditioning)})
    return 0


def cmd_encode(args) -> int:
    c = _code(args)
    sf = standard_form(c)
    lo = logical_ops(sf)
    circ = build_encoder(c, sf, lo, args.blocks, simplify=args.simplify)
    rep = verify_encoder(circ, c, lo, args.blocks)
    if args.output:
        Path(args.output).write_text(circ.to_text())
    counts = circ.counts()
    summary = [f"qubits {circ.N}, gates {len(circ)}: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))]
    summary.append("verification " + ("passed" if rep.ok else "FAILED"))
    summary += [f"  {f}" for f in rep.failures]
    text = "\n".join(summary) + "\n"
    if not args.output and not args.json:
        text = circ.to_text() + text
    payload = {"qubits": circ.N, "gates": len(circ), "counts": counts, "verify": rep.as_dict()}
    _emit(args, text, payload)
    return 0 if rep.ok else 1


def cmd_decode(args) -> int:
    c = _code(args)
    ch = _channel(args)
    if not args.syndromes:
        raise UsageError("--syndromes FILE is required")
    s = SyndromeStream.from_text(Path(args.syndromes).read_text())
    res = viterbi_decode(c, ch, s, tie_break=args.tie, seed=args.seed, traceback_depth=args.traceback,
                         terminated=args.terminated)
    lines = [f"estimate {res.estimate.dense(res.N)}", f"loglik {res.loglik:.12g}"]
    if res.traceback_depth is not None:
        lines.append(f"truncated {res.truncated_estimate.dense(res.N)} (agrees: {res.truncation_agrees})")
    payload = res.as_dict()
    payload.update({"tie_break": args.tie, "seed": args.seed, "terminated": args.terminated})
    _emit(args, "\n".join(lines) + "\n", payload)
    return 0


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass
class TrialRecord:
    trial: int
    seed: list[int]
    error_weight: int
    syndrome_weight: int
    loglik: float
    classification: str
    truncation_agrees: bool | None


@dataclass
class RunSummary:
    trials: int
    q: int
    channel: dict
    seed: int
    traceback: int | None
    terminated: bool
    failures: int
    logical_error_rate: float
    truncation_agreements: int | None
    truncation_agreement_rate: float | None
    wall_time: float | None = None


def run_trials(c: CodeSpec, ch: ChannelModel, q: int, seed: int, indices, traceback=None,
               terminated=False) -> list[TrialRecord]:
    """Independent trials; each draws from its own stream keyed by ``(seed, index)``."""
    T = Trellis(c, ch)
    lo = logical_ops(standard_form(c))
    N = c.n * q + c.m
    out = []
    for i in indices:
        rng = make_rng(trial_seed(seed, i))
        width = N - c.m if terminated and c.m else N
        e = sample_error(ch, width, rng=rng)
        s = extract_syndromes(c, e, q)
        res = viterbi_decode(c, ch, s, traceback_depth=traceback, terminated=terminated, trellis=T)
        cls = classify_residual(res.estimate, e, c, lo, q)
        out.append(TrialRecord(int(i), [int(seed), int(i)], e.weight, s.weight, res.loglik, cls.label,
                               res.truncation_agrees))
    return out


def _run_chunk(job):
    text, chd, q, seed, idx, tb, term = job
    return run_trials(parse_code(text), ChannelModel(**chd), q, seed, idx, tb, term)


def simulate(c: CodeSpec, ch: ChannelModel, q: int, trials: int, seed: int = 0, traceback=None,
             terminated=False, workers: int = 1) -> tuple[RunSummary, list[TrialRecord]]:
    if trials < 1:
        raise ValueError("need at least one trial")
    if q < 1:
        raise ValueError("need at least one block")
    t0 = time.perf_counter()
    if workers <= 1:
        records = run_trials(c, ch, q, seed, range(trials), traceback, terminated)
    else:
        from .code import serialize_code

        chunks = np.array_split(np.arange(trials), workers)
        jobs = [(serialize_code(c), ch.as_dict(), q, seed, list(ch_idx), traceback, terminated)
                for ch_idx in chunks if len(ch_idx)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, jobs) for r in part]
    records.sort(key=lambda r: r.trial)
    fails = sum(r.classification != "Success" for r in records)
    agree = None if traceback is None else sum(bool(r.truncation_agrees) for r in records)
    summary = RunSummary(
        trials=trials, q=q, channel=ch.as_dict(), seed=seed, traceback=traceback, terminated=terminated,
        failures=fails, logical_error_rate=fails / trials, truncation_agreements=agree,
        truncation_agreement_rate=None if agree is None else agree / trials,
        wall_time=time.perf_counter() - t0,
    )
    return summary, records


def cmd_simulate(args) -> int:
    c = _code(args)
    ch = _channel(args)
    seed = 0 if args.seed is None else args.seed
    summary, records = simulate(c, ch, args.blocks, args.trials, seed, args.traceback, args.terminated,
                                args.workers)
    payload = asdict(summary)
    if not args.timing:
        payload.pop("wall_time")  # keeps seeded output byte-identical
    if args.records:
        payload["records"] = [asdict(r) for r in records]
    lines = [
        f"trials {summary.trials}, blocks {summary.q}, seed {seed}",
        f"logical error rate {summary.logical_error_rate:.6g} ({summary.failures} failures)",
    ]
    if summary.truncation_agreement_rate is not None:
        lines.append(f"traceback depth {args.traceback} agreement {summary.truncation_agreement_rate:.6g}")
    if args.timing:
        lines.append(f"wall time {summary.wall_time:.3f} s")
    _emit(args, "\n".join(lines) + "\n", payload)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(parser, default):
    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    parser.add_argument("--seed", type=int, default=default(None))
    parser.add_argument("-o", "--output", default=default(None), help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qconv", description="Convolutional stabilizer code toolkit.")
    _global_flags(p, lambda v: v)
    sub = p.add_subparsers(dest="command", required=True)

    def with_code(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, lambda v: argparse.SUPPRESS)  # flags may also follow the subcommand
        sp.add_argument("code_pos", nargs="?", metavar="CODE", help="code file or bundled name")
        sp.add_argument("--code", dest="code_opt", metavar="FILE")
        sp.set_defaults(func=fn)
        return sp

    with_code("validate", cmd_validate, "check shifted commutation and rank")
    with_code("standard-form", cmd_standard_form, "print the standard polynomial form")
    with_code("logicals", cmd_logicals, "print encoded X and Z operators")
    with_code("check-catastrophic", cmd_check_catastrophic, "monomial test of the conditioning polynomial")
    enc = with_code("encode", cmd_encode, "synthesize and verify an encoder circuit")
    enc.add_argument("--blocks", type=int, default=2)
    enc.add_argument("--simplify", action="store_true")

    def channel_args(sp):
        sp.add_argument("--channel", choices=["depolarizing", "pauli"], default="depolarizing")
        sp.add_argument("--p", type=float)
        sp.add_argument("--px", type=float)
        sp.add_argument("--py", type=float)
        sp.add_argument("--pz", type=float)
        sp.add_argument("--traceback", type=int)
        sp.add_argument("--terminated", action="store_true")

    dec = with_code("decode", cmd_decode, "most likely error for a syndrome file")
    channel_args(dec)
    dec.add_argument("--syndromes", metavar="FILE")
    dec.add_argument("--tie", choices=["lex", "random"], default="lex")

    sim = with_code("simulate", cmd_simulate, "Monte Carlo logical error rate")
    channel_args(sim)
    sim.add_argument("--trials", type=int, default=1000)
    sim.add_argument("--blocks", type=int, default=20)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--records", action="store_true", help="include per-trial records in JSON")
    sim.add_argument("--timing", action="store_true", help="report wall time")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except FileNotFoundError as e:
        print(f"qconv: {e}", file=sys.stderr)
        return 2
    except CodeSyntaxError as e:
        print(f"qconv: {e}", file=sys.stderr)
        return 1
    except InvalidCode as e:
        print(f"qconv: invalid code: {e}", file=sys.stderr)
        return 1
    except (CatastrophicCode, NonDiagonalForm, InfeasibleSyndrome, ValueError) as e:
        print(f"qconv: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

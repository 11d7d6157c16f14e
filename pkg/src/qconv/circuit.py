"""Encoding-circuit synthesis and a stabilizer-tableau engine to check it.

Qubit indices in :class:`Gate` and in the text format are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .code import CodeSpec
from .gf2poly import Laurent
from .pauli import LETTERS, PauliPoly, delay, to_string
from .structure import LogicalOps, StandardForm, NonDiagonalForm

SINGLE = ("H", "S", "X", "Z")
CONTROLLED = ("CX", "CY", "CZ")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind in SINGLE:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} takes one qubit")
        elif self.kind in CONTROLLED:
            if len(self.qubits) != 2:
                raise ValueError(f"{self.kind} takes control and target")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError("control and target must differ")
        else:
            raise ValueError(f"unknown gate {self.kind!r}")
        if min(self.qubits) < 1:
            raise ValueError("qubit indices are 1-based")

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


@dataclass
class Circuit:
    N: int
    gates: list[Gate] = field(default_factory=list)
    layout: dict[tuple[int, int], int] = field(default_factory=dict)  # (s, r) -> 1-based qubit
    block_count: int = 0
    n: int = 1
    lambda_deg: int = 0

    def __post_init__(self):
        for g in self.gates:
            if max(g.qubits) > self.N:
                raise ValueError(f"gate {g} outside 1..{self.N}")

    def append(self, g: Gate):
        if max(g.qubits) > self.N:
            raise ValueError(f"gate {g} outside 1..{self.N}")
        self.gates.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.gates:
            out[g.kind] = out.get(g.kind, 0) + 1
        return out

    def ancillas(self) -> list[int]:
        info = set(self.layout.values())
        return [q for q in range(1, self.N + 1) if q not in info]

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.N}", *map(str, self.gates)]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("qubits "):
            raise ValueError("circuit text must start with 'qubits N'")
        N = int(lines[0].split()[1])
        gates = []
        for ln in lines[1:]:
            kind, *qs = ln.split()
            gates.append(Gate(kind, tuple(int(q) for q in qs)))
        return cls(N, gates)


# ---------------------------------------------------------------------------
# tableau rules on arrays of signed Pauli rows


def _h(x, z, r, q):
    r ^= x[:, q] & z[:, q]
    x[:, q], z[:, q] = z[:, q].copy(), x[:, q].copy()


def _s(x, z, r, q):
    r ^= x[:, q] & z[:, q]
    z[:, q] ^= x[:, q]


def _cx(x, z, r, c, t):
    r ^= x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ True)
    x[:, t] ^= x[:, c]
    z[:, c] ^= z[:, t]


def conjugate_rows(x, z, r, gate: Gate, inverse: bool = False):
    """In place: each row P becomes ``g P g^dag`` (or ``g^dag P g`` when ``inverse``)."""
    q = [i - 1 for i in gate.qubits]
    k = gate.kind
    if k == "H":
        _h(x, z, r, q[0])
    elif k == "S":
        for _ in range(3 if inverse else 1):
            _s(x, z, r, q[0])
    elif k == "X":
        r ^= z[:, q[0]]
    elif k == "Z":
        r ^= x[:, q[0]]
    elif k == "CX":
        _cx(x, z, r, *q)
    elif k == "CZ":
        _h(x, z, r, q[1])
        _cx(x, z, r, *q)
        _h(x, z, r, q[1])
    elif k == "CY":
        # CY = S_t CX S_t^dag
        for _ in range(3):
            _s(x, z, r, q[1])
        _cx(x, z, r, *q)
        _s(x, z, r, q[1])


def _g(x1, z1, x2, z2) -> np.ndarray:
    """Exponent of i picked up when multiplying single-qubit Paulis."""
    x1, z1, x2, z2 = (np.asarray(a, dtype=np.int64) for a in (x1, z1, x2, z2))
    return np.where(
        (x1 == 0) & (z1 == 0),
        0,
        np.where(
            (x1 == 1) & (z1 == 1),
            z2 - x2,
            np.where(x1 == 1, z2 * (2 * x2 - 1), x2 * (1 - 2 * z2)),
        ),
    )


@dataclass
class SignedPauli:
    """Hermitian Pauli ``(-1)^sign * sigma(x, z)`` with Y written as a letter."""

    x: np.ndarray
    z: np.ndarray
    sign: int = 0

    @classmethod
    def from_letters(cls, text: str, sign: int = 0) -> "SignedPauli":
        x = np.array([c in "XY" for c in text], dtype=bool)
        z = np.array([c in "ZY" for c in text], dtype=bool)
        return cls(x, z, sign & 1)

    @property
    def letters(self) -> str:
        return "".join(LETTERS[int(a) + 2 * int(b)] for a, b in zip(self.x, self.z))

    def __mul__(self, o: "SignedPauli") -> "SignedPauli":
        ph = 2 * self.sign + 2 * o.sign + int(_g(self.x, self.z, o.x, o.z).sum())
        ph %= 4
        if ph & 1:
            raise ValueError("product of anticommuting Paulis is not Hermitian")
        return SignedPauli(self.x ^ o.x, self.z ^ o.z, ph >> 1)

    def commutes(self, o: "SignedPauli") -> bool:
        return (int(np.sum(self.x & o.z)) + int(np.sum(self.z & o.x))) % 2 == 0

    def __str__(self) -> str:
        return ("-" if self.sign else "+") + self.letters


def propagate(p: SignedPauli, gates: Sequence[Gate], *, backward: bool = False) -> SignedPauli:
    """``U p U^dag`` for the circuit U, or ``U^dag p U`` when ``backward``."""
    x, z = p.x.reshape(1, -1).copy(), p.z.reshape(1, -1).copy()
    r = np.array([bool(p.sign)])
    seq = reversed(gates) if backward else gates
    for g in seq:
        conjugate_rows(x, z, r, g, inverse=backward)
    return SignedPauli(x[0], z[0], int(r[0]))


class Tableau:
    """Destabilizer/stabilizer tableau; rows ``0..N-1`` destabilizers, ``N..2N-1`` stabilizers."""

    def __init__(self, N: int):
        self.N = N
        self.x = np.zeros((2 * N, N), dtype=bool)
        self.z = np.zeros((2 * N, N), dtype=bool)
        self.r = np.zeros(2 * N, dtype=bool)
        idx = np.arange(N)
        self.x[idx, idx] = True
        self.z[N + idx, idx] = True

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.N, t.x, t.z, t.r = self.N, self.x.copy(), self.z.copy(), self.r.copy()
        return t

    def apply(self, g: Gate) -> "Tableau":
        if max(g.qubits) > self.N:
            raise IndexError(f"gate {g} outside 1..{self.N}")
        conjugate_rows(self.x, self.z, self.r, g)
        return self

    def row(self, i: int) -> SignedPauli:
        return SignedPauli(self.x[i].copy(), self.z[i].copy(), int(self.r[i]))

    def stabilizers(self) -> list[SignedPauli]:
        return [self.row(self.N + i) for i in range(self.N)]

    def is_symplectic(self) -> bool:
        xi, zi = self.x.astype(np.int64), self.z.astype(np.int64)
        form = (xi @ zi.T + zi @ xi.T) % 2
        N = self.N
        want = np.zeros((2 * N, 2 * N), dtype=np.int64)
        want[np.arange(N), N + np.arange(N)] = 1
        want[N + np.arange(N), np.arange(N)] = 1
        return bool(np.array_equal(form, want))

    def stabilizer_sign(self, p: SignedPauli) -> int | None:
        """+1/-1 when ``±p`` lies in the stabilizer group, else None."""
        N = self.N
        stab = [self.row(N + i) for i in range(N)]
        if not all(p.commutes(s) for s in stab):
            return None
        acc = SignedPauli(np.zeros(N, dtype=bool), np.zeros(N, dtype=bool), 0)
        for i in range(N):
            if not p.commutes(self.row(i)):
                acc = acc * stab[i]
        if not (np.array_equal(acc.x, p.x) and np.array_equal(acc.z, p.z)):
            return None
        return 1 if acc.sign == p.sign else -1


def tableau_new(N: int) -> Tableau:
    return Tableau(N)


def tableau_apply(t: Tableau, g: Gate) -> Tableau:
    return t.copy().apply(g)


# ---------------------------------------------------------------------------
# encoder synthesis


def _dense(p: PauliPoly, shift: int, N: int) -> str:
    return to_string(delay(p, shift)).dense(N)


def row_signs(c: CodeSpec, sf: StandardForm) -> list[int]:
    """Sign of each standard-form row as a product of the signed code generators."""
    signs = []
    rows = sf.rows()
    for i, trow in enumerate(sf.transform):
        terms = [(ip, e) for ip, lt in enumerate(trow) for e in _exponents(lt)]
        if not terms:
            signs.append(1)
            continue
        lo = min(0, min(e for _, e in terms))
        gdeg = max(int(max(g.degree, 0)) for g in c.gens)
        top = max(e for _, e in terms) - lo + gdeg + 1
        N = c.n * top
        acc = SignedPauli(np.zeros(N, dtype=bool), np.zeros(N, dtype=bool), 0)
        for ip, e in terms:
            g = SignedPauli.from_letters(_dense(c.gens[ip], e - lo, N), 0 if c.signs[ip] > 0 else 1)
            acc = acc * g
        if acc.letters != _dense(rows[i], -lo, N):
            raise AssertionError("standard-form transcript does not reproduce the row")
        signs.append(-1 if acc.sign else 1)
    return signs


def _exponents(x: Laurent) -> list[int]:
    return [x.shift + j for j in x.body.terms()]


@dataclass
class _Gadget:
    gates: list[Gate]

    @property
    def support(self) -> set[int]:
        return {q for g in self.gates for q in g.qubits}


def build_encoder(
    c: CodeSpec,
    sf: StandardForm,
    lo: LogicalOps,
    q: int,
    *,
    simplify: bool = False,
    online: bool = True,
) -> Circuit:
    """Circuit mapping ``q*k`` info qubits plus |0> ancillas onto the code space.

    With ``online`` the conditional-X-bar gadgets are interleaved with the
    projection gadgets; a gadget only moves past another when their qubits are
    disjoint, so the unitary is the same as the staged order.
    """
    if q < 1:
        raise ValueError("need at least one information block")
    if not sf.diagonal_ok:
        raise NonDiagonalForm("encoder needs a diagonal standard form")
    n, k, lam = c.n, c.k, lo.lambda_deg
    rows = sf.rows()
    nk = n - k
    xbars = lo.xbar_ops()
    gen_blocks = q + lam
    blocks = q + lam + c.overlap_blocks
    need = [gen_blocks + int(max(rw.degree, 0)) for rw in rows]
    need += [q + lam + int(max(xb.degree, 0)) for xb in xbars]
    blocks = max([blocks, *need])
    N = n * blocks

    layout: dict[tuple[int, int], int] = {}
    info_cols = lo.info_columns()
    for s in range(q):
        for r in range(k):
            layout[(s, r)] = (s + lam + lo.control_degree[r]) * n + info_cols[r] + 1

    xgadgets: list[_Gadget] = []
    for s in range(q):
        for r in range(k):
            ctrl = layout[(s, r)]
            letters = _dense(xbars[r], s + lam, N)
            if letters[ctrl - 1] != "X":
                raise AssertionError("X-bar does not carry X on its information qubit")
            gates = [
                Gate("C" + ch, (ctrl, i + 1))
                for i, ch in enumerate(letters)
                if ch != "I" and i + 1 != ctrl
            ]
            xgadgets.append(_Gadget(gates))

    signs = row_signs(c, sf)
    pgadgets: list[_Gadget] = []
    zero_flips: set[int] = set()
    for j in range(gen_blocks):
        for i in range(sf.r, nk):
            letters = _dense(rows[i], j, N)
            parity = sum(1 for qb in zero_flips if letters[qb] in "ZY") % 2
            if (-1) ** parity != signs[i]:
                col = sf.col_perm[i]
                tgt = (j + sf.z[i, i].degree) * n + col
                zero_flips.add(tgt)
                pgadgets.append(_Gadget([Gate("X", (tgt + 1,))]))
        for i in range(sf.r):
            letters = _dense(rows[i], j, N)
            ctrl = (j + sf.x[i, i].degree) * n + sf.col_perm[i]
            lc = letters[ctrl]
            gates = [Gate("H", (ctrl + 1,))]
            phase = 0  # quarter turns applied to the control after H
            if lc == "Y":
                phase += 1
            if signs[i] < 0:
                phase += 2
            phase %= 4
            if phase == 1:
                gates.append(Gate("S", (ctrl + 1,)))
            elif phase == 2:
                gates.append(Gate("Z", (ctrl + 1,)))
            elif phase == 3:
                gates += [Gate("S", (ctrl + 1,)), Gate("Z", (ctrl + 1,))]
            for t, ch in enumerate(letters):
                if ch != "I" and t != ctrl:
                    gates.append(Gate("C" + ch, (ctrl + 1, t + 1)))
            pgadgets.append(_Gadget(gates))

    if online:
        order = _interleave(xgadgets, pgadgets)
    else:
        order = xgadgets + pgadgets
    gates = [g for gd in order for g in gd.gates]
    if simplify:
        gates = simplify_gates(gates, zero=set(range(1, N + 1)) - set(layout.values()))
    return Circuit(N=N, gates=gates, layout=layout, block_count=blocks, n=n, lambda_deg=lam)


def _interleave(xg: list[_Gadget], pg: list[_Gadget]) -> list[_Gadget]:
    out: list[_Gadget] = []
    done = 0
    for p in pg:
        sup = p.support
        last = -1
        for idx in range(done, len(xg)):
            if xg[idx].support & sup:
                last = idx
        if last >= done:
            out.extend(xg[done:last + 1])
            done = last + 1
        out.append(p)
    out.extend(xg[done:])
    return out


def simplify_gates(gates: Iterable[Gate], zero: set[int]) -> list[Gate]:
    """Drop Z and CZ gates that act on a qubit still provably in |0>."""
    zero = set(zero)
    out = []
    for g in gates:
        if g.kind == "Z" and g.qubits[0] in zero:
            continue
        if g.kind == "CZ" and (g.qubits[0] in zero or g.qubits[1] in zero):
            continue
        if g.kind in ("H", "X"):
            zero.discard(g.qubits[0])
        elif g.kind in ("CX", "CY") and g.qubits[0] not in zero:
            zero.discard(g.qubits[1])
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    generator_checks: int = 0
    logical_checks: int = 0
    failures: list[str] = field(default_factory=list)
    locality_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures and self.locality_ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "generator_checks": self.generator_checks,
            "logical_checks": self.logical_checks,
            "locality_ok": self.locality_ok,
            "failures": list(self.failures),
        }


def check_locality(circ: Circuit) -> bool:
    """No gate touches block ``b`` after some gate touched block ``b + lambda + 2``."""
    seen = -1
    for g in circ.gates:
        bl = [(qb - 1) // circ.n for qb in g.qubits]
        if seen >= min(bl) + circ.lambda_deg + 2:
            return False
        seen = max(seen, max(bl))
    return True


def verify_encoder(circ: Circuit, c: CodeSpec, lo: LogicalOps, q: int) -> VerifyReport:
    rep = VerifyReport()
    N, lam = circ.N, lo.lambda_deg
    tab = Tableau(N)
    for g in circ.gates:
        tab.apply(g)
    for j in range(q + lam):
        for i, gen in enumerate(c.gens):
            if (j + 1) * c.n + c.m > N:
                continue
            sp = SignedPauli.from_letters(_dense(gen, j, N), 0 if c.signs[i] > 0 else 1)
            rep.generator_checks += 1
            got = tab.stabilizer_sign(sp)
            if got != 1:
                what = "missing" if got is None else "has sign -1"
                rep.failures.append(f"M[{j},{i + 1}] {what} in output stabilizer group")
    ancilla = np.zeros(N, dtype=bool)
    ancilla[[a - 1 for a in circ.ancillas()]] = True
    xbars = lo.xbar_ops()
    for (s, r), ctrl in sorted(circ.layout.items()):
        rep.logical_checks += 1
        sp = SignedPauli.from_letters(_dense(xbars[r], s + lam, N))
        back = propagate(sp, circ.gates, backward=True)
        xr = back.x.copy()
        ok = xr[ctrl - 1]
        xr[ctrl - 1] = False
        ok = ok and not xr.any() and not back.z[~ancilla].any() and back.sign == 0
        if not ok:
            rep.failures.append(f"X-bar[{s},{r + 1}] is not the image of X on qubit {ctrl}: {back}")
    rep.locality_ok = check_locality(circ)
    return rep

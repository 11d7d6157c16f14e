"""Standard polynomial form, encoded Pauli operators and the conditioning polynomial."""

from __future__ import annotations

from dataclasses import dataclass, field

from .code import CodeSpec, InvalidCode, validate
from .gf2poly import (
    Elimination,
    ElimStep,
    Laurent,
    Poly,
    PolyMatrix,
    eliminate,
    is_monomial,
    laurent_normalize_group,
    poly_divmod,
    poly_gcd,
    poly_lcm,
    replay_transform,
)
from .pauli import PauliPoly


class CatastrophicCode(ValueError):
    """The conditioning polynomial is not a monomial, so no shift-invariant Z-bar exists."""

    def __init__(self, conditioning: Poly):
        super().__init__(f"catastrophic code: conditioning polynomial {conditioning} is not a monomial")
        self.conditioning = conditioning


class NonDiagonalForm(ValueError):
    pass


@dataclass(frozen=True)
class StandardForm:
    n: int
    k: int
    r: int
    x: PolyMatrix  # (n-k) x n, columns in permuted order
    z: PolyMatrix
    col_perm: tuple[int, ...]  # permuted column c is physical column col_perm[c]
    row_log: tuple[ElimStep, ...]
    diagonal_ok: bool
    transform: tuple[tuple[Laurent, ...], ...] = field(default=(), repr=False)

    # blocks of the standard form, named as in the usual layout
    def _blk(self, part, rows, cols):
        return part.submatrix(rows, cols)

    @property
    def s(self) -> int:
        return self.n - self.k - self.r

    @property
    def A(self):
        return self._blk(self.x, range(0, self.r), range(0, self.r))

    @property
    def B(self):
        return self._blk(self.x, range(0, self.r), range(self.r, self.n - self.k))

    @property
    def C(self):
        return self._blk(self.x, range(0, self.r), range(self.n - self.k, self.n))

    @property
    def E(self):
        return self._blk(self.z, range(0, self.r), range(0, self.r))

    @property
    def F(self):
        return self._blk(self.z, range(0, self.r), range(self.r, self.n - self.k))

    @property
    def G(self):
        return self._blk(self.z, range(0, self.r), range(self.n - self.k, self.n))

    @property
    def J(self):
        return self._blk(self.z, range(self.r, self.n - self.k), range(0, self.r))

    @property
    def K(self):
        return self._blk(self.z, range(self.r, self.n - self.k), range(self.r, self.n - self.k))

    @property
    def L(self):
        return self._blk(self.z, range(self.r, self.n - self.k), range(self.n - self.k, self.n))

    def matrix(self) -> PolyMatrix:
        return self.x.hstack(self.z)

    def rows(self) -> list[PauliPoly]:
        """Standard-form rows as operators in physical column order."""
        out = []
        for i in range(self.x.nrows):
            xs, zs = [Poly()] * self.n, [Poly()] * self.n
            for c in range(self.n):
                xs[self.col_perm[c]] = self.x[i, c]
                zs[self.col_perm[c]] = self.z[i, c]
            out.append(PauliPoly(self.n, tuple(xs), tuple(zs)))
        return out


def standard_form(c: CodeSpec) -> StandardForm:
    rep = validate(c)
    if not rep.valid:
        raise InvalidCode(rep)
    nk = c.n - c.k
    X = PolyMatrix.from_rows([g.x for g in c.gens], c.n) if nk else PolyMatrix.zeros(0, c.n)
    Z = PolyMatrix.from_rows([g.z for g in c.gens], c.n) if nk else PolyMatrix.zeros(0, c.n)
    first: Elimination = eliminate(X, (0, c.n), linked=Z)
    r = first.rank
    second: Elimination = eliminate(first.linked, (r, c.n), row_start=r, linked=first.reduced)
    perm = [first.col_perm[p] for p in second.col_perm]
    xs, zs = second.linked, second.reduced
    log = first.log + second.log
    ok = first.diagonal and second.diagonal and second.rank == nk - r
    if ok:
        ok = xs.submatrix(range(0, r), range(0, r)).is_diagonal() and zs.submatrix(
            range(r, nk), range(r, nk)
        ).is_diagonal()
    return StandardForm(
        n=c.n,
        k=c.k,
        r=r,
        x=xs,
        z=zs,
        col_perm=tuple(perm),
        row_log=log,
        diagonal_ok=ok,
        transform=tuple(tuple(row) for row in replay_transform(log, nk)),
    )


# ---------------------------------------------------------------------------
# rational functions D^shift * num / den, den with constant term 1


@dataclass(frozen=True)
class _Frac:
    num: Poly
    den: Poly
    shift: int = 0

    @classmethod
    def make(cls, num: Laurent, den: Laurent) -> "_Frac":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(Poly(), Poly(1), 0)
        g = poly_gcd(num.body, den.body)
        return cls(poly_divmod(num.body, g)[0], poly_divmod(den.body, g)[0], num.shift - den.shift)

    @classmethod
    def of(cls, x: Laurent) -> "_Frac":
        return cls.make(x, Laurent.monomial(0))

    def __add__(self, o: "_Frac") -> "_Frac":
        if not self.num.bits:
            return o
        if not o.num.bits:
            return self
        a = Laurent(self.num * o.den, self.shift)
        b = Laurent(o.num * self.den, o.shift)
        return _Frac.make(a + b, Laurent(self.den * o.den))

    def __mul__(self, o: "_Frac") -> "_Frac":
        return _Frac.make(
            Laurent(self.num * o.num, self.shift + o.shift), Laurent(self.den * o.den)
        )

    def inverse(self) -> "_Frac":
        return _Frac.make(Laurent(self.den, -self.shift), Laurent(self.num))

    def times_poly(self, p: Poly) -> Laurent:
        q, rem = poly_divmod(self.num * p, self.den)
        if rem.bits:
            raise ArithmeticError("denominator does not divide the multiplier")
        return Laurent(q, self.shift)


def _inv_var(p: Poly) -> _Frac:
    return _Frac.of(Laurent(p).inv_var())


@dataclass(frozen=True)
class LogicalOps:
    n: int
    k: int
    col_perm: tuple[int, ...]
    xbar: PolyMatrix  # k x 2n, permuted column order (X part | Z part)
    zbar: PolyMatrix | None
    conditioning: Poly
    lambda_deg: int
    control_degree: tuple[int, ...] = ()  # degree of the X factor marking each info qubit

    def _ops(self, m: PolyMatrix) -> list[PauliPoly]:
        out = []
        for i in range(m.nrows):
            xs, zs = [Poly()] * self.n, [Poly()] * self.n
            for c in range(self.n):
                xs[self.col_perm[c]] = m[i, c]
                zs[self.col_perm[c]] = m[i, self.n + c]
            out.append(PauliPoly(self.n, tuple(xs), tuple(zs)))
        return out

    def xbar_ops(self) -> list[PauliPoly]:
        return self._ops(self.xbar)

    def zbar_ops(self) -> list[PauliPoly] | None:
        return self._ops(self.zbar) if self.zbar is not None else None

    def info_columns(self) -> list[int]:
        """Physical column of the X factor that marks logical qubit ``r``."""
        return [self.col_perm[self.n - self.k + r] for r in range(self.k)]

    @property
    def catastrophic(self) -> bool:
        return not is_monomial(self.conditioning)


def _require_diagonal(sf: StandardForm):
    if not sf.diagonal_ok:
        raise NonDiagonalForm("standard form is not diagonal; logical operators unavailable")


def _xbar_rationals(sf: StandardForm):
    """Entries of U2 and V1 with the conditioning polynomial set to 1."""
    r, s, k = sf.r, sf.s, sf.k
    A, F, G, K, L = sf.A, sf.F, sf.G, sf.K, sf.L
    kinv = [_inv_var(K[j, j]).inverse() for j in range(s)]
    ainv = [_inv_var(A[i, i]).inverse() for i in range(r)]
    u2 = [[_inv_var(L[j, l]) * kinv[j] for j in range(s)] for l in range(k)]
    v1 = []
    for l in range(k):
        row = []
        for i in range(r):
            acc = _inv_var(G[i, l])
            for j in range(s):
                acc = acc + u2[l][j] * _inv_var(F[i, j])
            row.append(acc * ainv[i])
        v1.append(row)
    return u2, v1


def derive_xbar(sf: StandardForm) -> tuple[list[list[Laurent]], Poly]:
    """Rows of X-bar as Laurent entries ``(U1 U2 U3 | V1 V2 V3)`` and the conditioning polynomial."""
    _require_diagonal(sf)
    k, r, s = sf.k, sf.r, sf.s
    u2, v1 = _xbar_rationals(sf)
    lam = Poly(1)
    for fr in [f for row in u2 for f in row] + [f for row in v1 for f in row]:
        if fr.num.bits:
            lam = poly_lcm(lam, fr.den)
    rows = []
    for l in range(k):
        xs = [Laurent()] * r + [f.times_poly(lam) for f in u2[l]]
        xs += [Laurent(lam) if j == l else Laurent() for j in range(k)]
        zs = [f.times_poly(lam) for f in v1[l]] + [Laurent()] * (s + k)
        rows.append(xs + zs)
    return rows, lam


def derive_zbar(sf: StandardForm, lam: Poly) -> list[list[Laurent]]:
    _require_diagonal(sf)
    if not is_monomial(lam):
        raise CatastrophicCode(lam)
    n, k, r, s = sf.n, sf.k, sf.r, sf.s
    C, A = sf.C, sf.A
    t = lam.degree
    # 1 / Lambda(1/D) = D^t for a monomial
    rows = []
    for l in range(k):
        zs = []
        for i in range(r):
            a = A[i, i]
            if not is_monomial(a):
                raise CatastrophicCode(lam)
            zs.append(Laurent(C[i, l]).inv_var() * Laurent.monomial(a.degree + t))
        zs += [Laurent()] * s
        zs += [Laurent.monomial(t) if j == l else Laurent() for j in range(k)]
        rows.append([Laurent()] * n + zs)
    return rows


def logical_ops(sf: StandardForm) -> LogicalOps:
    """X-bar and (when the code is non-catastrophic) Z-bar, jointly shifted to plain polynomials."""
    xrows, lam = derive_xbar(sf)
    try:
        zrows = derive_zbar(sf, lam)
    except CatastrophicCode:
        zrows = None
    every = [e for row in xrows for e in row] + [e for row in (zrows or []) for e in row]
    flat = laurent_normalize_group(every)
    w = 2 * sf.n
    xm = PolyMatrix.from_rows([flat[i * w:(i + 1) * w] for i in range(sf.k)], w)
    zm = None
    if zrows is not None:
        off = sf.k * w
        zm = PolyMatrix.from_rows([flat[off + i * w: off + (i + 1) * w] for i in range(sf.k)], w)
    degs = [xm.max_degree()] + ([zm.max_degree()] if zm is not None else [])
    lam_deg = max([d for d in degs if d != float("-inf")], default=0)
    nk = sf.n - sf.k
    ctrl = tuple(xm[l, nk + l].degree for l in range(sf.k))
    return LogicalOps(
        n=sf.n,
        k=sf.k,
        col_perm=sf.col_perm,
        xbar=xm,
        zbar=zm,
        conditioning=lam,
        lambda_deg=int(lam_deg),
        control_degree=ctrl,
    )


def is_catastrophic(c: CodeSpec) -> bool:
    sf = standard_form(c)
    _require_diagonal(sf)
    _, lam = derive_xbar(sf)
    return not is_monomial(lam)


def count_logicals(c: CodeSpec, p: int, lambda_deg: int) -> dict[str, int]:
    """Logical qubits for ``p`` generator blocks: shift-invariant ones and sacrificed boundary ones."""
    if p <= lambda_deg:
        raise ValueError(f"need more generator blocks than lambda ({p} <= {lambda_deg})")
    mb = c.overlap_blocks
    return {
        "protected": c.k * (p + mb - lambda_deg),
        "sacrificed": mb * (c.n - c.k) + lambda_deg * c.k,
    }

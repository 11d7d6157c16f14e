import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qconv.code import CodeSpec, parse_code
from qconv.gf2poly import Laurent, Poly, PolyMatrix, parse_poly
from qconv.linalg import Span, gf2_rank
from qconv.pauli import PauliPoly, commute_at, delay, expand, from_string, gen_commute, multiply
from qconv.structure import (
    CatastrophicCode,
    count_logicals,
    derive_xbar,
    derive_zbar,
    is_catastrophic,
    logical_ops,
    standard_form,
)

from conftest import QCC5_GENS

M_STD = """D 0 0 0 1 0 D 0 1 0
0 1 0 0 1 1+D 1 1 1 1
0 0 1 0 1 D 1 1 0 1
0 0 0 1 1 D 0 1 0 0"""

M_INPUT = """0 1 1 0 0 1 0 0 1 0
0 0 1 1 0 0 1 0 0 1
0 0 0 1 1 D 0 1 0 0
D 0 0 0 1 0 D 0 1 0"""


def window_rows(ops, blocks, n, m):
    N = n * blocks + m
    rows = []
    for p in ops:
        for j in range(blocks):
            try:
                rows.append(expand(p, j, N))
            except ValueError:
                pass
    return np.array(rows, dtype=np.uint8)


def same_group(a_ops, b_ops, n, m, blocks=10):
    """Each op of one family, delayed into the middle of a window, lies in the span of the other's delays."""
    N = n * blocks + m
    span_a, span_b = Span(window_rows(a_ops, blocks, n, m)), Span(window_rows(b_ops, blocks, n, m))
    mid = range(blocks // 2 - 1, blocks // 2 + 1)
    return all(expand(p, j, N) in span_b for p in a_ops for j in mid) and all(
        expand(p, j, N) in span_a for p in b_ops for j in mid
    )


def check_logical_contract(c, lo):
    rows = standard_form(c).rows()
    xs, zs = lo.xbar_ops(), lo.zbar_ops() or []
    for op in xs + zs:
        for g in list(c.gens) + rows:
            assert gen_commute(op, g)
    for a, b in itertools.combinations(xs, 2):
        assert gen_commute(a, b)
    for a, b in itertools.combinations(zs, 2):
        assert gen_commute(a, b)
    span = lo.lambda_deg + 2
    for (i, x), (l, z) in itertools.product(enumerate(xs), enumerate(zs)):
        for r, s in itertools.product(range(span + 1), repeat=2):
            expect = not (i == l and r == s)
            assert commute_at(delay(x, r), delay(z, s)) == expect


def test_qcc5_polynomial_matrix(qcc5):
    X = PolyMatrix.from_rows([g.x for g in qcc5.gens], 5)
    Z = PolyMatrix.from_rows([g.z for g in qcc5.gens], 5)
    assert X.hstack(Z) == PolyMatrix.parse(M_INPUT)


def test_qcc5_standard_form_matches_worked_example(qcc5_sf):
    sf = qcc5_sf
    assert sf.r == 4 and sf.s == 0 and sf.diagonal_ok
    assert sf.col_perm == (0, 1, 2, 3, 4)
    assert sf.matrix() == PolyMatrix.parse(M_STD)
    assert [str(sf.A[i, i]) for i in range(4)] == ["D", "1", "1", "1"]
    assert sf.A.is_diagonal()
    assert [str(sf.C[i, 0]) for i in range(4)] == ["1", "1", "1", "1"]


def test_qcc5_standard_form_same_group(qcc5, qcc5_sf):
    assert same_group(list(qcc5.gens), qcc5_sf.rows(), 5, 2)


def test_standard_form_is_fixed_point(qcc5_sf):
    c = CodeSpec(5, 1, 2, tuple(qcc5_sf.rows()))
    sf = standard_form(c)
    assert sf.col_perm == tuple(range(5))
    assert sf.matrix() == qcc5_sf.matrix()


def test_z_only_single_generator():
    sf = standard_form(parse_code("2 1 0\nZZ\n"))
    assert sf.r == 0 and sf.s == 1
    assert sf.K == PolyMatrix.parse("1")
    assert sf.L == PolyMatrix.parse("1")
    assert sf.J.shape == (1, 0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), min_size=4, max_size=4)
       .filter(lambda m: gf2_rank(m) == 4))
def test_recombined_generators_give_same_group(mix):
    base = [from_string(s, 5) for s in QCC5_GENS]
    gens = []
    for row in mix:
        acc = from_string("I", 5)
        for b, g in zip(row, base):
            if b:
                acc = multiply(acc, g)
        gens.append(acc)
    c = CodeSpec(5, 1, 2, tuple(gens))
    sf = standard_form(c)
    assert same_group(base, sf.rows(), 5, 2)
    lo = logical_ops(sf)
    check_logical_contract(c, lo)


def test_qcc5_logicals(qcc5_lo):
    lo = qcc5_lo
    assert str(lo.xbar_ops()[0]) == "(0,0,0,0,1|0,1,1,0,0)"
    assert str(lo.zbar_ops()[0]) == "(0,0,0,0,0|D,1,1,1,1)"
    assert lo.conditioning == Poly(1)
    assert lo.lambda_deg == 1
    assert not lo.catastrophic


def test_qcc5_logical_contract(qcc5, qcc5_lo):
    check_logical_contract(qcc5, qcc5_lo)


def test_qcc5_logicals_independent_of_stabilizers(qcc5, qcc5_lo):
    lam, mb = qcc5_lo.lambda_deg, qcc5.overlap_blocks
    blocks = 2 * (lam + mb + 1)
    stab = window_rows(qcc5.gens, blocks, 5, 2)
    logi = window_rows(qcc5_lo.xbar_ops() + qcc5_lo.zbar_ops(), blocks, 5, 2)
    assert gf2_rank(np.vstack([stab, logi])) == gf2_rank(stab) + len(logi)


def test_x_only_code_has_trivial_logicals():
    c = parse_code("2 1 0\nXI\n")
    sf = standard_form(c)
    xrows, lam = derive_xbar(sf)
    assert lam == Poly(1)
    assert [str(e) for e in xrows[0]] == ["0", "1", "0", "0"]
    zrows = derive_zbar(sf, lam)
    assert [str(e) for e in zrows[0]] == ["0", "0", "0", "1"]
    check_logical_contract(c, logical_ops(sf))


def test_synthetic_catastrophic(cat2):
    sf = standard_form(cat2)
    assert sf.r == 0 and sf.K == PolyMatrix.parse("1+D") and sf.L == PolyMatrix.parse("1")
    xrows, lam = derive_xbar(sf)
    assert lam == parse_poly("1+D")
    # U2 = L(1/D) K(1/D)^-1 Lambda = D/(1+D) * (1+D) = D
    assert xrows[0][0] == Laurent(parse_poly("D"))
    assert xrows[0][1] == Laurent(parse_poly("1+D"))
    x = PauliPoly.from_polys(["D", "1+D"], ["0", "0"])
    assert gen_commute(x, cat2.gens[0])
    assert not gen_commute(PauliPoly.from_polys(["1", "1+D"], ["0", "0"]), cat2.gens[0])
    with pytest.raises(CatastrophicCode):
        derive_zbar(sf, lam)
    assert is_catastrophic(cat2)


def test_catastrophic_flags(qcc5):
    assert not is_catastrophic(qcc5)
    assert not is_catastrophic(parse_code("2 1 0\nZI\n"))


def test_count_logicals(qcc5):
    assert count_logicals(qcc5, 10, 1) == {"protected": 10, "sacrificed": 5}
    assert count_logicals(qcc5, 2, 1)["protected"] == 2
    assert count_logicals(parse_code("2 1 0\nZZ\n"), 3, 0)["sacrificed"] == 0
    with pytest.raises(ValueError):
        count_logicals(qcc5, 1, 1)

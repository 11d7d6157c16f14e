import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qconv.gf2poly import Poly, parse_poly
from qconv.pauli import (
    PauliPoly,
    PauliString,
    SupportOverflow,
    WidthMismatch,
    apply_poly,
    commute_at,
    delay,
    expand,
    from_string,
    gen_commute,
    multiply,
    symplectic_product,
    to_string,
)

from conftest import QCC5_GENS

MATS = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def dense_matrix(letters):
    return reduce(np.kron, [MATS[c] for c in letters])


def pauli_polys(width, max_deg):
    entry = st.integers(0, (1 << (max_deg + 1)) - 1).map(Poly)
    return st.tuples(st.lists(entry, min_size=width, max_size=width),
                     st.lists(entry, min_size=width, max_size=width)).map(
        lambda t: PauliPoly(width, tuple(t[0]), tuple(t[1])))


def test_from_string_examples():
    p = from_string("ZXXZIII", 5)
    assert p == PauliPoly.from_polys(["0", "1", "1", "0", "0"], ["1", "0", "0", "1", "0"])
    p = from_string("IIIZXXZ", 5)
    assert p == PauliPoly.from_polys(["D", "0", "0", "0", "1"], ["0", "D", "0", "1", "0"])
    assert from_string("IIIII", 5).is_identity()


def test_to_string_examples():
    assert to_string(PauliPoly.from_polys(["0", "1", "1", "0", "0"], ["1", "0", "0", "1", "0"])).ops == "ZXXZ"
    assert to_string(PauliPoly.identity(5)).ops == ""
    s = to_string(PauliPoly.from_polys(["D", "0", "0", "0", "1"], ["0", "D", "0", "1", "0"]))
    assert (s.ops, s.offset) == ("ZXXZ", 3)
    assert s.dense(7) == "IIIZXXZ"


def test_pauli_string_rejects_bad_letters():
    with pytest.raises(ValueError):
        PauliString("XQZ")
    with pytest.raises(SupportOverflow):
        PauliString("XX", 3).dense(4)


def test_delay():
    m01 = from_string(QCC5_GENS[0], 5)
    assert delay(m01, 1) == from_string("IIIII" + QCC5_GENS[0], 5)
    assert delay(m01, 0) == m01
    assert delay(delay(m01, 2), 3) == delay(m01, 5)


def test_multiply():
    m01 = from_string(QCC5_GENS[0], 5)
    assert multiply(m01, m01).is_identity()
    assert multiply(m01, PauliPoly.identity(5)) == m01
    prod = multiply(m01, delay(m01, 1))
    assert prod.x == tuple(parse_poly(t) for t in ["0", "1+D", "1+D", "0", "0"])
    assert prod.z == tuple(parse_poly(t) for t in ["1+D", "0", "0", "1+D", "0"])
    with pytest.raises(WidthMismatch):
        multiply(m01, PauliPoly.identity(4))


def test_apply_poly():
    a = from_string("ZXIII", 5)
    assert apply_poly(Poly(1), a) == a
    assert apply_poly(parse_poly("1+D"), a) == multiply(a, delay(a, 1))
    assert apply_poly(parse_poly("D^2"), a) == delay(a, 2)


def test_commute_at_examples():
    g = [from_string(s, 5) for s in QCC5_GENS]
    assert commute_at(g[0], g[1])
    assert not commute_at(from_string("X", 1), from_string("Z", 1))
    assert commute_at(g[2], PauliPoly.identity(5))


def test_gen_commute_examples(qcc5_lo):
    g = [from_string(s, 5) for s in QCC5_GENS]
    assert gen_commute(g[0], g[3])
    assert not gen_commute(qcc5_lo.xbar_ops()[0], qcc5_lo.zbar_ops()[0])


def test_expand_examples():
    m01 = from_string(QCC5_GENS[0], 5)
    v = expand(m01, 0, 7)
    assert "".join(map(str, v[:7])) == "0110000"
    assert "".join(map(str, v[7:])) == "1001000"
    assert not expand(PauliPoly.identity(5), 3, 20).any()
    w = expand(m01, 1, 12)
    assert np.array_equal(w[5:12], v[:7]) and np.array_equal(w[12 + 5:], v[7:])
    with pytest.raises(SupportOverflow):
        expand(m01, 1, 8)


@settings(max_examples=1000)
@given(st.integers(1, 6).flatmap(lambda w: pauli_polys(w, 3)))
def test_string_round_trip(p):
    assert from_string(to_string(p), p.n) == p


@settings(max_examples=1000)
@given(st.integers(1, 3).flatmap(lambda w: st.tuples(pauli_polys(w, 2), pauli_polys(w, 2))))
def test_gen_commute_matches_shift_enumeration(pair):
    p, q = pair
    N = p.n * 9
    ok = all(
        symplectic_product(expand(p, r, N), expand(q, s, N)) == 0
        for r, s in itertools.product(range(5), repeat=2)
    )
    assert gen_commute(p, q) == ok


@settings(max_examples=300)
@given(st.integers(1, 3).flatmap(lambda w: st.tuples(pauli_polys(w, 1), pauli_polys(w, 1))))
def test_multiply_is_symmetric_and_involutive(pair):
    p, q = pair
    assert multiply(p, q) == multiply(q, p)
    assert multiply(p, p).is_identity()


@settings(max_examples=300)
@given(st.text(alphabet="IXYZ", min_size=1, max_size=4), st.data())
def test_commute_at_matches_dense_matrices(a, data):
    b = data.draw(st.text(alphabet="IXYZ", min_size=len(a), max_size=len(a)))
    A, B = dense_matrix(a), dense_matrix(b)
    commutes = np.allclose(A @ B, B @ A)
    assert commute_at(from_string(a, 1), from_string(b, 1)) == commutes
    assert commute_at(from_string(a, len(a)), from_string(b, len(a))) == commutes

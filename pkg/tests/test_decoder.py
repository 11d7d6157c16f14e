import numpy as np
import pytest

from qconv.channel import (
    ChannelModel,
    SyndromeStream,
    depolarizing,
    extract_syndromes,
    log_likelihood,
    make_rng,
    sample_error,
    trial_seed,
)
from qconv.code import parse_code
from qconv.decoder import (
    InfeasibleSyndrome,
    Trellis,
    brute_force_ml,
    classify_residual,
    prefix_oracle,
    viterbi_decode,
)
from qconv.pauli import PauliString, expand
from qconv.structure import logical_ops, standard_form


def stream(bits):
    return SyndromeStream.from_bits(np.asarray(bits, dtype=np.uint8))


def all_streams(q, r=4):
    for v in range(2 ** (q * r)):
        bits = [(v >> (q * r - 1 - i)) & 1 for i in range(q * r)]
        yield v, stream(np.reshape(bits, (q, r)))


@pytest.fixture(scope="module")
def trellis01(qcc5):
    return Trellis(qcc5, depolarizing(0.1))


def test_trivial_syndrome_gives_identity(qcc5):
    ch = depolarizing(0.05)
    res = viterbi_decode(qcc5, ch, stream(np.zeros((3, 4))))
    assert res.estimate.weight == 0
    assert res.loglik == pytest.approx(17 * np.log(0.95))
    assert brute_force_ml(qcc5, ch, stream(np.zeros((2, 4)))).estimate.weight == 0


def test_single_x_matches_oracle(qcc5, trellis01):
    ch = depolarizing(0.1)
    s = extract_syndromes(qcc5, "X" + "I" * 11, 2)
    res = viterbi_decode(qcc5, ch, s, trellis=trellis01)
    ref = brute_force_ml(qcc5, ch, s)
    assert res.loglik == ref.loglik
    assert res.estimate == ref.estimate
    assert res.loglik == pytest.approx(log_likelihood(ch, res.estimate, 12))


def test_random_errors_match_oracle(qcc5, trellis01):
    ch = depolarizing(0.1)
    for i in range(40):
        e = sample_error(ch, 12, rng=make_rng(trial_seed(99, i)))
        s = extract_syndromes(qcc5, e, 2)
        res = viterbi_decode(qcc5, ch, s, trellis=trellis01)
        ref = brute_force_ml(qcc5, ch, s)
        assert abs(res.loglik - ref.loglik) <= 1e-9
        assert extract_syndromes(qcc5, res.estimate, 2) == s


def test_asymmetric_channel_matches_oracle(qcc5):
    ch = ChannelModel.pauli(0.08, 0.01, 0.03)
    T = Trellis(qcc5, ch)
    for i in range(20):
        e = sample_error(ch, 12, rng=make_rng(trial_seed(5, i)))
        s = extract_syndromes(qcc5, e, 2)
        res = viterbi_decode(qcc5, ch, s, trellis=T)
        ref = brute_force_ml(qcc5, ch, s)
        assert res.loglik == ref.loglik and res.estimate == ref.estimate


def test_coset_and_exhaustive_oracles_agree(qcc5):
    ch = depolarizing(0.1)
    for _, s in all_streams(1):
        a = brute_force_ml(qcc5, ch, s, mode="coset")
        b = brute_force_ml(qcc5, ch, s, mode="exhaustive")
        assert a.loglik == b.loglik and a.estimate == b.estimate


def test_single_flip_gives_minimum_weight(qcc5):
    s = stream([[1, 0, 0, 0]])
    res = brute_force_ml(qcc5, depolarizing(0.05), s, mode="exhaustive")
    assert res.estimate.weight == 1
    assert extract_syndromes(qcc5, res.estimate, 1) == s


def test_oracle_guards(qcc5):
    with pytest.raises(ValueError):
        brute_force_ml(qcc5, depolarizing(0.1), stream(np.zeros((3, 4))), mode="exhaustive")
    with pytest.raises(ValueError):
        brute_force_ml(qcc5, depolarizing(0.1), stream(np.zeros((1, 4))), mode="other")


def test_tables_match_direct_enumeration(trellis01):
    T = trellis01
    for sigma in range(16):
        direct0 = T.direct_first(sigma)
        assert np.array_equal(direct0, T.first_window[sigma])
        for state in range(T.S):
            direct = T.direct_step(state, sigma)
            table = {e2: int(w) for e2, w in enumerate(T.best_window[state, sigma]) if w >= 0}
            assert direct == table


def test_cached_and_direct_paths_agree(qcc5, trellis01):
    ch = depolarizing(0.1)
    for i in range(10):
        e = sample_error(ch, 22, rng=make_rng(trial_seed(3, i)))
        s = extract_syndromes(qcc5, e, 4)
        a = viterbi_decode(qcc5, ch, s, trellis=trellis01)
        b = viterbi_decode(qcc5, ch, s, trellis=trellis01, use_cache=False)
        assert a.estimate == b.estimate and a.loglik == b.loglik


def test_survivors_are_prefix_optimal_q1(qcc5, trellis01):
    ch = depolarizing(0.1)
    best = prefix_oracle(qcc5, ch, 1)
    for v, s in all_streams(1):
        res = viterbi_decode(qcc5, ch, s, trellis=trellis01, trace=True)
        assert np.array_equal(res.survivors[0], best[v])


def test_random_tie_break(qcc5, trellis01):
    ch = depolarizing(0.1)
    s = extract_syndromes(qcc5, "X" + "I" * 11, 2)
    ref = viterbi_decode(qcc5, ch, s, trellis=trellis01)
    seen = set()
    for seed in range(20):
        r = viterbi_decode(qcc5, ch, s, trellis=trellis01, tie_break="random", seed=seed)
        assert r.loglik == ref.loglik
        assert extract_syndromes(qcc5, r.estimate, 2) == s
        seen.add(r.estimate.dense(12))
    assert len(seen) > 1
    a = viterbi_decode(qcc5, ch, s, trellis=trellis01, tie_break="random", seed=4)
    b = viterbi_decode(qcc5, ch, s, trellis=trellis01, tie_break="random", seed=4)
    assert a.estimate == b.estimate
    with pytest.raises(ValueError):
        viterbi_decode(qcc5, ch, s, tie_break="coin")


def test_traceback(qcc5, trellis01):
    ch = depolarizing(0.1)
    e = sample_error(ch, 42, seed=8)
    s = extract_syndromes(qcc5, e, 8)
    full = viterbi_decode(qcc5, ch, s, trellis=trellis01)
    for d in (0, 1, 2, 8, 20):
        res = viterbi_decode(qcc5, ch, s, trellis=trellis01, traceback_depth=d)
        assert res.estimate == full.estimate
        assert len(res.per_block_converged) == max(0, 8 - d)
        if d >= 8:
            assert res.truncation_agrees
        if all(res.per_block_converged):
            assert res.truncation_agrees
    with pytest.raises(ValueError):
        viterbi_decode(qcc5, ch, s, traceback_depth=-1)


def test_terminated_mode(qcc5, trellis01):
    ch = depolarizing(0.1)
    for i in range(10):
        e = sample_error(ch, 20, rng=make_rng(trial_seed(1, i))).dense(20) + "II"
        s = extract_syndromes(qcc5, e, 4)
        res = viterbi_decode(qcc5, ch, s, trellis=trellis01, terminated=True)
        assert res.estimate.dense(22).endswith("II")
        assert extract_syndromes(qcc5, res.estimate, 4) == s
        if i < 4:
            s2 = extract_syndromes(qcc5, e[:12 - 2] + "II", 2)
            a = viterbi_decode(qcc5, ch, s2, trellis=trellis01, terminated=True)
            b = brute_force_ml(qcc5, ch, s2, terminated=True)
            assert a.loglik == b.loglik and a.estimate == b.estimate


def test_infeasible_syndrome():
    c = parse_code("1 0 0\nZ\n")
    ch = ChannelModel.pauli(0.0, 0.0, 0.2)  # Z errors only: they never flip a Z check
    with pytest.raises(InfeasibleSyndrome):
        viterbi_decode(c, ch, stream([[0], [1]]))
    with pytest.raises(InfeasibleSyndrome):
        brute_force_ml(c, ch, stream([[0], [1]]))


def test_zero_probability_letters_never_used(qcc5):
    ch = ChannelModel.pauli(0.1, 0.0, 0.0)
    e = sample_error(ch, 17, seed=3)
    s = extract_syndromes(qcc5, e, 3)
    res = viterbi_decode(qcc5, ch, s)
    assert set(res.estimate.ops) <= {"I", "X"}
    assert np.isfinite(res.loglik)


def test_wrong_syndrome_width(qcc5):
    with pytest.raises(ValueError):
        viterbi_decode(qcc5, depolarizing(0.1), stream(np.zeros((2, 3))))


def test_classify_residual(qcc5, qcc5_lo):
    N = 12
    assert classify_residual("I" * N, "I" * N, qcc5, qcc5_lo, 2).success
    e = sample_error(depolarizing(0.2), N, seed=1)
    assert classify_residual(e, e, qcc5, qcc5_lo, 2).success
    assert classify_residual("ZXXZIII" + "I" * 5, "I" * N, qcc5, qcc5_lo, 2).success
    xbar = PauliString.from_symplectic(expand(qcc5_lo.xbar_ops()[0], 1, N))
    res = classify_residual(xbar, "I" * N, qcc5, qcc5_lo, 2)
    assert not res.success and res.violated == [(0, 0, "Z")]
    assert res.label == "LogicalError"
    with pytest.raises(ValueError):
        classify_residual("X" + "I" * 11, "I" * N, qcc5, qcc5_lo, 2)


def test_classify_without_zbar_warns(cat2):
    lo = logical_ops(standard_form(cat2))
    with pytest.warns(UserWarning):
        res = classify_residual("I" * 5, "I" * 5, cat2, lo, 2)
    assert res.success and res.warning

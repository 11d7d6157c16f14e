import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from qconv.channel import depolarizing, extract_syndromes, sample_error
from qconv.estimators import SyndromeExtractor, ViterbiDecoder, codes_to_strings, strings_to_codes


def errors(n, N, seed, p=0.05):
    return strings_to_codes([sample_error(depolarizing(p), N, seed=[seed, i]).dense(N) for i in range(n)])


def test_extractor_matches_function(qcc5):
    X = errors(10, 17, 1, p=0.2)
    S = SyndromeExtractor("qcc5", blocks=3).fit().transform(X)
    assert S.shape == (10, 12)
    for row, e in zip(S, codes_to_strings(X)):
        assert np.array_equal(row.reshape(3, 4), extract_syndromes(qcc5, e, 3).bits())


def test_extractor_checks_width():
    with pytest.raises(ValueError):
        SyndromeExtractor(blocks=2).fit().transform(np.zeros((2, 11), dtype=int))
    with pytest.raises(NotFittedError):
        SyndromeExtractor().transform(np.zeros((1, 12), dtype=int))


def test_decoder_predict_reproduces_syndromes():
    X = errors(20, 22, 2, p=0.1)
    S = SyndromeExtractor(blocks=4).fit_transform(X)
    dec = ViterbiDecoder(p=0.1).fit()
    est = dec.predict(S)
    assert est.shape == X.shape
    assert np.array_equal(SyndromeExtractor(blocks=4).fit_transform(est), S)
    assert 0.0 <= dec.score(S, X) <= 1.0


def test_decoder_params_and_clone():
    dec = ViterbiDecoder(p=0.02, traceback_depth=2)
    assert dec.get_params()["traceback_depth"] == 2
    twin = clone(dec).set_params(p=0.03)
    assert twin.p == 0.03 and dec.p == 0.02


def test_zero_noise_scores_perfectly():
    X = np.zeros((5, 12), dtype=int)
    S = SyndromeExtractor(blocks=2).fit_transform(X)
    assert ViterbiDecoder(p=0.05).fit().score(S, X) == 1.0


def test_pipeline_runs():
    X = errors(4, 12, 3)
    pipe = make_pipeline(SyndromeExtractor(blocks=2), ViterbiDecoder(p=0.05))
    pipe.fit(X)
    assert pipe.predict(X).shape == (4, 12)


def test_bad_letter_codes():
    with pytest.raises(ValueError):
        codes_to_strings(np.array([[0, 4]]))

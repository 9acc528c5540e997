import itertools

import pytest

from benchmark import fit_summary, linear_fit_r2, measure_scalability
from extract.vocabulary import Vocabulary

PREFIXES = ['', 'un', 're', 'pre', 'dis', 'over', 'mis', 'non']
SUFFIXES = ['', 's', 'ed', 'ing', 'er', 'ness', 'able', 'ly', 'ment', 'ful']


def synthetic_vocabulary(size):
    """Palavras prefixo + raiz + sufixo com raízes sintéticas distintas"""
    consonants, vowels = 'bcdfglmnprstv', 'aeiou'
    syllables = [c + v for c, v in itertools.product(consonants, vowels)]
    roots = (a + b + c for a, b, c in itertools.product(syllables, repeat=3))
    words = []
    for root in roots:
        for p, s in zip(PREFIXES, SUFFIXES[:len(PREFIXES)]):
            words.append(p + root + s)
        if len(words) >= size:
            break
    return Vocabulary.from_counts((w, 1) for w in words[:size])


class TestLinearFit:

    def test_exact_line(self):
        slope, intercept, r2 = linear_fit_r2([1, 2, 3, 4], [3, 5, 7, 9])
        assert slope == pytest.approx(2.0)
        assert intercept == pytest.approx(1.0)
        assert r2 == pytest.approx(1.0)

    def test_noisy_points(self):
        _, _, r2 = linear_fit_r2([1, 2, 3, 4], [1, 3, 2, 4])
        assert 0.0 < r2 < 1.0

    def test_constant_response(self):
        _, _, r2 = linear_fit_r2([1, 2, 3], [5, 5, 5])
        assert r2 == 1.0

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            linear_fit_r2([1], [1])


class TestScalability:

    def test_measurements(self, config):
        vocabulary = synthetic_vocabulary(400)
        timings = measure_scalability(vocabulary, [100, 200], config)
        assert list(timings.columns) == ['size', 'mine_seconds', 'segment_seconds']
        assert list(timings['size']) == [100, 200]
        assert (timings[['mine_seconds', 'segment_seconds']] > 0).all().all()
        summary = fit_summary(timings)
        assert list(summary['phase']) == ['mine', 'segment']

    @pytest.mark.slow
    def test_time_grows_linearly(self, config):
        vocabulary = synthetic_vocabulary(80_000)
        timings = measure_scalability(vocabulary, [10_000, 20_000, 40_000, 80_000], config, repeats=3)
        for _, fit in fit_summary(timings).iterrows():
            assert fit['r2'] >= 0.98, fit['phase']

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from embed.vectors import WordVectors
from evaluation.evaluator import (
    MACRO,
    AnalogyEvaluator,
    AnalogyQuad,
    EvaluationError,
    GoldSegmentation,
    SegmentationEvaluator,
    SimilarityEvaluator,
    SimilarityPair,
    analogy_eval,
    cosine,
    forest_morphemes,
    rank_correlation,
    seg_prf,
    solve_analogy,
    spearman_eval,
)
from transform.candidates import MorphemeVocab
from transform.pipeline import segment_recursive

morph_lists = st.lists(st.sampled_from(['a', 'b', 'ab', 'c', 'abc']), min_size=1, max_size=5)


def angle_vectors(degrees):
    """Vetores unitários no plano; 'x' fica no ângulo zero"""
    words = ['x'] + [f'w{i}' for i in range(len(degrees))]
    rows = [(1.0, 0.0)] + [(math.cos(math.radians(d)), math.sin(math.radians(d))) for d in degrees]
    return WordVectors(words, np.array(rows))


class TestSegmentationPRF:

    def test_perfect(self):
        gold = [GoldSegmentation('vandalism', (('vandal', 'ism'),))]
        result = seg_prf({'vandalism': ['vandal', 'ism']}, gold)
        assert (result.precision, result.recall, result.f1) == (1.0, 1.0, 1.0)
        assert result.words == 1

    def test_partial(self):
        gold = [GoldSegmentation('vandalism', (('vandal', 'ism'),))]
        result = seg_prf({'vandalism': ['van', 'dal', 'ism']}, gold)
        assert result.precision == pytest.approx(1 / 3)
        assert result.recall == pytest.approx(1 / 2)
        assert result.f1 == pytest.approx(0.4)

    def test_best_alternative_is_used(self):
        gold = [GoldSegmentation('walks', (('walks',), ('walk', 's')))]
        result = seg_prf({'walks': ['walk', 's']}, gold)
        assert result.f1 == 1.0

    def test_missing_prediction_counts_as_empty(self):
        gold = [
            GoldSegmentation('walks', (('walk', 's'),)),
            GoldSegmentation('talks', (('talk', 's'),)),
        ]
        result = seg_prf({'walks': ['walk', 's']}, gold)
        assert result.precision == 1.0
        assert result.recall == pytest.approx(0.5)

    def test_macro_average(self):
        gold = [
            GoldSegmentation('walks', (('walk', 's'),)),
            GoldSegmentation('unable', (('un', 'able'),)),
        ]
        pred = {'walks': ['walk', 's'], 'unable': ['un', 'a', 'ble']}
        result = seg_prf(pred, gold, MACRO)
        assert result.precision == pytest.approx((1 + 1 / 3) / 2)
        assert result.recall == pytest.approx((1 + 1 / 2) / 2)

    def test_repeated_morphemes_are_a_multiset(self):
        gold = [GoldSegmentation('haha', (('ha', 'ha'),))]
        assert seg_prf({'haha': ['ha']}, gold).recall == pytest.approx(0.5)

    def test_empty_gold(self):
        with pytest.raises(EvaluationError):
            seg_prf({}, [])

    def test_unknown_average(self):
        gold = [GoldSegmentation('a', (('a',),))]
        with pytest.raises(EvaluationError):
            seg_prf({}, gold, 'median')

    def test_gold_needs_alternatives(self):
        with pytest.raises(EvaluationError):
            GoldSegmentation('walks', ())

    @given(morph_lists, morph_lists)
    def test_swapping_roles_swaps_precision_and_recall(self, pred, gold):
        forward = seg_prf({'w': pred}, [GoldSegmentation('w', (tuple(gold),))])
        backward = seg_prf({'w': gold}, [GoldSegmentation('w', (tuple(pred),))])
        assert forward.precision == pytest.approx(backward.recall)
        assert forward.recall == pytest.approx(backward.precision)

    @given(st.lists(st.tuples(st.sampled_from('abcdef'), morph_lists), min_size=1, max_size=6, unique_by=lambda t: t[0]),
           st.randoms())
    def test_gold_order_does_not_matter(self, entries, rnd):
        gold = [GoldSegmentation(w, (tuple(m),)) for w, m in entries]
        pred = {w: list(reversed(m)) for w, m in entries}
        shuffled = list(gold)
        rnd.shuffle(shuffled)
        assert seg_prf(pred, gold) == seg_prf(pred, shuffled)


class TestSegmentationEvaluator:

    def test_forests_use_leaves_by_default(self, config):
        mv = MorphemeVocab.from_counts({'in': ('P', 9), 'completeness': ('R', 4), 'ness': ('S', 9)})
        forest = segment_recursive('incompleteness', mv)
        assert forest_morphemes(forest) == ['in', 'complete', 'ness']
        assert forest_morphemes(forest, all_granularities=True) == ['in', 'completeness', 'complete', 'ness']

        gold = [GoldSegmentation('incompleteness', (('in', 'complete', 'ness'),))]
        result = SegmentationEvaluator(config).evaluate({'incompleteness': forest}, gold)
        assert result.f1 == 1.0

    def test_all_granularities(self, config):
        mv = MorphemeVocab.from_counts({'in': ('P', 9), 'completeness': ('R', 4), 'ness': ('S', 9)})
        forest = segment_recursive('incompleteness', mv)
        config['eval']['all_granularities'] = True
        gold = [GoldSegmentation('incompleteness', (('in', 'complete', 'ness'),))]
        result = SegmentationEvaluator(config).evaluate({'incompleteness': forest}, gold)
        assert result.precision == pytest.approx(3 / 4)
        assert result.recall == 1.0

    def test_frame(self, config):
        gold = [GoldSegmentation('walks', (('walk', 's'),))]
        frame = SegmentationEvaluator(config).evaluate({'walks': ['walk', 's']}, gold).to_frame()
        assert list(frame['metric']) == ['precision', 'recall', 'f1', 'words']


class TestSpearman:

    def test_hand_computed_with_ties(self):
        human = [1, 2, 2, 4, 5]
        model = [0.1, 0.4, 0.3, 0.9, 0.5]
        # postos médios: [1, 2.5, 2.5, 4, 5] e [1, 3, 2, 5, 4]
        assert rank_correlation(human, model) == pytest.approx(8.5 / math.sqrt(95), abs=1e-12)

    def test_invariant_to_monotone_transform(self):
        human = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6]
        model = [0.2, -0.4, 0.5, 0.1, 0.9, -0.3]
        squashed = [math.exp(3 * v) for v in model]
        assert rank_correlation(human, model) == pytest.approx(rank_correlation(human, squashed))

    def test_perfect_and_reversed(self):
        vectors = angle_vectors([80, 45, 10])
        pairs = [SimilarityPair('x', f'w{i}', s) for i, s in enumerate([1.0, 2.0, 3.0])]
        assert spearman_eval(vectors, pairs).rho == pytest.approx(1.0)
        reverse = [SimilarityPair(p.word_a, p.word_b, -p.human_score) for p in pairs]
        assert spearman_eval(vectors, reverse).rho == pytest.approx(-1.0)

    def test_skip_policy(self):
        vectors = angle_vectors([80, 45, 10])
        pairs = [SimilarityPair('x', f'w{i}', float(i)) for i in range(3)]
        pairs.append(SimilarityPair('x', 'unknown', 5.0))
        report = spearman_eval(vectors, pairs, oov_policy='skip')
        assert (report.scored, report.skipped, report.inferred) == (3, 1, 0)

    def test_infer_policy_counts_inferred(self):
        vectors = angle_vectors([80, 45, 10])
        pairs = [SimilarityPair('x', f'w{i}', float(i)) for i in range(3)]
        pairs.append(SimilarityPair('x', 'unknown', 5.0))
        report = spearman_eval(vectors, pairs, oov_policy='infer')
        assert (report.scored, report.skipped, report.inferred) == (4, 0, 1)

    def test_needs_two_pairs(self):
        vectors = angle_vectors([10])
        with pytest.raises(EvaluationError):
            spearman_eval(vectors, [SimilarityPair('x', 'w0', 1.0)])

    def test_non_finite_score(self):
        with pytest.raises(EvaluationError):
            SimilarityPair('a', 'b', float('nan'))

    def test_cosine_of_zero_vector(self):
        assert cosine(np.zeros(3), np.ones(3)) == 0.0

    def test_evaluator_reads_policy(self, config):
        config['eval']['oov_policy'] = 'skip'
        vectors = angle_vectors([80, 45, 10])
        pairs = [SimilarityPair('x', f'w{i}', float(i)) for i in range(3)]
        pairs.append(SimilarityPair('x', 'unknown', 5.0))
        assert SimilarityEvaluator(config).evaluate(vectors, pairs).skipped == 1


class TestAnalogy:

    @pytest.fixture
    def parallelogram(self):
        e = np.eye(4)
        d = (e[2] + e[1] - e[0]) / math.sqrt(3)
        return WordVectors(['man', 'king', 'woman', 'queen', 'apple'], np.vstack([e[0], e[1], e[2], d, e[3]]))

    def test_parallelogram(self, parallelogram):
        report = analogy_eval(parallelogram, [AnalogyQuad('man', 'king', 'woman', 'queen')])
        assert report.accuracy == 1.0
        assert (report.correct, report.total) == (1, 1)

    def test_identity_keeps_c(self):
        vectors = WordVectors(['x', 'y', 'z'], np.eye(3))
        assert solve_analogy(vectors, AnalogyQuad('x', 'x', 'y', 'y')) == 'y'

    def test_identity_analogies_are_answered_with_c(self):
        """Com a == b só a é excluída: x:x :: y:? responde y"""
        rng = np.random.default_rng(3)
        words = [f'w{i}' for i in range(8)]
        vectors = WordVectors(words, rng.normal(size=(8, 4)))
        quads = [AnalogyQuad(x, x, y, y) for x in words for y in words if x != y]
        report = analogy_eval(vectors, quads)
        assert report.accuracy == 1.0
        assert report.total == len(quads)
        for quad in quads:
            assert solve_analogy(vectors, quad) != quad.a

    def test_query_words_excluded(self):
        rng = np.random.default_rng(0)
        words = [f'w{i}' for i in range(12)]
        vectors = WordVectors(words, rng.normal(size=(12, 5)))
        for _ in range(100):
            a, b, c = rng.choice(words, size=3, replace=False)
            guess = solve_analogy(vectors, AnalogyQuad(a, b, c, 'w0'))
            assert guess not in {a, b, c}

    def test_sections_and_skips(self, parallelogram):
        quads = [
            AnalogyQuad('man', 'king', 'woman', 'queen', 'royal'),
            AnalogyQuad('man', 'king', 'woman', 'apple', 'royal'),
            AnalogyQuad('man', 'ghost', 'woman', 'queen', 'other'),
        ]
        report = analogy_eval(parallelogram, quads, oov_policy='skip')
        assert (report.correct, report.total, report.skipped) == (1, 2, 1)
        assert report.per_section == {'royal': (1, 2)}
        frame = report.to_frame()
        assert list(frame['section']) == ['royal', 'total']
        assert frame['accuracy'].iloc[-1] == pytest.approx(0.5)

    def test_nothing_answerable(self, parallelogram):
        with pytest.raises(EvaluationError):
            analogy_eval(parallelogram, [AnalogyQuad('a', 'b', 'c', 'd')], oov_policy='skip')

    def test_evaluator(self, config, parallelogram):
        report = AnalogyEvaluator(config).evaluate(parallelogram, [AnalogyQuad('man', 'king', 'woman', 'queen')])
        assert report.accuracy == 1.0

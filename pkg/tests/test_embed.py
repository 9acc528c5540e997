import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from embed.model import (
    EmbeddingModel,
    EmbeddingParams,
    infer_oov,
    loss_and_gradients,
    score,
    softplus_neg,
)
from embed.trainer import NegativeSampler, build_model, train
from embed.vectors import EmbeddingError, WordVectors, bag_of
from transform.candidates import MorphemeVocab
from transform.pipeline import Segmenter, segment_words

GROUP_A = (['walked', 'walking', 'walks'], ['dog', 'park', 'trail', 'leash'])
GROUP_B = (['apple', 'bread', 'cheese'], ['kitchen', 'oven', 'plate', 'spoon'])


def small_model(word_morphs, dim=4, seed=0):
    counts = {w: 1 for w in word_morphs}
    return EmbeddingModel(word_morphs, counts, EmbeddingParams(dim=dim, seed=seed))


def randomize(model, seed, scale=0.5):
    rng = np.random.default_rng(seed)
    model.morph_vectors = rng.normal(scale=scale, size=model.morph_vectors.shape)
    model.ctx_vectors = rng.normal(scale=scale, size=model.ctx_vectors.shape)
    return model


def synthetic_corpus(seed, sentences=60):
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(sentences):
        for centers, contexts in (GROUP_A, GROUP_B):
            left, right = rng.choice(contexts, size=2)
            corpus.append([str(left), str(rng.choice(centers)), str(right)])
    return corpus


def minibatch_step(model, batch, lr):
    """Perda total do lote e um passo de gradiente com a soma dos gradientes"""
    total, morph, ctx = 0.0, {}, {}
    for center, context, negatives in batch:
        loss, grads = model.loss_and_gradients(center, context, negatives)
        total += loss
        for i, g in grads.morph.items():
            morph[i] = morph.get(i, 0.0) + g
        for j, g in grads.ctx.items():
            ctx[j] = ctx.get(j, 0.0) + g
    for i, g in morph.items():
        model.morph_vectors[i] -= lr * g
    for j, g in ctx.items():
        model.ctx_vectors[j] -= lr * g
    return total


@pytest.fixture
def walk_mv():
    return MorphemeVocab.from_counts({
        'walk': ('R', 3), 'ed': ('S', 2), 'ing': ('S', 2), 's': ('S', 2),
    })


class TestScore:

    def test_zero_vectors(self):
        model = small_model({'w': ('m',), 'c': ()})
        model.morph_vectors[:] = 0.0
        assert score(model, 'w', 'c') == 0.0

    def test_unit_vectors(self):
        model = small_model({'w': ('m',), 'c': ()})
        model.morph_vectors[:] = 0.0
        model.morph_vectors[model.morph_index['m'], 0] = 1.0
        model.ctx_vectors[model.word_index['c'], 0] = 1.0
        assert score(model, 'w', 'c') == pytest.approx(1.0)

    def test_sum_over_bag(self):
        model = randomize(small_model({'w': ('m1', 'm2', 'm3'), 'c': ()}), seed=3)
        v_c = model.ctx_vectors[model.word_index['c']]
        expected = sum(model.morph_vectors[model.morph_index[m]] @ v_c for m in ('w', 'm1', 'm2', 'm3'))
        assert score(model, 'w', 'c') == pytest.approx(expected)

    def test_linear_in_context(self):
        model = randomize(small_model({'w': ('m1',), 'c': ()}), seed=4)
        j = model.word_index['c']
        base = score(model, 'w', 'c')
        model.ctx_vectors[j] *= 2.5
        assert score(model, 'w', 'c') == pytest.approx(2.5 * base)

    def test_unknown_word(self):
        model = small_model({'w': ('m',)})
        with pytest.raises(EmbeddingError):
            score(model, 'zz', 'w')


class TestLoss:

    def test_all_zero_loss(self):
        model = small_model({'w': ('m',), 'c': (), 'n1': (), 'n2': (), 'n3': ()})
        model.morph_vectors[:] = 0.0
        loss, _ = loss_and_gradients(model, 'w', 'c', ['n1', 'n2', 'n3'])
        assert loss == pytest.approx(4 * math.log(2), abs=1e-12)

    def test_softplus_is_stable(self):
        assert softplus_neg(30.0) < 1e-12
        assert softplus_neg(-800.0) == pytest.approx(800.0)
        assert np.isfinite(softplus_neg(np.array([-1e4, 0.0, 1e4]))).all()

    def test_gradient_matches_finite_differences(self):
        words = {'w': ('m1', 'm2'), 'c': (), 'n1': (), 'n2': ()}
        h = 1e-5
        for trial in range(100):
            model = randomize(small_model(words, dim=5), seed=trial)
            negatives = ['n1', 'n2']
            _, grads = loss_and_gradients(model, 'w', 'c', negatives)

            def loss_at():
                return loss_and_gradients(model, 'w', 'c', negatives)[0]

            checks = [(model.morph_vectors, i, grads.morph[i]) for i in grads.morph]
            checks += [(model.ctx_vectors, j, grads.ctx[j]) for j in grads.ctx]
            for array, row, analytic in checks:
                numeric = np.zeros(array.shape[1])
                for k in range(array.shape[1]):
                    saved = array[row, k]
                    array[row, k] = saved + h
                    up = loss_at()
                    array[row, k] = saved - h
                    down = loss_at()
                    array[row, k] = saved
                    numeric[k] = (up - down) / (2 * h)
                scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-8)
                assert np.linalg.norm(analytic - numeric) / scale < 1e-4

    def test_gradient_covers_whole_bag(self):
        model = randomize(small_model({'w': ('m1', 'm2'), 'c': ()}), seed=1)
        _, grads = loss_and_gradients(model, 'w', 'c')
        assert set(grads.morph) == {model.morph_index[m] for m in ('w', 'm1', 'm2')}
        assert set(grads.ctx) == {model.word_index['c']}


class TestNegativeSampler:

    def test_never_draws_excluded(self):
        sampler = NegativeSampler([5, 1, 1, 1])
        rng = np.random.default_rng(0)
        for _ in range(200):
            assert 0 not in sampler.draw(rng, 5, exclude=0)

    def test_single_word_vocabulary(self):
        sampler = NegativeSampler([3])
        assert sampler.draw(np.random.default_rng(0), 5, exclude=0) == []

    def test_follows_smoothed_unigram(self):
        sampler = NegativeSampler([16, 1])
        rng = np.random.default_rng(1)
        draws = np.array([sampler.draw(rng, 1, exclude=-1)[0] for _ in range(4000)])
        expected = 16 ** 0.75 / (16 ** 0.75 + 1)
        assert abs((draws == 0).mean() - expected) < 0.03


class TestTrain:

    def test_empty_corpus(self):
        with pytest.raises(EmbeddingError):
            train([], {})
        with pytest.raises(EmbeddingError):
            train([[], []], {})

    def test_min_count_filters_everything(self):
        with pytest.raises(EmbeddingError):
            train([['a', 'b']], {}, EmbeddingParams(dim=4, min_count=2))

    def test_zero_learning_rate_changes_nothing(self):
        corpus = [['a', 'b', 'c'], ['c', 'b', 'a']]
        params = EmbeddingParams(dim=8, lr=0.0, epochs=2, seed=5)
        model = train(corpus, {}, params)
        fresh = build_model(corpus, {}, params)
        assert np.array_equal(model.morph_vectors, fresh.morph_vectors)
        assert not model.ctx_vectors.any()

    def test_deterministic_with_one_thread(self):
        corpus = synthetic_corpus(0, sentences=10)
        params = EmbeddingParams(dim=8, window=2, negatives=2, epochs=2, seed=11)
        first = train(corpus, {}, params)
        second = train(corpus, {}, params)
        assert np.array_equal(first.morph_vectors, second.morph_vectors)
        assert np.array_equal(first.ctx_vectors, second.ctx_vectors)
        assert len(first.loss_history) == 2

    def test_threads_produce_finite_vectors(self):
        corpus = synthetic_corpus(1, sentences=10)
        model = train(corpus, {}, EmbeddingParams(dim=8, window=2, negatives=2, epochs=2, threads=2))
        assert np.isfinite(model.morph_vectors).all()

    def test_bags_come_from_forests(self, walk_mv):
        forests = segment_words(['walked', 'dog'], walk_mv)
        model = train([['dog', 'walked']], forests, EmbeddingParams(dim=4, epochs=1))
        assert model.word_morphs['walked'] == ('ed', 'walk', 'walked')
        assert model.word_morphs['dog'] == ('dog',)

    def test_segmenter_handles_words_without_forest(self, walk_mv):
        model = train([['dog', 'walking']], {}, EmbeddingParams(dim=4, epochs=1), Segmenter(walk_mv))
        assert model.word_morphs['walking'] == ('ing', 'walk', 'walking')

    def test_loss_decreases(self):
        corpus = synthetic_corpus(2, sentences=40)
        model = train(corpus, {}, EmbeddingParams(dim=16, window=2, negatives=3, epochs=5, lr=0.05))
        assert model.loss_history[-1] < model.loss_history[0]

    def test_minibatch_loss_non_increasing(self, walk_mv):
        """Perda de um lote fixo não sobe nos primeiros 10 passos (lr = 0.01)"""
        words = GROUP_A[0] + GROUP_A[1] + GROUP_B[0] + GROUP_B[1]
        forests = segment_words(words, walk_mv)
        passed = 0
        for seed in range(20):
            corpus = synthetic_corpus(seed, sentences=8)
            model = build_model(corpus, forests, EmbeddingParams(dim=8, seed=seed))
            rng = np.random.default_rng(seed)
            batch = []
            for left, center, right in corpus:
                others = [w for w in model.words if w not in (left, center, right)]
                batch.append((center, left, [str(rng.choice(others))]))
                batch.append((center, right, [str(rng.choice(others))]))
            losses = [minibatch_step(model, batch, lr=0.01) for _ in range(11)]
            passed += all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
        assert passed >= 18


class TestInferOOV:

    def test_sum_of_known_morphemes(self):
        mv = MorphemeVocab.from_counts({'re': ('P', 5), 'truncat': ('R', 3), 'ing': ('S', 9)})
        model = randomize(small_model({'x': ('re', 'truncat', 'ing')}, dim=6), seed=2)
        vector, flag = infer_oov(model, 'retruncating', mv)
        expected = sum(model.morph_vectors[model.morph_index[m]] for m in ('re', 'truncat', 'ing'))
        assert np.allclose(vector, expected, atol=1e-12)
        assert not flag

    def test_single_known_morpheme(self):
        mv = MorphemeVocab.from_counts({'walk': ('R', 3)})
        model = randomize(small_model({'walk': ()}, dim=6), seed=2)
        vector, flag = infer_oov(model, 'walkable', mv)
        assert np.allclose(vector, model.morph_vectors[model.morph_index['walk']])
        assert not flag

    def test_nothing_known_gives_zero_vector(self, caplog):
        model = small_model({'walk': ()})
        vector, flag = infer_oov(model, 'zzz', MorphemeVocab())
        assert flag
        assert not vector.any()
        assert 'zzz' in caplog.text

    def test_word_vectors_infer_like_model(self, walk_mv):
        model = randomize(small_model({'walked': ('walk', 'ed'), 'dog': ()}, dim=6), seed=9)
        vectors = model.to_word_vectors(walk_mv)
        inferred, flag = vectors.infer('walkable')
        expected, _ = model.infer_oov('walkable', walk_mv)
        assert np.allclose(inferred, expected)
        assert not flag
        assert vectors.lookup('walkable', 'skip') == (None, False)

    def test_bag_of_includes_word(self, walk_mv):
        forest = Segmenter(walk_mv).segment('walks')
        assert bag_of(forest) == ('s', 'walk', 'walks')


class TestWordVectors:

    def test_dimension_mismatch(self):
        with pytest.raises(EmbeddingError):
            WordVectors(['a'], np.zeros((1, 3)), ['m'], np.zeros((1, 4)))

    def test_lookup_known_word(self):
        vectors = WordVectors(['a', 'b'], np.eye(2))
        vector, inferred = vectors.lookup('b')
        assert np.array_equal(vector, [0.0, 1.0])
        assert not inferred
        assert 'a' in vectors and 'c' not in vectors

    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3))
    def test_to_word_vectors_sums_bags(self, values):
        model = small_model({'w': ('m',), 'c': ()}, dim=3)
        model.morph_vectors[model.morph_index['m']] = values
        vectors = model.to_word_vectors()
        assert np.allclose(vectors.vector('w'), model.hidden('w'))


class TestMorphemeSharing:

    def test_unseen_inflection_lands_near_its_root(self, walk_mv):
        """Uma palavra nunca vista herda o vetor da raiz compartilhada"""
        words = GROUP_A[0] + GROUP_A[1] + GROUP_B[0] + GROUP_B[1]
        forests = segment_words(words, walk_mv)
        wins = 0
        for seed in range(20):
            corpus = synthetic_corpus(seed)
            params = EmbeddingParams(dim=16, window=2, negatives=3, epochs=10, lr=0.05, seed=seed)
            model = train(corpus, forests, params)
            vector, flag = model.infer_oov('walkable', walk_mv)
            assert not flag
            vectors = model.to_word_vectors(walk_mv)
            u = vector / np.linalg.norm(vector)
            near = vectors.vector('walking') / np.linalg.norm(vectors.vector('walking'))
            far = vectors.vector('apple') / np.linalg.norm(vectors.vector('apple'))
            wins += (u @ near) - (u @ far) > 0.1
        assert wins >= 18

"""Treino SGD com amostragem negativa e janela reduzida"""

import logging
import threading
from collections import Counter

import numpy as np

from embed.model import EmbeddingModel, EmbeddingParams
from embed.vectors import EmbeddingError, bag_of

logger = logging.getLogger(__name__)

NEGATIVE_POWER = 0.75
MIN_LR_FRACTION = 1e-4


class NegativeSampler:
    """Amostra índices de palavras com probabilidade proporcional a count^0.75"""

    def __init__(self, counts, power=NEGATIVE_POWER):
        self.cdf = np.cumsum(np.asarray(counts, dtype=np.float64) ** power)

    def __len__(self):
        return len(self.cdf)

    def draw(self, rng, k, exclude):
        """k índices diferentes de exclude (vazio se só existe uma palavra)"""
        if k <= 0 or len(self.cdf) < 2:
            return []
        total = self.cdf[-1]
        draws = list(np.searchsorted(self.cdf, rng.random(k) * total, side='right'))
        for i, w in enumerate(draws):
            while w == exclude:
                w = int(np.searchsorted(self.cdf, rng.random() * total, side='right'))
            draws[i] = int(w)
        return draws


def build_model(sentences, forests, params, segmenter=None):
    """Modelo inicializado para as palavras do corpus com frequência >= min_count

    Palavras sem árvore são segmentadas na hora pelo segmenter, quando houver.
    """
    counts = Counter(w for sentence in sentences for w in sentence)
    kept = {w: c for w, c in counts.items() if c >= params.min_count}
    if not kept:
        raise EmbeddingError(f'nenhuma palavra com frequência >= {params.min_count}')

    word_morphs = {}
    segmented = 0
    for word in kept:
        forest = forests.get(word)
        if forest is None and segmenter is not None:
            forest = segmenter.segment(word)
            segmented += 1
        word_morphs[word] = bag_of(forest) if forest is not None else (word,)
    if segmented:
        logger.info(f"{segmented} palavras do corpus segmentadas durante o treino")
    return EmbeddingModel(word_morphs, kept, params)


def _run_worker(model, encoded, sampler, params, rng, losses):
    total = max(params.epochs * sum(len(s) for s in encoded), 1)
    done = 0
    for epoch in range(params.epochs):
        epoch_loss, steps = 0.0, 0
        for sentence in encoded:
            n = len(sentence)
            for pos in range(n):
                lr = params.lr * max(1.0 - done / total, MIN_LR_FRACTION)
                done += 1
                bag = model.bags[sentence[pos]]
                b = int(rng.integers(1, params.window + 1))
                for cpos in range(max(0, pos - b), min(n, pos + b + 1)):
                    if cpos == pos:
                        continue
                    context = int(sentence[cpos])
                    targets = np.array(
                        [context] + sampler.draw(rng, params.negatives, context), dtype=np.int64
                    )
                    epoch_loss += model.sgd_step(bag, targets, lr)
                    steps += 1
        losses.append((epoch, epoch_loss / steps if steps else 0.0))


def train(corpus, forests, params=EmbeddingParams(), segmenter=None):
    """Treina os vetores de morfemas e de contexto

    Com uma thread o resultado é determinístico para a mesma semente; com
    mais threads os trabalhadores atualizam os mesmos arrays sem travas.

    Args:
        corpus: Iterável de sentenças (listas de tokens)
        forests: dict palavra -> MorphForest
        params: EmbeddingParams
        segmenter: Segmenter opcional para palavras sem árvore

    Returns:
        EmbeddingModel

    Raises:
        EmbeddingError: corpus vazio
    """
    sentences = [list(s) for s in corpus]
    sentences = [s for s in sentences if s]
    if not sentences:
        raise EmbeddingError('corpus vazio')

    model = build_model(sentences, forests, params, segmenter)
    encoded = [
        np.array([model.word_index[w] for w in s if w in model.word_index], dtype=np.int64)
        for s in sentences
    ]
    encoded = [s for s in encoded if len(s)]
    sampler = NegativeSampler(model.counts)
    logger.info(
        f"Treinando: {len(model.words)} palavras, {len(model.morphemes)} morfemas, "
        f"{len(encoded)} sentenças, dim={params.dim}"
    )

    if params.threads <= 1:
        losses = []
        _run_worker(model, encoded, sampler, params, np.random.default_rng(params.seed), losses)
    else:
        per_worker = [[] for _ in range(params.threads)]
        workers = [
            threading.Thread(
                target=_run_worker,
                args=(model, encoded[i::params.threads], sampler, params,
                      np.random.default_rng([params.seed, i]), per_worker[i]),
            )
            for i in range(params.threads)
        ]
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
        losses = per_worker[0]

    for epoch, loss in losses:
        logger.info(f"Época {epoch + 1}/{params.epochs}: perda média {loss:.4f}")
    model.loss_history = [loss for _, loss in losses]
    if not np.isfinite(model.morph_vectors).all() or not np.isfinite(model.ctx_vectors).all():
        raise EmbeddingError('valores não finitos após o treino')
    return model

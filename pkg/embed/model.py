"""Modelo skip-gram cuja palavra central é a soma dos vetores de seus morfemas"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from embed.vectors import EmbeddingError, WordVectors, bag_of, compose
from transform.pipeline import Segmenter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingParams:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    lr: float = 0.025
    epochs: int = 5
    seed: int = 42
    threads: int = 1
    min_count: int = 1

    @classmethod
    def from_config(cls, config):
        embed = config.get('embed', {})
        run = config.get('run', {})
        return cls(
            dim=embed.get('dim', 100),
            window=embed.get('window', 5),
            negatives=embed.get('negatives', 5),
            lr=embed.get('lr', 0.025),
            epochs=embed.get('epochs', 5),
            seed=run.get('seed', 42),
            threads=run.get('threads', 1),
            min_count=embed.get('min_count', 1),
        )


def softplus_neg(x):
    """l(x) = log(1 + exp(-x)), estável para |x| grande"""
    return np.logaddexp(0.0, -x)


@dataclass
class Gradients:
    """Gradientes esparsos: índice de morfema -> vetor, índice de palavra -> vetor"""

    morph: dict = field(default_factory=dict)
    ctx: dict = field(default_factory=dict)


class EmbeddingModel:
    """Vetores de morfemas (z_m), vetores de contexto (v_c) e sacolas de morfemas

    Args:
        word_morphs: dict palavra -> sequência de morfemas (a própria palavra é incluída)
        counts: dict palavra -> frequência no corpus
        params: EmbeddingParams
    """

    def __init__(self, word_morphs, counts, params=EmbeddingParams()):
        if not word_morphs:
            raise EmbeddingError('nenhuma palavra para o modelo')
        self.params = params
        self.words = sorted(word_morphs, key=lambda w: (-counts.get(w, 0), w))
        self.word_index = {w: i for i, w in enumerate(self.words)}
        self.counts = np.array([counts.get(w, 0) for w in self.words], dtype=np.float64)

        bags = {w: set(word_morphs[w]) | {w} for w in self.words}
        self.morphemes = sorted(set().union(*bags.values()))
        self.morph_index = {m: i for i, m in enumerate(self.morphemes)}
        self.word_morphs = {w: tuple(sorted(bag)) for w, bag in bags.items()}
        self.bags = [
            np.array([self.morph_index[m] for m in self.word_morphs[w]], dtype=np.int64)
            for w in self.words
        ]

        d = params.dim
        rng = np.random.default_rng(params.seed)
        bound = 1.0 / (2 * d)
        self.morph_vectors = rng.uniform(-bound, bound, size=(len(self.morphemes), d))
        self.ctx_vectors = np.zeros((len(self.words), d))
        self.loss_history = []

    @property
    def dim(self):
        return self.morph_vectors.shape[1]

    def _bag(self, word):
        i = self.word_index.get(word)
        if i is None:
            raise EmbeddingError(f'palavra sem sacola de morfemas: {word!r}')
        bag = self.bags[i]
        if not len(bag):
            raise EmbeddingError(f'sacola de morfemas vazia: {word!r}')
        return bag

    def _ctx(self, word):
        j = self.word_index.get(word)
        if j is None:
            raise EmbeddingError(f'palavra sem vetor de contexto: {word!r}')
        return j

    def hidden(self, word):
        """h = soma dos z_m da sacola da palavra"""
        return self.morph_vectors[self._bag(word)].sum(axis=0)

    def score(self, word, context_word):
        """s(w, c) = soma sobre a sacola de z_m . v_c"""
        return float(self.hidden(word) @ self.ctx_vectors[self._ctx(context_word)])

    def loss_and_gradients(self, center_word, context_word, negative_words=()):
        """Perda l(s(w,c)) + soma l(-s(w,t)) e seus gradientes

        Returns:
            tuple: (perda, Gradients)
        """
        bag = self._bag(center_word)
        targets = [self._ctx(context_word)] + [self._ctx(t) for t in negative_words]
        loss, grad_h, grad_ctx = self._forward_backward(bag, np.array(targets, dtype=np.int64))
        grads = Gradients()
        for m in bag:
            grads.morph[int(m)] = grad_h.copy()
        for j, g in zip(targets, grad_ctx):
            grads.ctx[j] = grads.ctx.get(j, 0.0) + g
        return loss, grads

    def _forward_backward(self, bag, targets):
        h = self.morph_vectors[bag].sum(axis=0)
        vt = self.ctx_vectors[targets]
        s = vt @ h
        signs = np.ones(len(targets))
        signs[1:] = -1.0
        loss = float(softplus_neg(signs * s).sum())
        # g_pos = sigma(s_c) - 1, g_t = sigma(s_t)
        g = expit(s)
        g[0] -= 1.0
        grad_h = g @ vt
        grad_ctx = np.outer(g, h)
        return loss, grad_h, grad_ctx

    def sgd_step(self, bag, targets, lr):
        """Um passo de SGD sobre (centro, contexto, negativos); devolve a perda"""
        loss, grad_h, grad_ctx = self._forward_backward(bag, targets)
        np.add.at(self.ctx_vectors, targets, -lr * grad_ctx)
        self.morph_vectors[bag] -= lr * grad_h
        return loss

    def infer_oov(self, word, mv):
        """Vetor de uma palavra nova pela soma dos morfemas conhecidos

        Segmenta com o vocabulário de morfemas congelado (sem modo de treino);
        o token da palavra inteira, desconhecido, não contribui.

        Returns:
            tuple: (vetor, flag) com flag True quando nenhum morfema é conhecido
        """
        forest = Segmenter(mv, training_mode=False).segment(word)
        vector, known = compose(bag_of(forest), self.morph_index, self.morph_vectors)
        if not known:
            logger.warning(f"Nenhum morfema conhecido para {word!r}: vetor nulo")
        return vector, known == 0

    def to_word_vectors(self, morpheme_vocab=None):
        """Visão de avaliação: vetores de palavras (somas) e de morfemas"""
        matrix = np.vstack([self.morph_vectors[bag].sum(axis=0) for bag in self.bags])
        return WordVectors(
            self.words, matrix, self.morphemes, self.morph_vectors.copy(), morpheme_vocab
        )


def score(model, word, context_word):
    return model.score(word, context_word)


def loss_and_gradients(model, center_word, context_word, negative_words=()):
    return model.loss_and_gradients(center_word, context_word, negative_words)


def infer_oov(model, word, mv):
    return model.infer_oov(word, mv)

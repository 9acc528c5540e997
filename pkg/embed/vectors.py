"""Visão indexada dos vetores treinados, usada na avaliação"""

import logging

import numpy as np

from transform.pipeline import Segmenter

logger = logging.getLogger(__name__)


class EmbeddingError(ValueError):
    """Erro de treino, pontuação ou composição de vetores"""


def bag_of(forest):
    """Morfemas de todos os nós da árvore, incluindo a palavra inteira"""
    return tuple(sorted(forest.flat_set | {forest.word}))


def compose(tokens, morph_index, morph_vectors):
    """Soma dos vetores dos morfemas conhecidos

    Returns:
        tuple: (vetor, número de morfemas conhecidos)
    """
    known = [morph_index[t] for t in tokens if t in morph_index]
    if not known:
        return np.zeros(morph_vectors.shape[1]), 0
    return morph_vectors[known].sum(axis=0), len(known)


def unit_rows(matrix):
    """Normaliza as linhas; linhas nulas continuam nulas"""
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


class WordVectors:
    """Vetores de palavras (somas das sacolas) e, opcionalmente, de morfemas

    Com vetores de morfemas e um MorphemeVocab, palavras fora do vocabulário
    recebem a soma dos morfemas conhecidos.
    """

    def __init__(self, words, matrix, morphemes=(), morph_matrix=None, morpheme_vocab=None):
        self.words = list(words)
        self.matrix = np.asarray(matrix, dtype=np.float64).reshape(len(self.words), -1)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.morphemes = list(morphemes)
        self.morph_index = {m: i for i, m in enumerate(self.morphemes)}
        if morph_matrix is None:
            morph_matrix = np.zeros((0, self.dim))
        self.morph_matrix = np.asarray(morph_matrix, dtype=np.float64).reshape(len(self.morphemes), -1)
        if self.morphemes and self.morph_matrix.shape[1] != self.dim:
            raise EmbeddingError(
                f'dimensões diferentes: palavras {self.dim}, morfemas {self.morph_matrix.shape[1]}'
            )
        self.morpheme_vocab = morpheme_vocab
        self._segmenter = Segmenter(morpheme_vocab) if morpheme_vocab is not None else None

    @property
    def dim(self):
        return self.matrix.shape[1]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.index

    def vector(self, word):
        i = self.index.get(word)
        if i is None:
            raise EmbeddingError(f'palavra fora do vocabulário: {word!r}')
        return self.matrix[i]

    def infer(self, word):
        """Soma dos vetores dos morfemas conhecidos da palavra

        Returns:
            tuple: (vetor, flag) com flag True quando nenhum morfema é conhecido
        """
        if self._segmenter is not None:
            tokens = bag_of(self._segmenter.segment(word))
        else:
            tokens = (word,)
        vector, known = compose(tokens, self.morph_index, self.morph_matrix)
        if not known:
            logger.warning(f"Nenhum morfema conhecido para {word!r}: vetor nulo")
        return vector, known == 0

    def lookup(self, word, oov_policy='infer'):
        """Vetor da palavra conforme a política para palavras novas

        Returns:
            tuple: (vetor ou None se pulada, True se o vetor foi inferido)
        """
        if word in self.index:
            return self.vector(word), False
        if oov_policy == 'skip':
            return None, False
        vector, _ = self.infer(word)
        return vector, True

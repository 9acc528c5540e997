import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from embed.vectors import unit_rows

logger = logging.getLogger(__name__)

MICRO = 'micro'
MACRO = 'macro'


class EvaluationError(ValueError):
    """Pré-condição de avaliação não atendida"""


@dataclass(frozen=True)
class GoldSegmentation:
    word: str
    alternatives: tuple

    def __post_init__(self):
        if not self.alternatives:
            raise EvaluationError(f'{self.word!r} sem alternativas')
        for alt in self.alternatives:
            if not alt or any(not m for m in alt):
                raise EvaluationError(f'{self.word!r}: alternativa com morfema vazio')


@dataclass(frozen=True)
class SimilarityPair:
    word_a: str
    word_b: str
    human_score: float

    def __post_init__(self):
        if not math.isfinite(self.human_score):
            raise EvaluationError(f'nota não finita para {self.word_a}/{self.word_b}')


@dataclass(frozen=True)
class AnalogyQuad:
    a: str
    b: str
    c: str
    d: str
    section: str = ''


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    words: int

    def to_frame(self):
        return pd.DataFrame({
            'metric': ['precision', 'recall', 'f1', 'words'],
            'value': [self.precision, self.recall, self.f1, self.words],
        })


@dataclass(frozen=True)
class SimilarityReport:
    rho: float
    scored: int
    skipped: int
    inferred: int

    def to_frame(self):
        return pd.DataFrame({
            'metric': ['rho', 'scored', 'skipped', 'inferred'],
            'value': [self.rho, self.scored, self.skipped, self.inferred],
        })


@dataclass(frozen=True)
class AnalogyReport:
    accuracy: float
    total: int
    correct: int
    skipped: int = 0
    per_section: dict = field(default_factory=dict)

    def to_frame(self):
        rows = [
            (section, correct, total, correct / total if total else 0.0)
            for section, (correct, total) in self.per_section.items()
        ]
        rows.append(('total', self.correct, self.total, self.accuracy))
        return pd.DataFrame(rows, columns=['section', 'correct', 'total', 'accuracy'])


def _harmonic(p, r):
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _match(pred, alternatives):
    """(TP, |pred|, |gold|) contra a alternativa de maior F1"""
    best = None
    for alt in alternatives:
        gold = Counter(alt)
        tp = sum((pred & gold).values())
        n_pred, n_gold = sum(pred.values()), sum(gold.values())
        f1 = 2 * tp / (n_pred + n_gold) if n_pred + n_gold else 0.0
        if best is None or f1 > best[0]:
            best = (f1, tp, n_pred, n_gold)
    return best[1:]


def seg_prf(pred, gold, average=MICRO):
    """Precisão, revocação e F1 por casamento exato de morfemas (multiconjuntos)

    Args:
        pred: dict palavra -> lista de morfemas (ausente = vazio)
        gold: lista de GoldSegmentation
        average: 'micro' (somas globais) ou 'macro' (médias por palavra)

    Returns:
        PRF
    """
    if not gold:
        raise EvaluationError('padrão-ouro vazio')
    if average not in (MICRO, MACRO):
        raise EvaluationError(f'média desconhecida: {average}')

    tp_sum = pred_sum = gold_sum = 0
    precisions, recalls = [], []
    missing = 0
    for entry in gold:
        morphs = pred.get(entry.word)
        if morphs is None:
            missing += 1
            morphs = ()
        tp, n_pred, n_gold = _match(Counter(morphs), entry.alternatives)
        tp_sum += tp
        pred_sum += n_pred
        gold_sum += n_gold
        precisions.append(tp / n_pred if n_pred else 0.0)
        recalls.append(tp / n_gold if n_gold else 0.0)
    if missing:
        logger.warning(f"{missing} palavras do padrão-ouro sem predição")

    if average == MICRO:
        precision = tp_sum / pred_sum if pred_sum else 0.0
        recall = tp_sum / gold_sum if gold_sum else 0.0
    else:
        precision = sum(precisions) / len(precisions)
        recall = sum(recalls) / len(recalls)
    return PRF(precision, recall, _harmonic(precision, recall), len(gold))


def forest_morphemes(forest, all_granularities=False):
    """Morfemas previstos de uma árvore: folhas ou todos os nós abaixo da raiz"""
    if not all_granularities or forest.root.is_leaf:
        return forest.leaves
    return [n.text for n in forest.root.nodes() if n is not forest.root]


def cosine(u, v):
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return 0.0
    return float(u @ v / (nu * nv))


def rank_correlation(human, model):
    """Spearman com postos médios para empates"""
    rho = spearmanr(np.asarray(human, dtype=float), np.asarray(model, dtype=float))[0]
    return float(rho)


def spearman_eval(vectors, pairs, oov_policy='infer'):
    """Spearman entre cossenos do modelo e notas humanas

    Args:
        vectors: WordVectors
        pairs: lista de SimilarityPair
        oov_policy: 'infer' (soma de morfemas) ou 'skip'

    Returns:
        SimilarityReport
    """
    human, model = [], []
    skipped = inferred = 0
    for pair in pairs:
        va, ia = vectors.lookup(pair.word_a, oov_policy)
        vb, ib = vectors.lookup(pair.word_b, oov_policy)
        if va is None or vb is None:
            skipped += 1
            continue
        inferred += int(ia) + int(ib)
        human.append(pair.human_score)
        model.append(cosine(va, vb))

    if len(human) < 2:
        raise EvaluationError(f'apenas {len(human)} pares pontuáveis (mínimo 2)')
    rho = rank_correlation(human, model)
    if math.isnan(rho):
        logger.warning("rho indefinido (pontuações constantes)")
    logger.info(f"Similaridade: rho={rho:.4f} em {len(human)} pares, {skipped} pulados")
    return SimilarityReport(rho, len(human), skipped, inferred)


def solve_analogy(vectors, quad, oov_policy='infer', unit=None):
    """Resposta 3CosAdd para a analogia a:b :: c:?

    Returns:
        str | None: palavra prevista, ou None se a, b ou c não tiverem vetor
    """
    found = [vectors.lookup(w, oov_policy)[0] for w in (quad.a, quad.b, quad.c)]
    if any(v is None for v in found):
        return None
    if unit is None:
        unit = unit_rows(vectors.matrix)
    ua, ub, uc = unit_rows(np.vstack(found))
    sims = unit @ (ub - ua + uc)
    excluded = {quad.a, quad.b} if quad.a == quad.b else {quad.a, quad.b, quad.c}
    for w in excluded:
        i = vectors.index.get(w)
        if i is not None:
            sims[i] = -np.inf
    return vectors.words[int(np.argmax(sims))]


def analogy_eval(vectors, quads, oov_policy='infer'):
    """Acurácia 3CosAdd: argmax de cos(v_b - v_a + v_c, x) sobre o vocabulário

    As palavras da consulta são excluídas; quando a == b o deslocamento é
    nulo e c continua elegível.

    Returns:
        AnalogyReport
    """
    if not quads:
        raise EvaluationError('lista de analogias vazia')
    if not len(vectors):
        raise EvaluationError('vocabulário de vetores vazio')

    unit = unit_rows(vectors.matrix)
    sections = {}
    correct = total = skipped = 0
    for quad in quads:
        guess = solve_analogy(vectors, quad, oov_policy, unit)
        if guess is None:
            skipped += 1
            continue
        hit = guess == quad.d
        correct += hit
        total += 1
        c, t = sections.get(quad.section, (0, 0))
        sections[quad.section] = (c + hit, t + 1)

    if not total:
        raise EvaluationError(f'nenhuma analogia avaliável ({skipped} puladas)')
    accuracy = correct / total
    logger.info(f"Analogias: {correct}/{total} corretas ({accuracy:.2%}), {skipped} puladas")
    return AnalogyReport(accuracy, total, correct, skipped, sections)


class BaseEvaluator(ABC):
    """Classe abstrata para os diferentes tipos de avaliação"""

    def __init__(self, config):
        self.config = config

    @abstractmethod
    def evaluate(self, predictions, reference):
        pass


class SegmentationEvaluator(BaseEvaluator):
    """P/R/F1 de segmentações contra o padrão-ouro"""

    def evaluate(self, predictions, reference):
        """Avalia predições de segmentação

        Args:
            predictions: dict palavra -> MorphForest ou lista de morfemas
            reference: lista de GoldSegmentation

        Returns:
            PRF
        """
        settings = self.config.get('eval', {})
        all_granularities = settings.get('all_granularities', False)
        pred = {
            word: forest_morphemes(p, all_granularities) if hasattr(p, 'root') else list(p)
            for word, p in predictions.items()
        }
        result = seg_prf(pred, reference, settings.get('average', MICRO))
        logger.info(
            f"Segmentação: P={result.precision:.4f} R={result.recall:.4f} "
            f"F1={result.f1:.4f} ({result.words} palavras)"
        )
        return result


class SimilarityEvaluator(BaseEvaluator):

    def evaluate(self, predictions, reference):
        policy = self.config.get('eval', {}).get('oov_policy', 'infer')
        return spearman_eval(predictions, reference, policy)


class AnalogyEvaluator(BaseEvaluator):

    def evaluate(self, predictions, reference):
        policy = self.config.get('eval', {}).get('oov_policy', 'infer')
        return analogy_eval(predictions, reference, policy)

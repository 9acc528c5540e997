"""Medição de escalabilidade das fases de mineração e segmentação"""

import logging
import time

import numpy as np
import pandas as pd

from transform.transformer import MorphemeMiner, VocabularySegmenter

logger = logging.getLogger(__name__)

PHASES = ('mine', 'segment')


def linear_fit_r2(x, y):
    """Ajuste linear por mínimos quadrados

    Returns:
        tuple: (inclinação, intercepto, R²)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError('são necessários ao menos 2 pontos')
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    ss_res = float((residual ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def measure_scalability(vocabulary, sizes, config, repeats=1):
    """Tempo de cada fase sobre subamostras determinísticas do vocabulário

    Usa o menor tempo entre as repetições.

    Returns:
        pd.DataFrame: colunas size, mine_seconds, segment_seconds
    """
    seed = config.get('run', {}).get('seed', 42)
    rows = []
    for size in sorted(sizes):
        sample = vocabulary.subsample(size, seed)
        best = {phase: float('inf') for phase in PHASES}
        for _ in range(repeats):
            start = time.perf_counter()
            morpheme_vocab = MorphemeMiner(config).transform(sample)
            mined = time.perf_counter()
            VocabularySegmenter(config).transform(sample, morpheme_vocab)
            done = time.perf_counter()
            best['mine'] = min(best['mine'], mined - start)
            best['segment'] = min(best['segment'], done - mined)
        logger.info(
            f"{len(sample)} palavras: mineração {best['mine']:.2f}s, "
            f"segmentação {best['segment']:.2f}s"
        )
        rows.append((len(sample), best['mine'], best['segment']))
    return pd.DataFrame(rows, columns=['size', 'mine_seconds', 'segment_seconds'])


def fit_summary(timings):
    """R² do ajuste linear de cada fase

    Returns:
        pd.DataFrame: colunas phase, slope, intercept, r2
    """
    rows = []
    for phase in PHASES:
        slope, intercept, r2 = linear_fit_r2(timings['size'], timings[f'{phase}_seconds'])
        rows.append((phase, slope, intercept, r2))
    return pd.DataFrame(rows, columns=['phase', 'slope', 'intercept', 'r2'])

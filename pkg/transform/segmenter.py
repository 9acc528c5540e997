"""Cobertura disjunta de intervalos por programação dinâmica e escolha por máxima verossimilhança

Índices de intervalo são 1-based e inclusivos sobre os caracteres da palavra.
"""

import logging
import math
from dataclasses import dataclass, field, replace

from transform.candidates import MorphemeClass

logger = logging.getLogger(__name__)

MAX_SEGMENTATIONS = 256


class IntervalError(ValueError):
    """Intervalo fora da palavra ou cobrindo a palavra inteira"""


@dataclass(frozen=True, order=True)
class Interval:
    start: int
    end: int
    cls: MorphemeClass = field(default=MorphemeClass.ROOT, compare=False)

    @property
    def length(self):
        return self.end - self.start + 1

    def text(self, word):
        return word[self.start - 1:self.end]

    @property
    def is_filler(self):
        return self.cls in (MorphemeClass.FILLER, MorphemeClass.WORD)


@dataclass(frozen=True)
class DPState:
    """Estado por índice j: cobertura, número de morfemas e escolhas ótimas

    back[j] lista as escolhas que atingem o ótimo em j: None (pular o
    caractere j) ou o Interval que termina em j.
    """

    cov: tuple
    num: tuple
    back: tuple


@dataclass(frozen=True)
class Segmentation:
    morphemes: tuple
    coverage: int
    size: int
    log_likelihood: float = 0.0
    flagged: bool = False

    @property
    def texts(self):
        return tuple(text for text, _ in self.morphemes)

    @property
    def covered(self):
        """Morfemas selecionados (sem preenchimentos)"""
        return tuple(text for text, iv in self.morphemes if not iv.is_filler)

    @property
    def intervals(self):
        return tuple(iv for _, iv in self.morphemes if not iv.is_filler)

    def __str__(self):
        return ' + '.join(
            text if iv.is_filler else f'[{text}]' for text, iv in self.morphemes
        )


def _check(word, intervals):
    n = len(word)
    spans = {}
    for iv in intervals:
        if not (1 <= iv.start <= iv.end <= n):
            raise IntervalError(f'intervalo {iv.start}..{iv.end} fora de {word!r}')
        if iv.start == 1 and iv.end == n:
            raise IntervalError(f'intervalo cobre a palavra inteira: {word!r}')
        spans.setdefault((iv.start, iv.end), iv)
    return list(spans.values())


def dp_table(word, intervals):
    """Recorrência: maximiza cobertura e, em empate, minimiza o número de morfemas

    Cada intervalo é visitado uma vez (agrupado pelo índice final).

    Returns:
        DPState
    """
    n = len(word)
    by_end = [[] for _ in range(n + 1)]
    for iv in sorted(intervals):
        by_end[iv.end].append(iv)

    cov = [0] * (n + 1)
    num = [0] * (n + 1)
    back = [()] * (n + 1)
    for j in range(1, n + 1):
        best_cov, best_num = cov[j - 1], num[j - 1]
        choices = [None]
        for iv in by_end[j]:
            c = cov[iv.start - 1] + iv.length
            m = num[iv.start - 1] + 1
            if c > best_cov or (c == best_cov and m < best_num):
                best_cov, best_num = c, m
                choices = [iv]
            elif c == best_cov and m == best_num:
                choices.append(iv)
        cov[j], num[j], back[j] = best_cov, best_num, tuple(choices)
    return DPState(tuple(cov), tuple(num), tuple(back))


def _with_fillers(word, chosen):
    """Intercala os trechos não cobertos como morfemas de preenchimento"""
    # uma lacuna maximal vira um único preenchimento: 'tio' fica inteiro, não t + i + o
    n = len(word)
    morphemes = []
    pos = 1
    for iv in sorted(chosen):
        if iv.start > pos:
            gap = Interval(pos, iv.start - 1, MorphemeClass.FILLER)
            morphemes.append((gap.text(word), gap))
        morphemes.append((iv.text(word), iv))
        pos = iv.end + 1
    if pos <= n:
        cls = MorphemeClass.WORD if pos == 1 else MorphemeClass.FILLER
        gap = Interval(pos, n, cls)
        morphemes.append((gap.text(word), gap))
    return tuple(morphemes)


def _backtrack(state, n, limit):
    """Enumera todas as escolhas ótimas, da direita para a esquerda, até limit"""
    results = []
    # caminhos parciais como células (intervalo, resto), sem copiar a cada passo
    stack = [(n, None)]
    while stack and len(results) < limit:
        j, chosen = stack.pop()
        if j == 0:
            path = []
            while chosen is not None:
                iv, chosen = chosen
                path.append(iv)
            results.append(tuple(path))
            continue
        # empilhado em ordem reversa para expandir na ordem de back[j]
        for choice in reversed(state.back[j]):
            if choice is None:
                stack.append((j - 1, chosen))
            else:
                stack.append((choice.start - 1, (choice, chosen)))
    return results


def dp_segment(word, intervals, limit=MAX_SEGMENTATIONS):
    """Segmentação parcimoniosa: máxima cobertura com o menor número de morfemas

    Args:
        word: Palavra
        intervals: Intervalos candidatos (nenhum cobrindo a palavra toda)
        limit: Máximo de segmentações empatadas enumeradas

    Returns:
        tuple: (cobertura, tamanho, lista de Segmentation ótimas)

    Raises:
        IntervalError: intervalo fora dos limites ou cobrindo a palavra inteira
    """
    intervals = _check(word, intervals)
    n = len(word)
    state = dp_table(word, intervals)
    coverage, size = state.cov[n], state.num[n]
    paths = _backtrack(state, n, limit)
    segmentations = [
        Segmentation(_with_fillers(word, chosen), coverage, size) for chosen in paths
    ]
    if len(paths) >= limit:
        logger.debug(f"Enumeração limitada a {limit} segmentações para {word!r}")
    return coverage, size, segmentations


def _score(segmentation, counts):
    values = [counts.count(text) for text in segmentation.covered]
    return math.prod(values), values


def ml_select(cands, counts, training_mode=False):
    """Escolhe a segmentação mais provável (produto das contagens f(m))

    Em modo de treino, candidatas com algum morfema de contagem 1 são
    descartadas; se nenhuma sobrar, usa todas e marca a palavra. Empates
    são resolvidos pela menor sequência de morfemas em ordem lexicográfica.

    Args:
        cands: Segmentações com a mesma (cobertura, tamanho)
        counts: MorphemeVocab com f(m); morfemas ausentes contam 1
        training_mode: aplica a restrição f(m) > 1

    Returns:
        Segmentation: com log_likelihood preenchido
    """
    cands = list(cands)
    if not cands:
        raise ValueError('nenhuma segmentação candidata')

    scored = [(seg,) + _score(seg, counts) for seg in cands]
    flagged = False
    if training_mode:
        shared = [s for s in scored if all(v > 1 for v in s[2])]
        if shared:
            scored = shared
        else:
            flagged = True

    best, _, values = min(scored, key=lambda s: (-s[1], s[0].texts))
    log_likelihood = math.fsum(math.log(v) for v in values)
    return replace(best, log_likelihood=log_likelihood, flagged=flagged)


def find_intervals(text, vocab):
    """Intervalos de morfemas do vocabulário dentro de text

    Prefixos só no início, sufixos só no fim, raízes em qualquer posição;
    o texto inteiro nunca é incluído.
    """
    n = len(text)
    longest = min(vocab.max_len, n)
    entries = vocab.entries
    found = []
    for i in range(n):
        for j in range(i + 1, min(n, i + longest) + 1):
            if i == 0 and j == n:
                continue
            entry = entries.get(text[i:j])
            if entry is None:
                continue
            classes = entry.classes
            if MorphemeClass.ROOT in classes:
                cls = MorphemeClass.ROOT
            elif MorphemeClass.PREFIX in classes and i == 0:
                cls = MorphemeClass.PREFIX
            elif MorphemeClass.SUFFIX in classes and j == n:
                cls = MorphemeClass.SUFFIX
            else:
                continue
            found.append(Interval(i + 1, j, cls))
    return found

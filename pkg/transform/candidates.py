"""Geração do vocabulário inicial de morfemas (prefixos, sufixos e raízes)"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import pandas as pd

from transform.trie import FORWARD, REVERSED, build_trie

logger = logging.getLogger(__name__)


class MorphemeClass(str, Enum):
    PREFIX = 'P'
    SUFFIX = 'S'
    ROOT = 'R'
    WORD = 'W'
    FILLER = 'F'


VOCAB_CLASSES = (MorphemeClass.PREFIX, MorphemeClass.SUFFIX, MorphemeClass.ROOT)


def classes_code(classes):
    """Códigos concatenados em ordem P, S, R (ex.: 'PS')"""
    return ''.join(c.value for c in VOCAB_CLASSES if c in classes)


def parse_classes(code):
    try:
        classes = frozenset(MorphemeClass(ch) for ch in code)
    except ValueError:
        raise ValueError(f'classes inválidas: {code!r}') from None
    if not code or not classes <= set(VOCAB_CLASSES):
        raise ValueError(f'classes inválidas: {code!r}')
    return classes


@dataclass(frozen=True)
class MorphemeEntry:
    classes: frozenset
    count: int


class MorphemeVocab:
    """Vocabulário de morfemas: texto -> (classes, contagem f(m))

    Imutável depois de construído; atualizações devolvem uma nova instância.
    """

    def __init__(self, entries=None, min_support=2, min_root_len=4, min_affix_len=1):
        self.entries = dict(entries or {})
        self.min_support = min_support
        self.min_root_len = min_root_len
        self.min_affix_len = min_affix_len
        self.max_len = max((len(m) for m in self.entries), default=0)

    @classmethod
    def from_counts(cls, counts, **params):
        """Atalho: {morfema: (classes, contagem)} com classes em código ou conjunto"""
        entries = {}
        for text, (classes, count) in counts.items():
            if isinstance(classes, str):
                classes = parse_classes(classes)
            entries[text] = MorphemeEntry(frozenset(classes), int(count))
        return cls(entries, **params)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, text):
        return text in self.entries

    def __iter__(self):
        return iter(self.ordered())

    def __eq__(self, other):
        return isinstance(other, MorphemeVocab) and self.entries == other.entries

    def ordered(self):
        """Morfemas em ordem canônica (contagem decrescente, depois texto)"""
        return sorted(self.entries, key=lambda m: (-self.entries[m].count, m))

    def count(self, text, default=1):
        entry = self.entries.get(text)
        return entry.count if entry is not None else default

    def classes(self, text):
        entry = self.entries.get(text)
        return entry.classes if entry is not None else frozenset()

    def with_counts(self, counts):
        """Nova instância apenas com os morfemas de counts, com as novas contagens"""
        entries = {
            m: MorphemeEntry(self.entries[m].classes, int(c))
            for m, c in counts.items() if m in self.entries
        }
        return MorphemeVocab(entries, self.min_support, self.min_root_len, self.min_affix_len)

    def class_totals(self):
        totals = Counter()
        for entry in self.entries.values():
            for cls in entry.classes:
                totals[cls.value] += 1
        return totals

    def to_frame(self):
        rows = [
            (m, classes_code(self.entries[m].classes), self.entries[m].count)
            for m in self.ordered()
        ]
        return pd.DataFrame(rows, columns=['morpheme', 'classes', 'count'])


def affix_boundaries(trie, word):
    """Posições de corte em máximos locais estritos de entropia

    Para a árvore direta o corte i delimita o prefixo word[:i]; para a
    invertida delimita o sufixo word[i:]. Platôs não geram corte.

    Returns:
        list: posições estritamente crescentes em (0, |word|)
    """
    h = trie.profile(word)
    n = len(word)
    lengths = [
        i for i in range(1, n)
        if h[i] > h[i - 1] and h[i] > h[i + 1]
    ]
    if trie.direction == REVERSED:
        return sorted(n - k for k in lengths)
    return lengths


def word_affixes(forward, backward, word):
    """(prefixos, sufixos) candidatos de uma palavra"""
    prefixes = {word[:i] for i in affix_boundaries(forward, word)}
    suffixes = {word[i:] for i in affix_boundaries(backward, word)}
    return prefixes, suffixes


def roots_of(word, prefixes, suffixes):
    """Raízes obtidas removendo no máximo um prefixo e um sufixo"""
    roots = set()
    n = len(word)
    for p in [''] + sorted(prefixes):
        for s in [''] + sorted(suffixes):
            if len(p) + len(s) < n:
                roots.add(word[len(p):n - len(s)])
    return roots


def extract_roots(vocabulary, prefixes, suffixes):
    """Multiconjunto de raízes candidatas

    Args:
        vocabulary: Vocabulary
        prefixes: dict palavra -> conjunto de prefixos
        suffixes: dict palavra -> conjunto de sufixos

    Returns:
        Counter: raiz -> número de palavras que a geraram
    """
    raw = Counter()
    for word, _ in vocabulary:
        raw.update(roots_of(word, prefixes.get(word, ()), suffixes.get(word, ())))
    return raw


def substring_support(vocabulary, candidates, token_weighted=False):
    """Peso das palavras que contêm cada candidato como substring contígua

    Varre as substrings de cada palavra limitadas ao maior candidato, o que
    mantém o custo linear no tamanho do vocabulário.
    """
    if not candidates:
        return Counter()
    lengths = sorted({len(c) for c in candidates})
    shortest, longest = lengths[0], lengths[-1]
    support = Counter()
    for word, count in vocabulary:
        weight = count if token_weighted else 1
        n = len(word)
        seen = set()
        for i in range(n):
            for j in range(i + shortest, min(n, i + longest) + 1):
                piece = word[i:j]
                if piece in candidates:
                    seen.add(piece)
        for piece in seen:
            support[piece] += weight
    return support


@dataclass
class RawCandidates:
    """Candidatos agregados por papel, antes dos filtros"""

    prefixes: Counter
    suffixes: Counter
    roots: Counter
    words: frozenset = frozenset()
    occurrences: Counter = None


def finalize(raw, min_support=2, min_root_len=4, min_affix_len=1):
    """Aplica os filtros de suporte e comprimento por papel

    Uma entrada fica com os papéis aprovados e a maior contagem entre eles.
    Palavras do vocabulário só entram se ocorrerem em pelo menos duas palavras.

    Returns:
        MorphemeVocab
    """
    roles = (
        (MorphemeClass.PREFIX, raw.prefixes, min_affix_len),
        (MorphemeClass.SUFFIX, raw.suffixes, min_affix_len),
        (MorphemeClass.ROOT, raw.roots, min_root_len),
    )
    occurrences = raw.occurrences or Counter()
    kept = {}
    for cls, counts, min_len in roles:
        for text, count in counts.items():
            if count < min_support or len(text) < min_len:
                continue
            if text in raw.words and occurrences.get(text, count) < 2:
                continue
            classes, best = kept.get(text, (frozenset(), 0))
            kept[text] = (classes | {cls}, max(best, count))

    vocab = MorphemeVocab(
        {m: MorphemeEntry(c, n) for m, (c, n) in kept.items()},
        min_support=min_support, min_root_len=min_root_len, min_affix_len=min_affix_len,
    )
    if not len(vocab):
        logger.warning("Todos os candidatos foram filtrados: vocabulário de morfemas vazio")
    return vocab


def collect_candidates(vocabulary, forward, backward, token_weighted=False, min_root_len=1):
    """Candidatos e contagens por papel para o vocabulário inteiro

    Raízes mais curtas que min_root_len são descartadas antes da contagem.
    """
    prefixes, suffixes = {}, {}
    affix_p, affix_s = set(), set()
    for word, _ in vocabulary:
        p, s = word_affixes(forward, backward, word)
        prefixes[word], suffixes[word] = p, s
        affix_p |= p
        affix_s |= s

    emitted = {r for r in extract_roots(vocabulary, prefixes, suffixes) if len(r) >= min_root_len}
    root_counts = substring_support(vocabulary, emitted, token_weighted)
    # ocorrência em palavras distintas, para a regra de palavras inteiras
    occurrences = (
        substring_support(vocabulary, emitted) if token_weighted else root_counts
    )
    return RawCandidates(
        prefixes=Counter({p: forward.count(p) for p in affix_p}),
        suffixes=Counter({s: backward.count(s) for s in affix_s}),
        roots=root_counts,
        words=frozenset(vocabulary.words),
        occurrences=occurrences,
    )


def mine_morphemes(vocabulary, min_support=2, min_root_len=4, min_affix_len=1,
                   end_of_word=True, token_weighted=False):
    """Árvores -> fronteiras -> raízes -> filtros

    Returns:
        tuple: (MorphemeVocab, árvore direta, árvore invertida)
    """
    forward = build_trie(vocabulary, FORWARD, end_of_word, token_weighted)
    backward = build_trie(vocabulary, REVERSED, end_of_word, token_weighted)
    raw = collect_candidates(vocabulary, forward, backward, token_weighted, min_root_len)
    logger.info(
        f"Candidatos: {len(raw.prefixes)} prefixos, {len(raw.suffixes)} sufixos, "
        f"{len(raw.roots)} raízes"
    )
    vocab = finalize(raw, min_support, min_root_len, min_affix_len)
    logger.info(f"Vocabulário de morfemas: {len(vocab)} entradas")
    return vocab, forward, backward

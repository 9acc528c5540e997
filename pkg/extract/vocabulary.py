"""Vocabulário com contagens e índice de caracteres"""

import logging
import random
import unicodedata
from collections import Counter
from dataclasses import dataclass, field

import pandas as pd

logger = logging.getLogger(__name__)

WORD_LIST = 'word-list'
CORPUS = 'corpus'

# normalize converge em no máximo duas passagens na prática
_MAX_NORMALIZATION_PASSES = 4


class VocabularyError(ValueError):
    """Erro de leitura do vocabulário (linha malformada ou entrada vazia)"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


@dataclass(frozen=True)
class NormalizationPolicy:
    case_fold: bool = True
    unicode_nfc: bool = True

    @classmethod
    def from_config(cls, config):
        vocab = config.get('vocab', {})
        return cls(
            case_fold=vocab.get('case_fold', True),
            unicode_nfc=vocab.get('unicode_nfc', True),
        )


def _normalize_once(word, policy):
    if policy.unicode_nfc:
        word = unicodedata.normalize('NFC', word)
    if policy.case_fold:
        word = word.casefold()
        if policy.unicode_nfc:
            word = unicodedata.normalize('NFC', word)
    return word


def normalize(word, policy=NormalizationPolicy()):
    """Normaliza uma palavra (idempotente)

    Args:
        word: Sequência de caracteres
        policy: NormalizationPolicy com case-folding e NFC

    Returns:
        str: Palavra normalizada
    """
    word = word.strip()
    for _ in range(_MAX_NORMALIZATION_PASSES):
        normalized = _normalize_once(word, policy)
        if normalized == word:
            break
        word = normalized
    return word


@dataclass(frozen=True)
class Vocabulary:
    """Vocabulário imutável: palavras únicas, contagens e índice de caracteres

    As entradas ficam na ordem de primeira aparição; o índice de caracteres
    também (ids 1..C).
    """

    entries: tuple
    char_index: dict = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, '_counts', dict(self.entries))

    @classmethod
    def from_counts(cls, counts):
        """Constrói a partir de pares (palavra, contagem) em ordem"""
        merged = {}
        for word, count in counts:
            if count < 1:
                raise VocabularyError(f'contagem inválida para {word!r}: {count}')
            merged[word] = merged.get(word, 0) + count
        char_index = {}
        for word in merged:
            for ch in word:
                if ch not in char_index:
                    char_index[ch] = len(char_index) + 1
        return cls(entries=tuple(merged.items()), char_index=char_index)

    @property
    def words(self):
        return [word for word, _ in self.entries]

    @property
    def total_types(self):
        return len(self.entries)

    @property
    def char_count(self):
        return len(self.char_index)

    @property
    def total_tokens(self):
        return sum(count for _, count in self.entries)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, word):
        return word in self._counts

    def __iter__(self):
        return iter(self.entries)

    def count(self, word):
        return self._counts.get(word, 0)

    def weight(self, word, token_weighted=False):
        """Peso da palavra nas contagens: 1 por tipo ou a frequência de tokens"""
        return self._counts[word] if token_weighted else 1

    def subsample(self, n, seed=42):
        """Subamostra determinística de n palavras (preserva a ordem original)"""
        if n >= len(self.entries):
            return self
        rng = random.Random(seed)
        keep = set(rng.sample(range(len(self.entries)), n))
        return Vocabulary.from_counts(e for i, e in enumerate(self.entries) if i in keep)

    def to_frame(self):
        """DataFrame canônico: contagem decrescente, depois lexicográfico"""
        df = pd.DataFrame(list(self.entries), columns=['word', 'count'])
        return df.sort_values(['count', 'word'], ascending=[False, True], kind='mergesort').reset_index(drop=True)


def _parse_word_list(lines, policy):
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip('\r\n')
        if not line.strip():
            continue
        if '\t' in line:
            raw_word, raw_count = line.split('\t', 1)
            try:
                count = int(raw_count.strip())
            except ValueError:
                raise VocabularyError(f'contagem inválida {raw_count!r}', line=line_no) from None
            if count < 1:
                raise VocabularyError(f'contagem deve ser positiva: {count}', line=line_no)
        else:
            raw_word, count = line, 1
        word = normalize(raw_word, policy)
        if not word:
            raise VocabularyError('palavra vazia', line=line_no)
        if any(ch.isspace() for ch in word):
            raise VocabularyError(f'palavra contém espaço: {word!r}', line=line_no)
        yield word, count


def _parse_corpus(lines, policy):
    counts = Counter()
    for line in lines:
        for token in line.split():
            word = normalize(token, policy)
            if word:
                counts[word] += 1
    return counts.items()


def load_vocabulary(source, mode=WORD_LIST, policy=NormalizationPolicy()):
    """Lê uma lista de palavras ou um corpus bruto

    Args:
        source: Iterável de linhas de texto (arquivo aberto ou lista)
        mode: 'word-list' (word[<TAB>count]) ou 'corpus' (tokens por espaço)
        policy: NormalizationPolicy

    Returns:
        Vocabulary: Vocabulário deduplicado

    Raises:
        VocabularyError: linha malformada (com número da linha) ou entrada vazia
    """
    if mode == WORD_LIST:
        pairs = list(_parse_word_list(source, policy))
    elif mode == CORPUS:
        pairs = list(_parse_corpus(source, policy))
    else:
        raise VocabularyError(f'modo desconhecido: {mode}')

    if not pairs:
        raise VocabularyError('empty input')

    vocabulary = Vocabulary.from_counts(pairs)
    logger.info(
        f"Vocabulário carregado: {vocabulary.total_types} palavras, "
        f"{vocabulary.char_count} caracteres distintos"
    )
    return vocabulary

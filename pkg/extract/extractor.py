import csv
import logging
from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np
import pandas as pd

from evaluation.evaluator import AnalogyQuad, EvaluationError, GoldSegmentation, SimilarityPair
from extract.vocabulary import NormalizationPolicy, load_vocabulary, normalize
from transform.candidates import MorphemeVocab, parse_classes
from transform.pipeline import MorphForest, parse_bracketed

logger = logging.getLogger(__name__)


class ExtractionError(ValueError):
    """Arquivo ausente ou malformado"""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = str(path) if path is not None else ''
        if line is not None:
            where = f'{where}:{line}'
        super().__init__(f'{where}: {message}' if where else message)


def read_lines(path):
    """Linhas de um arquivo UTF-8 (LF ou CRLF)"""
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as f:
            return [line.rstrip('\r\n') for line in f]
    except FileNotFoundError:
        raise ExtractionError('arquivo não encontrado', path) from None
    except UnicodeDecodeError as e:
        raise ExtractionError(f'arquivo não é UTF-8: {e}', path) from None


def strip_tag(token, delimiter):
    """Remove a anotação após o delimitador (ex.: 'ism:+N' -> 'ism')"""
    if delimiter and delimiter in token:
        return token.split(delimiter, 1)[0]
    return token


def parse_alternatives(field, delimiter=':', policy=NormalizationPolicy()):
    """'alt1, alt2' -> tupla de tuplas de morfemas sem anotações"""
    alternatives = []
    for alt in field.split(','):
        morphs = tuple(
            normalize(strip_tag(m, delimiter), policy) for m in alt.split()
        )
        morphs = tuple(m for m in morphs if m)
        if morphs:
            alternatives.append(morphs)
    return tuple(alternatives)


class BaseExtractor(ABC):
    """Classe abstrata para implementar diferentes tipos de extração"""

    def __init__(self, config):
        """Inicializa o extrator com configurações

        Args:
            config: Dicionário com configurações
        """
        self.config = config

    @property
    def policy(self):
        return NormalizationPolicy.from_config(self.config)

    @abstractmethod
    def extract(self, path):
        """Lê e valida um artefato

        Args:
            path: Caminho do arquivo
        """
        pass


class VocabularyExtractor(BaseExtractor):
    """Vocabulário a partir de lista de palavras ou corpus bruto"""

    def extract(self, path):
        mode = self.config.get('vocab', {}).get('mode', 'word-list')
        logger.info(f"Lendo vocabulário ({mode}): {path}")
        return load_vocabulary(read_lines(path), mode, self.policy)


class CorpusExtractor(BaseExtractor):
    """Sentenças tokenizadas por espaço (uma por linha), normalizadas"""

    def extract(self, path):
        policy = self.policy
        sentences = []
        for line in read_lines(path):
            tokens = [normalize(t, policy) for t in line.split()]
            tokens = [t for t in tokens if t]
            if tokens:
                sentences.append(tokens)
        logger.info(f"Corpus lido: {len(sentences)} sentenças, {sum(map(len, sentences))} tokens")
        return sentences


class MorphemeVocabExtractor(BaseExtractor):
    """TSV morfema<TAB>classes<TAB>contagem"""

    def extract(self, path):
        path = Path(path)
        if not path.exists():
            raise ExtractionError('arquivo não encontrado', path)
        try:
            df = pd.read_csv(
                path, sep='\t', header=None, names=['morpheme', 'classes', 'freq'],
                dtype={'morpheme': str, 'classes': str}, quoting=csv.QUOTE_NONE,
                keep_default_na=False, encoding='utf-8',
            )
        except (ValueError, pd.errors.ParserError) as e:
            raise ExtractionError(f'vocabulário de morfemas malformado: {e}', path) from None

        counts = {}
        rows = zip(df['morpheme'], df['classes'], df['freq'])
        for i, (morpheme, code, freq) in enumerate(rows, start=1):
            try:
                count = int(freq)
                classes = parse_classes(code)
            except (TypeError, ValueError) as e:
                raise ExtractionError(str(e), path, i) from None
            if not morpheme or count < 1:
                raise ExtractionError(f'entrada inválida {morpheme!r}', path, i)
            counts[morpheme] = (classes, count)

        mine = self.config.get('mine', {})
        vocab = MorphemeVocab.from_counts(
            counts,
            min_support=mine.get('min_support', 2),
            min_root_len=mine.get('min_root_len', 4),
            min_affix_len=mine.get('min_affix_len', 1),
        )
        logger.info(f"Vocabulário de morfemas lido: {len(vocab)} entradas")
        return vocab


class GoldExtractor(BaseExtractor):
    """Padrão-ouro: palavra<TAB>alt1, alt2, ... com anotações removidas"""

    def extract(self, path):
        delimiter = self.config.get('eval', {}).get('tag_delimiter', ':')
        policy = self.policy
        gold = {}
        for i, line in enumerate(read_lines(path), start=1):
            if not line.strip():
                continue
            word, sep, rest = line.partition('\t')
            if not sep:
                raise ExtractionError('esperado palavra<TAB>segmentações', path, i)
            alternatives = parse_alternatives(rest, delimiter, policy)
            if not alternatives:
                raise ExtractionError(f'nenhuma segmentação para {word!r}', path, i)
            word = normalize(word, policy)
            gold[word] = gold.get(word, ()) + alternatives
        if not gold:
            raise ExtractionError('padrão-ouro vazio', path)
        try:
            entries = [GoldSegmentation(w, alts) for w, alts in gold.items()]
        except EvaluationError as e:
            raise ExtractionError(str(e), path) from None
        logger.info(f"Padrão-ouro lido: {len(entries)} palavras")
        return entries


class SegmentationExtractor(BaseExtractor):
    """Segmentações previstas, planas ou com parênteses

    Returns:
        dict: palavra -> lista de morfemas (plana) ou MorphForest (hierárquica)
    """

    def extract(self, path):
        delimiter = self.config.get('eval', {}).get('tag_delimiter', ':')
        policy = self.policy
        predictions = {}
        for i, line in enumerate(read_lines(path), start=1):
            if not line.strip():
                continue
            word, sep, rest = line.partition('\t')
            if not sep:
                raise ExtractionError('esperado palavra<TAB>segmentação', path, i)
            word = normalize(word, policy)
            rest = rest.strip()
            if rest.startswith('('):
                try:
                    predictions[word] = MorphForest(word, parse_bracketed(rest))
                except (ValueError, IndexError) as e:
                    raise ExtractionError(f'forma com parênteses inválida: {e}', path, i) from None
            else:
                alternatives = parse_alternatives(rest, delimiter, policy)
                predictions[word] = list(alternatives[0]) if alternatives else []
        logger.info(f"Segmentações lidas: {len(predictions)} palavras")
        return predictions


class SimilarityExtractor(BaseExtractor):
    """Pares palavra_a<TAB>palavra_b<TAB>nota; um cabeçalho não numérico é ignorado"""

    def extract(self, path):
        policy = self.policy
        pairs = []
        for i, line in enumerate(read_lines(path), start=1):
            if not line.strip() or line.startswith('#'):
                continue
            fields = line.split('\t') if '\t' in line else line.split()
            if len(fields) < 3:
                raise ExtractionError('esperado palavra_a<TAB>palavra_b<TAB>nota', path, i)
            try:
                score = float(fields[2])
            except ValueError:
                if i == 1:
                    continue
                raise ExtractionError(f'nota inválida {fields[2]!r}', path, i) from None
            try:
                pairs.append(SimilarityPair(normalize(fields[0], policy), normalize(fields[1], policy), score))
            except EvaluationError as e:
                raise ExtractionError(str(e), path, i) from None
        logger.info(f"Pares de similaridade lidos: {len(pairs)}")
        return pairs


class AnalogyExtractor(BaseExtractor):
    """Linhas 'a b c d'; linhas iniciadas por ':' abrem uma seção"""

    def extract(self, path):
        policy = self.policy
        quads = []
        section = ''
        for i, line in enumerate(read_lines(path), start=1):
            if not line.strip():
                continue
            if line.startswith(':'):
                section = line[1:].strip()
                continue
            fields = line.split()
            if len(fields) != 4:
                raise ExtractionError(f'esperadas 4 palavras, encontradas {len(fields)}', path, i)
            a, b, c, d = (normalize(f, policy) for f in fields)
            quads.append(AnalogyQuad(a, b, c, d, section))
        logger.info(f"Analogias lidas: {len(quads)}")
        return quads


class VectorExtractor(BaseExtractor):
    """Arquivo de vetores em texto: '<n> <dim>' seguido de 'token v1 ... vd'

    Returns:
        tuple: (lista de tokens, matriz n x dim)
    """

    def extract(self, path):
        lines = [line for line in read_lines(path) if line.strip()]
        if not lines:
            raise ExtractionError('arquivo de vetores vazio', path)
        try:
            count, dim = (int(x) for x in lines[0].split())
        except ValueError:
            raise ExtractionError('cabeçalho deve ser "<n> <dim>"', path, 1) from None
        if len(lines) - 1 != count:
            raise ExtractionError(f'cabeçalho anuncia {count} vetores, encontrados {len(lines) - 1}', path)

        tokens = []
        matrix = np.zeros((count, dim))
        for i, line in enumerate(lines[1:]):
            fields = line.split(' ')
            if len(fields) != dim + 1:
                raise ExtractionError(
                    f'dimensão {len(fields) - 1} diferente de {dim}', path, i + 2
                )
            tokens.append(fields[0])
            try:
                matrix[i] = np.array(fields[1:], dtype=np.float64)
            except ValueError:
                raise ExtractionError('valor não numérico', path, i + 2) from None
        logger.info(f"Vetores lidos: {count} x {dim} de {path}")
        return tokens, matrix

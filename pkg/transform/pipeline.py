"""Segmentação hierárquica, refinamento de contagens e ressegmentação global"""

import logging
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from transform.candidates import mine_morphemes
from transform.segmenter import MAX_SEGMENTATIONS, dp_segment, find_intervals, ml_select

logger = logging.getLogger(__name__)

USAGE_ALL = 'all'
USAGE_TOP = 'top'


@dataclass(frozen=True)
class MorphNode:
    text: str
    children: tuple = ()
    filler: bool = False

    @property
    def is_leaf(self):
        return not self.children

    def nodes(self):
        """Todos os nós em pré-ordem"""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self):
        if self.is_leaf:
            return [self.text]
        return [leaf for child in self.children for leaf in child.leaves()]

    def to_bracketed(self):
        text = _escape(self.text)
        if self.filler:
            return text
        if self.is_leaf:
            return f'({text})'
        return '(' + ' '.join(child.to_bracketed() for child in self.children) + ')'


@dataclass(frozen=True)
class MorphForest:
    """Árvore de segmentação de uma palavra (a raiz é a própria palavra)"""

    word: str
    root: MorphNode
    flagged: bool = False

    @property
    def flat_set(self):
        """Morfemas de todas as granularidades, incluindo a palavra, sem preenchimentos"""
        return {node.text for node in self.root.nodes() if not node.filler}

    @property
    def leaves(self):
        return self.root.leaves()

    @property
    def top(self):
        """Morfemas selecionados no primeiro nível"""
        return [child.text for child in self.root.children] or [self.word]

    def used(self, levels=USAGE_ALL):
        """Morfemas selecionados abaixo da raiz (sem preenchimentos)"""
        if levels == USAGE_TOP:
            nodes = self.root.children
        else:
            nodes = [n for n in self.root.nodes() if n is not self.root]
        return {n.text for n in nodes if not n.filler}

    def to_bracketed(self):
        return self.root.to_bracketed()


_TOKEN = re.compile(r'\(|\)|(?:\\.|[^\s()\\])+')
_SPECIAL = re.compile(r'([()\\])')
_ESCAPED = re.compile(r'\\(.)')


def _escape(text):
    # parênteses e barras dentro de uma palavra vão com barra invertida
    return _SPECIAL.sub(r'\\\1', text)


def parse_bracketed(text):
    """Lê a forma com parênteses de volta para um MorphNode

    Ex.: '((spati) o (temporal))' -> spatiotemporal com três filhos.
    """
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse():
        nonlocal pos
        token = tokens[pos]
        if token != '(':
            pos += 1
            return MorphNode(_ESCAPED.sub(r'\1', token), filler=True)
        pos += 1
        children = []
        while pos < len(tokens) and tokens[pos] != ')':
            children.append(parse())
        if pos >= len(tokens):
            raise ValueError(f'parênteses desbalanceados: {text!r}')
        pos += 1
        if len(children) == 1 and children[0].filler:
            return MorphNode(children[0].text)
        return MorphNode(''.join(c.text for c in children), tuple(children))

    if not tokens:
        raise ValueError('segmentação vazia')
    node = parse()
    if pos != len(tokens):
        raise ValueError(f'conteúdo após a raiz: {text!r}')
    return node


class Segmenter:
    """Segmentação recursiva contra um vocabulário de morfemas congelado"""

    def __init__(self, morpheme_vocab, training_mode=False, limit=MAX_SEGMENTATIONS):
        self.morpheme_vocab = morpheme_vocab
        self.training_mode = training_mode
        self.limit = limit
        self._cache = {}

    def select(self, text):
        """Segmentação escolhida para text, ou None se não houver intervalos"""
        intervals = find_intervals(text, self.morpheme_vocab)
        if not intervals:
            return None
        _, _, cands = dp_segment(text, intervals, self.limit)
        return ml_select(cands, self.morpheme_vocab, self.training_mode)

    def node(self, text):
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        flagged = False
        if len(text) < 2:
            node = MorphNode(text)
        else:
            best = self.select(text)
            if best is None:
                node = MorphNode(text)
            else:
                flagged = best.flagged
                children = []
                for piece, interval in best.morphemes:
                    if interval.is_filler:
                        children.append(MorphNode(piece, filler=True))
                    else:
                        child, child_flagged = self.node(piece)
                        children.append(child)
                        flagged = flagged or child_flagged
                node = MorphNode(text, tuple(children))
        self._cache[text] = (node, flagged)
        return node, flagged

    def segment(self, word):
        node, flagged = self.node(word)
        return MorphForest(word, node, flagged)


def segment_recursive(word, mv, training_mode=False):
    """Segmenta a palavra e, recursivamente, cada morfema escolhido

    Returns:
        MorphForest
    """
    if not word:
        raise ValueError('palavra vazia')
    return Segmenter(mv, training_mode).segment(word)


def refine_counts(segmentations, mv, prune_below=1, weights=None, levels=USAGE_ALL):
    """Recontagem pelo uso: quantas palavras usaram cada morfema

    A nova contagem é min(antiga, uso), então nunca aumenta; morfemas com
    uso abaixo de prune_below são removidos.

    Args:
        segmentations: dict palavra -> MorphForest
        mv: MorphemeVocab da passagem anterior
        prune_below: uso mínimo para manter o morfema
        weights: dict opcional palavra -> peso (padrão 1 por palavra)
        levels: 'all' (todos os níveis) ou 'top' (primeiro nível)

    Returns:
        MorphemeVocab
    """
    usage = Counter()
    for word, forest in segmentations.items():
        weight = weights.get(word, 1) if weights else 1
        for morpheme in forest.used(levels):
            if morpheme in mv:
                usage[morpheme] += weight

    refined = {
        m: min(mv.count(m), usage[m])
        for m in mv.entries
        if usage[m] >= prune_below
    }
    pruned = len(mv) - len(refined)
    logger.info(f"Refinamento: {len(refined)} morfemas mantidos, {pruned} removidos")
    return mv.with_counts(refined)


_worker_segmenter = None


def _init_worker(morpheme_vocab, training_mode, limit):
    global _worker_segmenter
    _worker_segmenter = Segmenter(morpheme_vocab, training_mode, limit)


def _segment_chunk(words):
    return [_worker_segmenter.segment(word) for word in words]


def segment_words(words, morpheme_vocab, training_mode=False, limit=MAX_SEGMENTATIONS, threads=1):
    """Segmenta uma lista de palavras; o resultado segue a ordem de entrada

    Com threads > 1 os blocos de palavras vão para processos separados.
    """
    words = list(words)
    if threads <= 1 or len(words) < 2 * threads:
        segmenter = Segmenter(morpheme_vocab, training_mode, limit)
        return {word: segmenter.segment(word) for word in words}

    size = -(-len(words) // (threads * 4))
    chunks = [words[i:i + size] for i in range(0, len(words), size)]
    forests = {}
    with ProcessPoolExecutor(
        max_workers=threads,
        initializer=_init_worker,
        initargs=(morpheme_vocab, training_mode, limit),
    ) as executor:
        for chunk, result in zip(chunks, executor.map(_segment_chunk, chunks)):
            forests.update(zip(chunk, result))
    return forests


@dataclass
class PipelineResult:
    morpheme_vocab: object
    forests: dict
    history: list = field(default_factory=list)
    flagged: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.morpheme_vocab, self.forests))


def run_pipeline(vocabulary, config, morpheme_vocab=None):
    """Mineração, passagem inicial, `rounds` refinamentos e passagem final

    A passagem inicial e as intermediárias usam modo de treino; a última
    passagem não. Com rounds=0 o resultado é a passagem inicial.

    Args:
        vocabulary: Vocabulary
        config: dict de configuração (seções mine, segment, trie, vocab, run)
        morpheme_vocab: MorphemeVocab já minerado (opcional)

    Returns:
        PipelineResult
    """
    mine = config.get('mine', {})
    seg = config.get('segment', {})
    token_weighted = config.get('vocab', {}).get('token_weighted', False)
    threads = config.get('run', {}).get('threads', 1)
    rounds = seg.get('rounds', 1)
    if rounds < 0:
        raise ValueError(f'rounds deve ser >= 0: {rounds}')
    limit = seg.get('max_segmentations', MAX_SEGMENTATIONS)

    if morpheme_vocab is None:
        morpheme_vocab, _, _ = mine_morphemes(
            vocabulary,
            min_support=mine.get('min_support', 2),
            min_root_len=mine.get('min_root_len', 4),
            min_affix_len=mine.get('min_affix_len', 1),
            end_of_word=config.get('trie', {}).get('end_of_word', True),
            token_weighted=token_weighted,
        )

    words = vocabulary.words
    weights = {w: vocabulary.weight(w, token_weighted) for w in words}
    history = []

    logger.info(f"Passagem 1/{rounds + 1}: segmentando {len(words)} palavras")
    forests = segment_words(words, morpheme_vocab, True, limit, threads)
    history.append({w: f.top for w, f in forests.items()})

    for r in range(1, rounds + 1):
        morpheme_vocab = refine_counts(
            forests, morpheme_vocab,
            prune_below=seg.get('prune_below', 1),
            weights=weights,
            levels=seg.get('usage_levels', USAGE_ALL),
        )
        training = r < rounds
        logger.info(f"Passagem {r + 1}/{rounds + 1}: ressegmentando (treino={training})")
        forests = segment_words(words, morpheme_vocab, training, limit, threads)
        history.append({w: f.top for w, f in forests.items()})

    flagged = [w for w, f in forests.items() if f.flagged]
    if flagged:
        logger.warning(f"{len(flagged)} palavras sem segmentação com morfemas compartilhados")
    return PipelineResult(morpheme_vocab, forests, history, flagged)

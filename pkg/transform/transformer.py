import logging
from abc import ABC, abstractmethod

from transform.candidates import mine_morphemes
from transform.pipeline import run_pipeline

logger = logging.getLogger(__name__)


class BaseTransformer(ABC):
    """Classe abstrata para implementar diferentes tipos de transformação"""

    def __init__(self, config):
        """Inicializa o transformador com configurações

        Args:
            config: Dicionário com configurações (seções vocab, trie, mine, segment, run)
        """
        self.config = config

    @abstractmethod
    def transform(self, data):
        """Método abstrato para transformação

        Args:
            data: Vocabulary de entrada
        """
        pass


class MorphemeMiner(BaseTransformer):
    """Árvores de entropia -> fronteiras -> raízes -> vocabulário de morfemas"""

    forward = None
    backward = None

    def transform(self, data):
        """Minera o vocabulário de morfemas

        Args:
            data: Vocabulary

        Returns:
            MorphemeVocab
        """
        mine = self.config.get('mine', {})
        logger.info(f"Minerando morfemas de {len(data)} palavras...")
        vocab, self.forward, self.backward = mine_morphemes(
            data,
            min_support=mine.get('min_support', 2),
            min_root_len=mine.get('min_root_len', 4),
            min_affix_len=mine.get('min_affix_len', 1),
            end_of_word=self.config.get('trie', {}).get('end_of_word', True),
            token_weighted=self.config.get('vocab', {}).get('token_weighted', False),
        )
        totals = vocab.class_totals()
        logger.info(
            f"Mineração concluída: {len(vocab)} morfemas "
            f"(P={totals.get('P', 0)}, S={totals.get('S', 0)}, R={totals.get('R', 0)})"
        )
        return vocab


class VocabularySegmenter(BaseTransformer):
    """Segmentação inicial, refinamentos e passagem final sobre o vocabulário"""

    def transform(self, data, morpheme_vocab=None):
        """Segmenta todas as palavras

        Args:
            data: Vocabulary
            morpheme_vocab: MorphemeVocab já minerado; minera quando ausente

        Returns:
            PipelineResult
        """
        if morpheme_vocab is None:
            morpheme_vocab = MorphemeMiner(self.config).transform(data)
        rounds = self.config.get('segment', {}).get('rounds', 1)
        logger.info(f"Segmentando {len(data)} palavras com {rounds} refinamento(s)...")
        result = run_pipeline(data, self.config, morpheme_vocab)
        logger.info(
            f"Segmentação concluída: {len(result.forests)} palavras, "
            f"{len(result.morpheme_vocab)} morfemas após refinamento"
        )
        return result

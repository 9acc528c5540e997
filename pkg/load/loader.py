import csv
import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path

import pandas as pd
from sqlalchemy import create_engine

logger = logging.getLogger(__name__)

VECTOR_FORMAT = '%.6f'


def vocabulary_frame(vocabulary):
    return vocabulary.to_frame()


def morpheme_frame(morpheme_vocab):
    return morpheme_vocab.to_frame()


def segmentation_frame(forests, hierarchical=False):
    """palavra + segmentação (folhas separadas por espaço ou forma com parênteses)"""
    rows = [
        (word, forest.to_bracketed() if hierarchical else ' '.join(forest.leaves))
        for word, forest in forests.items()
    ]
    return pd.DataFrame(rows, columns=['word', 'segmentation'])


def trie_frame(trie):
    """Despejo de depuração: chave na orientação da árvore, contagem e entropia"""
    rows = [(key, count, entropy) for key, count, entropy in trie.iter_nodes() if key]
    df = pd.DataFrame(rows, columns=['prefix', 'count', 'entropy_bits'])
    df['entropy_bits'] = df['entropy_bits'].map(lambda h: f'{h:.6f}')
    return df


def _open_target(destination):
    if destination is None or destination == '-':
        return sys.stdout, False
    if hasattr(destination, 'write'):
        return destination, False
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, 'w', encoding='utf-8', newline=''), True


class BaseLoader(ABC):
    """Classe abstrata para implementar diferentes tipos de carregamento"""

    def __init__(self, config):
        """Inicializa o loader com configurações

        Args:
            config: Dicionário com configurações de carregamento
        """
        self.config = config

    @abstractmethod
    def load(self, data, destination=None, table=None):
        """Método abstrato para carregamento de dados

        Args:
            data: pd.DataFrame a gravar
            destination: Caminho do arquivo (None ou '-' = stdout)
            table: Nome da tabela para destinos SQL
        """
        pass


class TSVLoader(BaseLoader):
    """Loader para TSV sem cabeçalho, LF, ordem do DataFrame"""

    def load(self, data, destination=None, table=None, header=False):
        target, close = _open_target(destination)
        try:
            data.to_csv(
                target, sep='\t', index=False, header=header,
                quoting=csv.QUOTE_NONE, lineterminator='\n',
            )
        except OSError as e:
            logger.error(f"Erro ao salvar TSV {destination}: {e}")
            raise
        finally:
            if close:
                target.close()
        if close:
            logger.info(f"TSV salvo: {destination} ({len(data)} linhas)")


class SQLiteLoader(BaseLoader):
    """Loader para exportar tabelas via SQLAlchemy"""

    def load(self, data, destination=None, table=None):
        db_url = self.config.get('database', {}).get('url', 'sqlite:///output/morphemes.db')
        if db_url.startswith('sqlite:///'):
            Path(db_url[len('sqlite:///'):]).parent.mkdir(parents=True, exist_ok=True)
        table = table or 'results'
        try:
            engine = create_engine(db_url)
            logger.info(f"Inserindo {len(data)} registros na tabela '{table}'")
            data.to_sql(table, con=engine, if_exists='replace', index=False)
            engine.dispose()
        except Exception as e:
            logger.error(f"Erro ao salvar no banco {db_url}: {e}")
            raise


class VectorLoader(BaseLoader):
    """Vetores em texto: '<n> <dim>' e depois 'token v1 ... vd' com 6 casas"""

    def load(self, data, destination=None, table=None):
        tokens, matrix = data
        frame = pd.DataFrame(matrix, index=list(tokens))
        target, close = _open_target(destination)
        try:
            target.write(f'{matrix.shape[0]} {matrix.shape[1]}\n')
            frame.to_csv(
                target, sep=' ', header=False, float_format=VECTOR_FORMAT,
                quoting=csv.QUOTE_NONE, lineterminator='\n',
            )
        finally:
            if close:
                target.close()
        logger.info(f"Vetores salvos: {destination} ({matrix.shape[0]} x {matrix.shape[1]})")


class DataLoader(BaseLoader):
    """Loader de dados - TSV, SQLite ou ambos conforme configuração"""

    def load(self, data, destination=None, table=None):
        """Grava o DataFrame nos destinos configurados

        Args:
            data: pd.DataFrame
            destination: Caminho do TSV (None ou '-' = stdout)
            table: Nome da tabela para o destino SQLite
        """
        if data.empty:
            logger.warning("Dados vazios recebidos para carregamento")

        destination_type = self.config.get('load', {}).get('destination_type', 'tsv')

        if destination_type in ('tsv', 'both'):
            TSVLoader(self.config).load(data, destination)

        if destination_type in ('sqlite', 'both'):
            SQLiteLoader(self.config).load(data, table=table)

        if destination_type not in ('tsv', 'sqlite', 'both'):
            raise ValueError(f"Tipo de destino desconhecido: {destination_type}")

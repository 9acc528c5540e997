"""Fixtures compartilhadas e perfis do hypothesis"""

import os
import sys
from pathlib import Path

import hypothesis
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

hypothesis.settings.register_profile('fast', max_examples=20, deadline=None)
hypothesis.settings.register_profile('ci', max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'fast'))


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='roda os testes de tempo')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: testes de desempenho (use --runslow)')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='use --runslow para rodar')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def config():
    """Configuração padrão completa"""
    from config.settings import load_config
    return load_config()


@pytest.fixture
def spatio_words():
    return [
        'spatiotemporal', 'spatial', 'spatium', 'spatie', 'spam', 'span', 'spark', 'spy',
        'temporal', 'bitemporal', 'atemporal', 'animal', 'final',
    ]


@pytest.fixture
def spatio_vocab(spatio_words):
    from extract.vocabulary import Vocabulary
    return Vocabulary.from_counts((w, 1) for w in spatio_words)

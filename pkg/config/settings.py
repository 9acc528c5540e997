"""Configurações centralizadas do pipeline de morfemas"""

import copy
import os
from pathlib import Path
from dotenv import dotenv_values, load_dotenv

# Carregar variáveis de ambiente
env_file = Path(__file__).parent.parent / '.env'
if env_file.exists():
    load_dotenv(env_file)


DEFAULTS = {
    # Ingestão do vocabulário
    'vocab': {
        'mode': 'word-list',
        'case_fold': True,
        'unicode_nfc': True,
        'token_weighted': False,
    },

    # Árvores de prefixos
    'trie': {
        'end_of_word': True,
    },

    # Mineração do vocabulário de morfemas
    'mine': {
        'min_support': 2,
        'min_root_len': 4,
        'min_affix_len': 1,
    },

    # Segmentação e ressegmentação global
    'segment': {
        'rounds': 1,
        'prune_below': 1,
        'max_segmentations': 256,
        'usage_levels': 'all',
    },

    # Embeddings skip-gram enriquecidos com morfemas
    'embed': {
        'dim': 100,
        'window': 5,
        'negatives': 5,
        'lr': 0.025,
        'epochs': 5,
        'min_count': 1,
    },

    # Avaliação
    'eval': {
        'average': 'micro',
        'all_granularities': False,
        'tag_delimiter': ':',
        'oov_policy': 'infer',
    },

    # Configurações de Carregamento
    'load': {
        'destination_type': 'tsv',
    },

    # Configurações de Banco de Dados
    'database': {
        'url': 'sqlite:///output/morphemes.db',
    },

    'run': {
        'seed': 42,
        'threads': 1,
    },
}

CHOICES = {
    ('vocab', 'mode'): ('word-list', 'corpus'),
    ('segment', 'usage_levels'): ('all', 'top'),
    ('eval', 'average'): ('micro', 'macro'),
    ('eval', 'oov_policy'): ('infer', 'skip'),
    ('load', 'destination_type'): ('tsv', 'sqlite', 'both'),
}

MINIMUMS = {
    ('mine', 'min_support'): 1,
    ('mine', 'min_root_len'): 1,
    ('mine', 'min_affix_len'): 1,
    ('segment', 'rounds'): 0,
    ('segment', 'prune_below'): 1,
    ('segment', 'max_segmentations'): 1,
    ('embed', 'dim'): 1,
    ('embed', 'window'): 1,
    ('embed', 'negatives'): 0,
    ('embed', 'lr'): 0.0,
    ('embed', 'epochs'): 1,
    ('embed', 'min_count'): 1,
    ('run', 'seed'): 0,
    ('run', 'threads'): 1,
}

_TRUE = ('true', '1', 'yes', 'on')
_FALSE = ('false', '0', 'no', 'off')


class ConfigError(ValueError):
    """Erro de configuração com todos os problemas encontrados"""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__('; '.join(self.errors))


def env_name(section, key):
    """Nome da variável de ambiente (ex.: MINE_MIN_SUPPORT)"""
    return f'{section}_{key}'.upper()


KNOWN_KEYS = {env_name(s, k) for s, values in DEFAULTS.items() for k in values}


def _coerce(raw, default):
    """Converte texto vindo de ambiente/arquivo para o tipo do default"""
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    if isinstance(default, bool):
        if text.lower() in _TRUE:
            return True
        if text.lower() in _FALSE:
            return False
        raise ValueError(f'valor booleano inválido: {raw!r}')
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def _apply(config, source, origin, errors):
    """Aplica pares SECTION_KEY=valor sobre a configuração"""
    for section, values in DEFAULTS.items():
        for key, default in values.items():
            name = env_name(section, key)
            if name not in source or source[name] is None:
                continue
            try:
                config[section][key] = _coerce(source[name], default)
            except ValueError as e:
                errors.append(f'{origin} {name}: {e}')


def load_config(config_file=None, overrides=None):
    """Carrega configurações do ambiente, arquivo e flags

    Precedência: defaults < ambiente < arquivo key=value < overrides.

    Args:
        config_file: Caminho opcional para arquivo key=value
        overrides: dict {(section, key): valor} vindo da linha de comando

    Returns:
        dict: Dicionário com configurações validadas

    Raises:
        ConfigError: com a lista completa de problemas
    """
    config = copy.deepcopy(DEFAULTS)
    errors = []

    _apply(config, os.environ, 'ambiente', errors)

    if config_file is not None:
        path = Path(config_file)
        if not path.exists():
            errors.append(f'arquivo de configuração não encontrado: {path}')
        else:
            values = dotenv_values(path)
            for name in values:
                if name not in KNOWN_KEYS:
                    errors.append(f'{path}: chave desconhecida {name}')
            _apply(config, values, str(path), errors)

    for (section, key), value in (overrides or {}).items():
        if value is None:
            continue
        if section not in config or key not in config[section]:
            errors.append(f'chave desconhecida: {section}.{key}')
            continue
        try:
            config[section][key] = _coerce(value, DEFAULTS[section][key])
        except ValueError as e:
            errors.append(f'flag {section}.{key}: {e}')

    errors.extend(validation_errors(config))
    if errors:
        raise ConfigError(errors)
    return config


def validation_errors(config):
    """Lista todos os problemas de tipo e faixa da configuração"""
    errors = []
    for section, values in DEFAULTS.items():
        for key, default in values.items():
            value = config.get(section, {}).get(key)
            expected = type(default)
            if expected is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
                config[section][key] = value
            if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
                errors.append(f'{section}.{key}: esperado {expected.__name__}, recebido {value!r}')
                continue
            allowed = CHOICES.get((section, key))
            if allowed and value not in allowed:
                errors.append(f'{section}.{key}: {value!r} fora de {allowed}')
            minimum = MINIMUMS.get((section, key))
            if minimum is not None and value < minimum:
                errors.append(f'{section}.{key}: deve ser >= {minimum}, recebido {value}')
    return errors


def validate_config(config):
    """Valida uma configuração já montada

    Raises:
        ConfigError: se houver qualquer problema
    """
    errors = validation_errors(config)
    if errors:
        raise ConfigError(errors)
    return config

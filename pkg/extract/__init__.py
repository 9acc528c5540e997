"""Módulo de Extração de Dados

Responsável por ler e validar os artefatos de entrada:
- Listas de palavras e corpora brutos
- Vocabulários de morfemas e segmentações
- Padrões-ouro, pares de similaridade e analogias
- Arquivos de vetores
"""

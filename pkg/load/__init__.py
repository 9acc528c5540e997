"""Módulo de Carregamento de Dados

Responsável por gravar os artefatos em múltiplos destinos:
- Arquivos TSV determinísticos
- Banco SQLite (SQLAlchemy)
- Arquivos de vetores em texto
"""

"""Módulo de Avaliação

Mede a qualidade das saídas do pipeline:
- Segmentações contra padrões-ouro (P/R/F1)
- Similaridade de palavras (Spearman)
- Analogias (3CosAdd)
"""

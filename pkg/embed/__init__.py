"""Módulo de Embeddings

Vetores de palavras enriquecidos com morfemas:
- Skip-gram com amostragem negativa
- Pontuação pela soma dos vetores de morfemas
- Inferência de vetores para palavras fora do vocabulário
"""

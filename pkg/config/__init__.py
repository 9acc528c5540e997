"""Módulo de Configurações

Gerencia configurações do pipeline:
- Variáveis de ambiente e arquivo key=value
- Limiares de mineração e segmentação
- Hiperparâmetros de embeddings e avaliação
"""

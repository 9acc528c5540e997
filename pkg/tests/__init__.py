"""Módulo de Testes

Contém testes unitários, de propriedades e de integração do pipeline de morfemas
"""

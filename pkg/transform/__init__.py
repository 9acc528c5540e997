"""Módulo de Transformação

Responsável pela indução de morfemas:
- Árvores de prefixos com entropia de transição
- Candidatos a prefixos, sufixos e raízes
- Segmentação parcimoniosa por programação dinâmica
- Refinamento global das contagens
"""

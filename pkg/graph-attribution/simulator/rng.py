"""
Streams de números aleatórios por (path, tipo, propósito[, faixa]).

Cada stream é derivado do seed mestre via SeedSequence com spawn_key,
então desabilitar um tipo nunca altera os sorteios de outro tipo.
"""

import numpy as np

PURPOSE_FIRM = 0
PURPOSE_CUSTOMER = 1
PURPOSE_THINNING = 2


def stream(master_seed: int, path_index: int, type_index: int, purpose: int, *extra: int) -> np.random.Generator:
    """Generator determinístico para a tupla (path, tipo, propósito, *extra)."""
    key = (int(path_index), int(type_index), int(purpose), *(int(k) for k in extra))
    seq = np.random.SeedSequence(master_seed, spawn_key=key)
    return np.random.default_rng(seq)


def derived_seed(master_seed: int, *key: int) -> int:
    """Seed inteiro de 64 bits derivado de (seed mestre, chave)."""
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, dtype=np.uint64)[0])

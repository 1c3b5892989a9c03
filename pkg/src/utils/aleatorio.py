"""
Fluxos pseudoaleatórios reprodutíveis.

Uma única semente de 64 bits gera fluxos independentes com o gerador
baseado em contador Philox, o que garante os mesmos números em qualquer
plataforma e qualquer ordem de execução das threads.
"""
from typing import List

import numpy as np

ALGORITMO = "Philox"


def criar_geradores(semente: int, quantidade: int) -> List[np.random.Generator]:
    """
    Cria ``quantidade`` geradores independentes a partir da semente.

    Args:
        semente: Semente de 64 bits.
        quantidade: Número de fluxos.

    Returns:
        Lista de geradores numpy na ordem dos filhos da SeedSequence.
    """
    filhos = np.random.SeedSequence(int(semente)).spawn(quantidade)
    return [np.random.Generator(np.random.Philox(filho)) for filho in filhos]


def criar_gerador(semente: int) -> np.random.Generator:
    return criar_geradores(semente, 1)[0]

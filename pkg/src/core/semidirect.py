"""
Modelo em coordenadas do produto semidireto R² ⋉_A R.

Pontos são triplas (x, y, z); a lei de grupo é
(p, z) ⋆ (q, w) = (p + e^{zA} q, z + w). O referencial ortonormal
invariante à esquerda é formado pelas colunas de e^{zA} (E1, E2) e por ∂z
(E3). Qualquer matriz 2x2 é aceita, não apenas A(a, b), de modo que a
família diag(1, c) (Sol₃ em c = -1) passa pelo mesmo código.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from src.core import config
from src.core.exceptions import ParameterOutOfRangeError
from src.core.lie_algebra import (
    ConnectionTable,
    Family,
    NonUnimodularParams,
    StructureConstants,
    branch_tolerance,
)

logger = logging.getLogger(__name__)

Matrix2 = np.ndarray


@dataclass(frozen=True)
class GroupPoint:
    x: float
    y: float
    z: float

    @classmethod
    def from_iterable(cls, valores: Iterable[float]) -> "GroupPoint":
        x, y, z = (float(v) for v in valores)
        return cls(x, y, z)

    @property
    def plane(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


PointMap = Callable[[GroupPoint], GroupPoint]


@dataclass(frozen=True)
class AmbientFamily:
    """
    Família geométrica reconhecida numa matriz A.

    ``frame`` tem nas linhas o referencial em que as fórmulas da família
    valem, escrito no referencial {E1, E2, E3} do modelo (identidade para
    A(a, b)).
    """

    family: Family
    frame: np.ndarray

    def to_family_frame(self, v: np.ndarray) -> np.ndarray:
        return self.frame @ np.asarray(v, dtype=float)


def as_matrix2(A) -> np.ndarray:
    matriz = np.asarray(A, dtype=float)
    if matriz.shape != (2, 2):
        raise ParameterOutOfRangeError(f"A matriz do modelo deve ser 2x2 (recebido {matriz.shape})")
    if not np.all(np.isfinite(matriz)):
        raise ParameterOutOfRangeError("A matriz do modelo contém entradas não finitas")
    return matriz


def matrix_exp(A: Matrix2, z: float) -> np.ndarray:
    """
    Calcula e^{zA}.

    Matrizes diagonais usam a forma fechada; as demais vão para
    ``scipy.linalg.expm`` (Padé com escalonamento e quadrados).
    """
    A = as_matrix2(A)
    if A[0, 1] == 0.0 and A[1, 0] == 0.0:
        return np.diag(np.exp(z * np.diag(A)))
    return expm(z * A)


def multiply(A: Matrix2, p: GroupPoint, q: GroupPoint) -> GroupPoint:
    plano = p.plane + matrix_exp(A, p.z) @ q.plane
    return GroupPoint(plano[0], plano[1], p.z + q.z)


def inverse(A: Matrix2, p: GroupPoint) -> GroupPoint:
    plano = -(matrix_exp(A, -p.z) @ p.plane)
    return GroupPoint(plano[0], plano[1], -p.z)


def frame_matrix(A: Matrix2, z: float) -> np.ndarray:
    """Matriz 3x3 cujas colunas são E1, E2, E3 na base coordenada."""
    F = np.zeros((3, 3))
    F[:2, :2] = matrix_exp(A, z)
    F[2, 2] = 1.0
    return F


def frame_at(A: Matrix2, p: GroupPoint) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    F = frame_matrix(A, p.z)
    return F[:, 0], F[:, 1], F[:, 2]


def metric_at(A: Matrix2, p: GroupPoint) -> np.ndarray:
    """Forma G(z)^{-T} G(z)^{-1} ⊕ 1 que torna o referencial ortonormal."""
    G_inv = matrix_exp(A, -p.z)
    g = np.zeros((3, 3))
    g[:2, :2] = G_inv.T @ G_inv
    g[2, 2] = 1.0
    return g


def coordinate_to_frame(A: Matrix2, p: GroupPoint, v: Sequence[float]) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    plano = matrix_exp(A, -p.z) @ v[:2]
    return np.array([plano[0], plano[1], v[2]])


def frame_to_coordinate(A: Matrix2, p: GroupPoint, w: Sequence[float]) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    plano = matrix_exp(A, p.z) @ w[:2]
    return np.array([plano[0], plano[1], w[2]])


def left_translate_map(A: Matrix2, g: GroupPoint) -> PointMap:
    """Translação à esquerda q ↦ g ⋆ q."""
    A = as_matrix2(A)

    def transladar(q: GroupPoint) -> GroupPoint:
        return multiply(A, g, q)

    return transladar


def _passos(ponto: np.ndarray, h: float) -> np.ndarray:
    return h * np.maximum(1.0, np.abs(ponto))


def jacobian_fd(mapping: PointMap, q: GroupPoint, h: float = config.PASSO_FD) -> np.ndarray:
    """Jacobiano por diferenças centrais, passo h·max(1, |coordenada|)."""
    base = q.as_array()
    passos = _passos(base, h)
    J = np.zeros((3, 3))
    for k in range(3):
        deslocamento = np.zeros(3)
        deslocamento[k] = passos[k]
        frente = mapping(GroupPoint.from_iterable(base + deslocamento)).as_array()
        tras = mapping(GroupPoint.from_iterable(base - deslocamento)).as_array()
        J[:, k] = (frente - tras) / (2.0 * passos[k])
    return J


def isometry_defect(
    A: Matrix2,
    mapping: PointMap,
    q: GroupPoint,
    vectors: Optional[Sequence[Sequence[float]]] = None,
    h: float = config.PASSO_FD,
) -> float:
    """
    Maior discrepância entre a métrica em q e o pullback da métrica em mapping(q).

    Args:
        A: Matriz do modelo.
        mapping: Transformação de pontos a testar.
        q: Ponto base.
        vectors: Vetores coordenados testados aos pares (padrão: base coordenada).
        h: Passo relativo das diferenças finitas.

    Returns:
        float: max |<J u, J v>_{f(q)} - <u, v>_q| sobre os pares.
    """
    J = jacobian_fd(mapping, q, h)
    imagem = mapping(q)
    diferenca = J.T @ metric_at(A, imagem) @ J - metric_at(A, q)
    if vectors is None:
        return float(np.max(np.abs(diferenca)))
    V = np.asarray(vectors, dtype=float).T
    return float(np.max(np.abs(V.T @ diferenca @ V)))


def connection_from_metric(A: Matrix2, p: GroupPoint, h: float = config.PASSO_FD) -> ConnectionTable:
    """
    Conexão de Levi-Civita obtida só da métrica, expressa no referencial.

    Símbolos de Christoffel e derivadas dos campos E_j vêm de diferenças
    centrais; nenhum dado da tabela algébrica é usado.
    """
    A = as_matrix2(A)
    base = p.as_array()
    passos = _passos(base, h)

    derivadas_g = np.zeros((3, 3, 3))
    derivadas_F = np.zeros((3, 3, 3))
    for k in range(3):
        deslocamento = np.zeros(3)
        deslocamento[k] = passos[k]
        frente = GroupPoint.from_iterable(base + deslocamento)
        tras = GroupPoint.from_iterable(base - deslocamento)
        derivadas_g[k] = (metric_at(A, frente) - metric_at(A, tras)) / (2.0 * passos[k])
        derivadas_F[k] = (frame_matrix(A, frente.z) - frame_matrix(A, tras.z)) / (2.0 * passos[k])

    g = metric_at(A, p)
    g_inv = np.linalg.inv(g)
    # christoffel[m, i, j] = Γ^m_{ij}
    christoffel = 0.5 * (
        np.einsum("ml,ilj->mij", g_inv, derivadas_g)
        + np.einsum("ml,jli->mij", g_inv, derivadas_g)
        - np.einsum("ml,lij->mij", g_inv, derivadas_g)
    )

    F = frame_matrix(A, p.z)
    gamma = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            derivada_direcional = np.einsum("a,am->m", F[:, i], derivadas_F[:, :, j])
            covariante = derivada_direcional + np.einsum("mab,a,b->m", christoffel, F[:, i], F[:, j])
            for k in range(3):
                gamma[i, j, k] = covariante @ g @ F[:, k]
    return ConnectionTable(gamma)


def unimodular_frame(A: Matrix2) -> Tuple[StructureConstants, np.ndarray]:
    """
    Referencial em que um modelo de traço nulo tem [X, Y] = L(X × Y) com L diagonal.

    Returns:
        (constantes de estrutura em ordem decrescente, matriz de rotação cujas
        linhas são o novo referencial escrito em {E1, E2, E3}, com det = +1).

    Raises:
        ParameterOutOfRangeError: Se o traço de A não for nulo.
    """
    A = as_matrix2(A)
    if abs(np.trace(A)) > branch_tolerance(A.ravel()):
        raise ParameterOutOfRangeError(f"O modelo não é unimodular: traço de A = {np.trace(A)}")

    L = np.array([
        [-A[0, 1], A[0, 0], 0.0],
        [-A[1, 1], A[1, 0], 0.0],
        [0.0, 0.0, 0.0],
    ])
    L = 0.5 * (L + L.T)
    autovalores, autovetores = np.linalg.eigh(L)
    ordem = np.argsort(-autovalores, kind="stable")
    autovalores = autovalores[ordem] + 0.0
    linhas = autovetores[:, ordem].T.copy()

    for linha in linhas:
        indice = int(np.argmax(np.abs(linha) > 1e-12))
        if linha[indice] < 0:
            linha *= -1.0
    if np.linalg.det(linhas) < 0:
        linhas[2] *= -1.0

    return StructureConstants.from_iterable(autovalores), linhas


def ambient_family(A: Matrix2) -> Optional[AmbientFamily]:
    """
    Reconhece a família geométrica de um modelo.

    Traço 2 na forma A(a, b) com a, b ≥ 0 dá o grupo não unimodular;
    traço nulo dá o grupo unimodular no referencial de
    :func:`unimodular_frame`; qualquer outra matriz devolve None.
    """
    A = as_matrix2(A)
    tol = branch_tolerance(A.ravel())
    traco = np.trace(A)

    if abs(traco) <= tol:
        constantes, rotacao = unimodular_frame(A)
        return AmbientFamily(constantes, rotacao)

    if abs(traco - 2.0) <= tol:
        a = 0.5 * (A[0, 0] - A[1, 1])
        b = A[1, 0] / (1.0 + a) if abs(1.0 + a) > tol else np.nan
        if np.isfinite(b) and abs(A[0, 1] + (1.0 - a) * b) <= tol and a >= -tol and b >= -tol:
            parametros = NonUnimodularParams(max(a, 0.0), max(b, 0.0))
            return AmbientFamily(parametros, np.eye(3))

    logger.debug(f"Matriz sem família reconhecida: {A.tolist()}")
    return None

"""
Camada algébrica dos grupos de Lie métricos tridimensionais.

Constantes de estrutura, colchetes, tabelas da conexão de Levi-Civita,
tensores de curvatura e os invariantes escalares (beta, delta, rho) das
duas famílias: grupos unimodulares e produtos semidiretos não unimodulares
R² ⋉_A(a,b) R.

Vetores da álgebra são arrays numpy de três componentes no referencial
ortonormal invariante à esquerda {E1, E2, E3}. Os índices dos arrays
começam em zero: ``gamma[0, 1, 2]`` é <∇_{E1} E2, E3>.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial, singledispatch
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from src.core import config
from src.core.exceptions import ParameterOutOfRangeError

logger = logging.getLogger(__name__)

AlgebraVector = np.ndarray
Bracket = Callable[[np.ndarray, np.ndarray], np.ndarray]

BASE = np.eye(3)

# Assinaturas (positivos, negativos, nulos) depois da normalização de sinal
GROUP_LABELS: Dict[Tuple[int, int, int], str] = {
    (3, 0, 0): "SU(2)",
    (2, 1, 0): "SL̃₂(ℝ)",
    (2, 0, 1): "Ẽ(2)",
    (1, 1, 1): "Sol₃",
    (1, 0, 2): "Nil₃",
    (0, 0, 3): "ℝ³",
}


@dataclass(frozen=True)
class StructureConstants:
    """Constantes (c1, c2, c3) de [E1,E2]=c3E3, [E2,E3]=c1E1, [E3,E1]=c2E2."""

    c1: float
    c2: float
    c3: float

    @classmethod
    def from_iterable(cls, valores: Iterable[float]) -> "StructureConstants":
        c1, c2, c3 = (float(v) for v in valores)
        return cls(c1, c2, c3)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)


@dataclass(frozen=True)
class MuTriple:
    mu1: float
    mu2: float
    mu3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.mu1, self.mu2, self.mu3], dtype=float)


@dataclass(frozen=True)
class NonUnimodularParams:
    """Par (a, b) que define a matriz A(a, b) do produto semidireto."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ParameterOutOfRangeError(
                f"Parâmetros não finitos: a={self.a}, b={self.b}"
            )
        if self.a < 0 or self.b < 0:
            raise ParameterOutOfRangeError(
                f"O grupo não unimodular exige a ≥ 0 e b ≥ 0 (recebido a={self.a}, b={self.b})"
            )


Family = Union[StructureConstants, NonUnimodularParams]


@dataclass(frozen=True)
class ConnectionTable:
    """Os 27 coeficientes gamma[i, j, k] = <∇_{E_i} E_j, E_k>."""

    gamma: np.ndarray

    def covariant(self, x: AlgebraVector, y: AlgebraVector) -> np.ndarray:
        """∇_x y para campos invariantes à esquerda (coeficientes constantes)."""
        return np.einsum("i,j,ijk->k", x, y, self.gamma)

    def perturbed(self, indice: Tuple[int, int, int], delta: float) -> "ConnectionTable":
        gamma = self.gamma.copy()
        gamma[indice] += delta
        return ConnectionTable(gamma)


@dataclass(frozen=True)
class ConnectionReport:
    metric_violation: float
    torsion_violation: float

    @property
    def max_violation(self) -> float:
        return max(self.metric_violation, self.torsion_violation)


@dataclass(frozen=True)
class InvariantScalars:
    beta1: float
    beta2: float
    beta3: float
    delta: float
    rho: float
    grad_bound_a: Optional[float]

    @property
    def beta(self) -> np.ndarray:
        return np.array([self.beta1, self.beta2, self.beta3])

    @property
    def grad_bound_defined(self) -> bool:
        return self.grad_bound_a is not None

    def to_dict(self) -> Dict[str, object]:
        return {
            "beta": [float(self.beta1), float(self.beta2), float(self.beta3)],
            "delta": float(self.delta),
            "rho": float(self.rho),
            "grad_bound_a": None if self.grad_bound_a is None else float(self.grad_bound_a),
        }


@dataclass(frozen=True)
class NormalizedConstants:
    """
    Constantes em ordem c3 ≤ c2 ≤ c1 e o registro de como chegar nelas.

    ``frame`` tem nas linhas os vetores do referencial normalizado escritos
    no referencial original; a orientação é corrigida para que as relações
    de colchete continuem valendo com as constantes normalizadas.
    """

    constants: StructureConstants
    permutation: Tuple[int, int, int]
    flipped: bool
    frame: np.ndarray
    tolerance: float

    def to_original(self, v: AlgebraVector) -> np.ndarray:
        return self.frame.T @ np.asarray(v, dtype=float)


# ---------------------------------------------------------------------------
# Tolerâncias de ramo
# ---------------------------------------------------------------------------

def branch_tolerance(valores: Iterable[float], exact: bool = False) -> float:
    """Tolerância relativa usada nas comparações discretas dos classificadores."""
    if exact:
        return 0.0
    escala = max([1.0] + [abs(float(v)) for v in valores])
    return config.TOLERANCIA_RAMO * escala


def _contagem_sinais(valores: np.ndarray, tol: float) -> Tuple[int, int, int]:
    positivos = int(np.sum(valores > tol))
    negativos = int(np.sum(valores < -tol))
    return positivos, negativos, len(valores) - positivos - negativos


# ---------------------------------------------------------------------------
# Família unimodular
# ---------------------------------------------------------------------------

def mu_from_c(c: StructureConstants) -> MuTriple:
    return MuTriple(
        0.5 * (-c.c1 + c.c2 + c.c3),
        0.5 * (c.c1 - c.c2 + c.c3),
        0.5 * (c.c1 + c.c2 - c.c3),
    )


def c_from_mu(mu: MuTriple) -> StructureConstants:
    """Inversa linear de :func:`mu_from_c`."""
    return StructureConstants(mu.mu2 + mu.mu3, mu.mu1 + mu.mu3, mu.mu1 + mu.mu2)


def bracket_unimodular(c: StructureConstants, x: AlgebraVector, y: AlgebraVector) -> np.ndarray:
    """[x, y] = L(x ∧ y) com L = diag(c1, c2, c3)."""
    return c.as_array() * np.cross(x, y)


def connection_unimodular(c: StructureConstants) -> ConnectionTable:
    mu1, mu2, mu3 = mu_from_c(c).as_array()
    gamma = np.zeros((3, 3, 3))
    gamma[0, 1, 2], gamma[0, 2, 1] = mu1, -mu1
    gamma[1, 0, 2], gamma[1, 2, 0] = -mu2, mu2
    gamma[2, 0, 1], gamma[2, 1, 0] = mu3, -mu3
    return ConnectionTable(gamma)


def normalize_constants(c: StructureConstants, exact: bool = False) -> NormalizedConstants:
    """
    Ordena as constantes (c3 ≤ c2 ≤ c1) e, se preciso, troca o sinal global.

    Entre c e -c fica a versão com mais constantes positivas; no empate
    fica a lexicograficamente maior, de modo que c e -c normalizam para o
    mesmo resultado.
    """
    valores = c.as_array()
    tol = branch_tolerance(valores, exact)

    melhor = None
    for flipped in (False, True):
        vals = -valores if flipped else valores
        ordem = tuple(int(i) for i in np.argsort(-vals, kind="stable"))
        positivos, negativos, _ = _contagem_sinais(vals, tol)
        chave = (positivos - negativos, tuple(vals[list(ordem)]))
        if melhor is None or chave > melhor[0]:
            melhor = (chave, flipped, ordem, vals)

    _, flipped, ordem, vals = melhor
    normalizadas = vals[list(ordem)] + 0.0

    frame = BASE[list(ordem)].copy()
    impar = np.linalg.det(frame) < 0
    if impar != flipped:
        frame[2] *= -1.0

    return NormalizedConstants(
        constants=StructureConstants.from_iterable(normalizadas),
        permutation=ordem,
        flipped=flipped,
        frame=frame,
        tolerance=tol,
    )


def invariant_scalars(c: StructureConstants) -> InvariantScalars:
    mu1, mu2, mu3 = mu_from_c(c).as_array()
    beta1 = mu2**2 * (mu1 - mu3) + mu3**2 * (mu1 - mu2)
    beta2 = mu3**2 * (mu2 - mu1) + mu1**2 * (mu2 - mu3)
    beta3 = mu1**2 * (mu3 - mu2) + mu2**2 * (mu3 - mu1)

    soma = mu1 * mu2 + mu1 * mu3 + mu2 * mu3
    delta = (mu1 - mu2) * (mu2 - mu3) * (mu3 - mu1) * soma
    rho = 2.0 * soma

    escala = max(1.0, abs(mu1), abs(mu2), abs(mu3)) ** 2
    if abs(soma) <= config.TOLERANCIA_RAMO * escala:
        logger.debug(f"Constante do gradiente indefinida: μ1μ2+μ1μ3+μ2μ3 = {soma}")
        grad_bound_a = None
    else:
        grad_bound_a = -((mu1 * mu2) ** 2 + (mu2 * mu3) ** 2 + (mu1 * mu3) ** 2) / soma

    return InvariantScalars(beta1, beta2, beta3, delta, rho, grad_bound_a)


def identify_unimodular_group(c: StructureConstants, exact: bool = False) -> str:
    """Rótulo do grupo simplesmente conexo pela tabela de sinais das constantes."""
    valores = c.as_array()
    positivos, negativos, nulos = _contagem_sinais(valores, branch_tolerance(valores, exact))
    if negativos > positivos:
        positivos, negativos = negativos, positivos
    return GROUP_LABELS[(positivos, negativos, nulos)]


def detect_ektau(c: StructureConstants, exact: bool = False) -> Optional[Tuple[float, float]]:
    """
    Detecta os espaços E(κ, τ) entre os grupos unimodulares.

    Returns:
        (kappa, tau) quando exatamente duas constantes coincidem e a
        terceira é não nula; None caso contrário.
    """
    normalizado = normalize_constants(c, exact)
    c1, c2, c3 = normalizado.constants.as_array()
    tol = normalizado.tolerance

    iguais_12 = abs(c1 - c2) <= tol
    iguais_23 = abs(c2 - c3) <= tol
    if iguais_12 and iguais_23:
        return None
    if iguais_12:
        repetida, distinta = c1, c3
    elif iguais_23:
        repetida, distinta = c2, c1
    else:
        return None
    if abs(distinta) <= tol:
        return None

    tau = distinta / 2.0
    return 2.0 * tau * repetida, tau


# ---------------------------------------------------------------------------
# Família não unimodular e semidiretos em geral
# ---------------------------------------------------------------------------

def nonunimodular_matrix(p: NonUnimodularParams) -> np.ndarray:
    a, b = p.a, p.b
    return np.array([
        [1.0 + a, -(1.0 - a) * b],
        [(1.0 + a) * b, 1.0 - a],
    ])


def bracket_from_matrix(A: np.ndarray, x: AlgebraVector, y: AlgebraVector) -> np.ndarray:
    """
    Colchete da álgebra de R² ⋉_A R.

    [E1, E2] = 0 e ad_{E3} age em span{E1, E2} pela matriz A.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    plano = x[2] * (A @ y[:2]) - y[2] * (A @ x[:2])
    return np.array([plano[0], plano[1], 0.0])


def bracket_nonunimodular(p: NonUnimodularParams, x: AlgebraVector, y: AlgebraVector) -> np.ndarray:
    return bracket_from_matrix(nonunimodular_matrix(p), x, y)


def connection_nonunimodular(p: NonUnimodularParams) -> ConnectionTable:
    a, b = p.a, p.b
    ab = a * b
    gamma = np.zeros((3, 3, 3))
    # ∇_{E1}
    gamma[0, 0, 2] = 1.0 + a
    gamma[0, 1, 2] = ab
    gamma[0, 2, 0], gamma[0, 2, 1] = -(1.0 + a), -ab
    # ∇_{E2}
    gamma[1, 0, 2] = ab
    gamma[1, 1, 2] = 1.0 - a
    gamma[1, 2, 0], gamma[1, 2, 1] = -ab, -(1.0 - a)
    # ∇_{E3}
    gamma[2, 0, 1] = b
    gamma[2, 1, 0] = -b
    return ConnectionTable(gamma)


def connection_from_bracket(bracket: Bracket) -> ConnectionTable:
    """Fórmula de Koszul para um referencial ortonormal invariante à esquerda."""
    colchetes = np.array([[bracket(BASE[i], BASE[j]) for j in range(3)] for i in range(3)])
    gamma = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                gamma[i, j, k] = 0.5 * (
                    colchetes[i, j, k] - colchetes[j, k, i] + colchetes[k, i, j]
                )
    return ConnectionTable(gamma)


def connection_semidirect(A: np.ndarray) -> ConnectionTable:
    return connection_from_bracket(partial(bracket_from_matrix, np.asarray(A, dtype=float)))


def verify_connection(t: ConnectionTable, bracket: Bracket) -> ConnectionReport:
    """Violação máxima de compatibilidade métrica e de torção nula."""
    gamma = t.gamma
    metrica = float(np.max(np.abs(gamma + np.transpose(gamma, (0, 2, 1)))))

    torcao = 0.0
    for i in range(3):
        for j in range(3):
            diferenca = gamma[i, j] - gamma[j, i] - bracket(BASE[i], BASE[j])
            torcao = max(torcao, float(np.max(np.abs(diferenca))))

    return ConnectionReport(metrica, torcao)


# ---------------------------------------------------------------------------
# Despacho por família
# ---------------------------------------------------------------------------

@singledispatch
def connection_for(family) -> ConnectionTable:
    raise TypeError(f"Família não suportada: {type(family).__name__}")


@connection_for.register
def _(family: StructureConstants) -> ConnectionTable:
    return connection_unimodular(family)


@connection_for.register
def _(family: NonUnimodularParams) -> ConnectionTable:
    return connection_nonunimodular(family)


@singledispatch
def bracket_for(family) -> Bracket:
    raise TypeError(f"Família não suportada: {type(family).__name__}")


@bracket_for.register
def _(family: StructureConstants) -> Bracket:
    return partial(bracket_unimodular, family)


@bracket_for.register
def _(family: NonUnimodularParams) -> Bracket:
    return partial(bracket_nonunimodular, family)


# ---------------------------------------------------------------------------
# Curvatura
# ---------------------------------------------------------------------------

@singledispatch
def curvature_coefficients(family) -> np.ndarray:
    """Coeficientes (K1, K2, K3) de R = K1 R1 + K2 R2 + K3 R3."""
    raise TypeError(f"Família não suportada: {type(family).__name__}")


@curvature_coefficients.register
def _(family: StructureConstants) -> np.ndarray:
    c1, c2, c3 = family.as_array()
    mu1, mu2, mu3 = mu_from_c(family).as_array()
    return np.array([
        mu2 * mu3 - c1 * mu1,
        mu1 * mu3 - c2 * mu2,
        mu1 * mu2 - c3 * mu3,
    ])


@curvature_coefficients.register
def _(family: NonUnimodularParams) -> np.ndarray:
    a, b = family.a, family.b
    fator = 1.0 + b * b
    return np.array([
        (1.0 - a) ** 2 * fator - b * b,
        (1.0 + a) ** 2 * fator - b * b,
        (1.0 - a * a) * fator - b * b,
    ])


def _tensor_elementar(i: int, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """R_i(X,Y)Z; anula-se nos planos que contêm E_i."""
    e = BASE[i]
    xi, yi, zi = x[i], y[i], z[i]
    xz, yz = np.dot(x, z), np.dot(y, z)
    return (
        xz * y - yz * x
        - zi * xi * y + zi * yi * x
        - yi * xz * e + xi * yz * e
    )


def curvature(family: Family, x: AlgebraVector, y: AlgebraVector, z: AlgebraVector) -> np.ndarray:
    """R(x, y)z pela decomposição em tensores elementares."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    coeficientes = curvature_coefficients(family)
    return sum(coeficientes[i] * _tensor_elementar(i, x, y, z) for i in range(3))


def curvature_oracle(
    t: ConnectionTable,
    bracket: Bracket,
    x: AlgebraVector,
    y: AlgebraVector,
    z: AlgebraVector,
) -> np.ndarray:
    """R(x,y)z = ∇_x∇_y z − ∇_y∇_x z − ∇_{[x,y]} z direto da tabela."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    return (
        t.covariant(x, t.covariant(y, z))
        - t.covariant(y, t.covariant(x, z))
        - t.covariant(bracket(x, y), z)
    )


def sectional_curvature(family: Family, x: AlgebraVector, y: AlgebraVector) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    area = np.dot(x, x) * np.dot(y, y) - np.dot(x, y) ** 2
    if area <= 0:
        raise ParameterOutOfRangeError("Os vetores não geram um plano")
    return float(np.dot(curvature(family, x, y, y), x) / area)


def scalar_curvature_from_tensor(family: Family) -> float:
    """Traço duplo sum_{i,j} <R(E_i,E_j)E_j, E_i>."""
    return float(sum(
        np.dot(curvature(family, BASE[i], BASE[j], BASE[j]), BASE[i])
        for i in range(3)
        for j in range(3)
    ))

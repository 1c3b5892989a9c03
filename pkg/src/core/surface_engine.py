"""
Superfícies parametrizadas num modelo semidireto.

Normal unitária, funções ângulo, operador de forma e os resíduos das
identidades pontuais satisfeitas por superfícies totalmente umbílicas.
As derivadas na carta são diferenças centrais com passo
``fd_step·max(1, |coordenada|)``; tangentes analíticas podem ser
anexadas ao patch pelo ``tangent_hook``.
"""
from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.core import config
from src.core.exceptions import (
    DegenerateImmersionError,
    FamilyMismatchError,
    ParameterOutOfRangeError,
    PreconditionViolationError,
)
from src.core.lie_algebra import (
    ConnectionTable,
    NonUnimodularParams,
    StructureConstants,
    connection_semidirect,
    invariant_scalars,
    mu_from_c,
)
from src.core.semidirect import (
    AmbientFamily,
    GroupPoint,
    ambient_family,
    as_matrix2,
    coordinate_to_frame,
)

logger = logging.getLogger(__name__)

Chart = Callable[[float, float], GroupPoint]
TangentHook = Callable[[float, float], Tuple[np.ndarray, np.ndarray]]
Domain = Tuple[Tuple[float, float], Tuple[float, float]]


@dataclass(frozen=True, eq=False)
class SurfacePatch:
    """Carta (u, v) → ponto do grupo com o modelo ambiente e o passo de diferenças."""

    ambient: np.ndarray
    chart: Chart
    domain: Domain
    fd_step: float = config.PASSO_FD
    tangent_hook: Optional[TangentHook] = None
    label: str = "superficie"

    def __post_init__(self):
        object.__setattr__(self, "ambient", as_matrix2(self.ambient))
        if not self.fd_step > 0:
            raise ParameterOutOfRangeError(f"fd_step deve ser positivo (recebido {self.fd_step})")

    @cached_property
    def connection(self) -> ConnectionTable:
        return connection_semidirect(self.ambient)

    def point(self, u: float, v: float) -> GroupPoint:
        return self.chart(u, v)

    def with_fd_step(self, fd_step: float) -> "SurfacePatch":
        return dataclasses.replace(self, fd_step=fd_step)


@dataclass(frozen=True)
class AngleFunctions:
    nu1: float
    nu2: float
    nu3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.nu1, self.nu2, self.nu3])


@dataclass(frozen=True, eq=False)
class ShapeSample:
    """
    Operador de forma num ponto, na base ortonormal de Gram-Schmidt.

    Guarda também a normal, a base tangente (linhas, no referencial) e as
    derivadas direcionais D_{e_a} N, reaproveitadas pelos resíduos.
    """

    point: Tuple[float, float]
    operator: np.ndarray
    lam: float
    residual: float
    normal: np.ndarray
    tangent_basis: np.ndarray
    basis_coefficients: np.ndarray
    normal_derivatives: np.ndarray

    @property
    def relative_residual(self) -> float:
        return self.residual / max(1.0, float(np.linalg.norm(self.operator)))

    @property
    def asymmetry(self) -> float:
        return float(abs(self.operator[0, 1] - self.operator[1, 0]))


# ---------------------------------------------------------------------------
# Geometria de primeira ordem
# ---------------------------------------------------------------------------

def _passo(s: SurfacePatch, coordenada: float) -> float:
    return s.fd_step * max(1.0, abs(coordenada))


def coordinate_tangents(s: SurfacePatch, u: float, v: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vetores ∂u e ∂v na base coordenada."""
    if s.tangent_hook is not None:
        tu, tv = s.tangent_hook(u, v)
        return np.asarray(tu, dtype=float), np.asarray(tv, dtype=float)

    hu, hv = _passo(s, u), _passo(s, v)
    tu = (s.point(u + hu, v).as_array() - s.point(u - hu, v).as_array()) / (2.0 * hu)
    tv = (s.point(u, v + hv).as_array() - s.point(u, v - hv).as_array()) / (2.0 * hv)
    return tu, tv


def frame_tangents(s: SurfacePatch, u: float, v: float) -> np.ndarray:
    """
    Jacobiano 3x2 da carta no referencial ortonormal.

    Raises:
        DegenerateImmersionError: Se o menor valor singular não passar de 1e-8.
    """
    p = s.point(u, v)
    tu, tv = coordinate_tangents(s, u, v)
    J = np.column_stack([
        coordinate_to_frame(s.ambient, p, tu),
        coordinate_to_frame(s.ambient, p, tv),
    ])
    menor = float(np.linalg.svd(J, compute_uv=False)[-1])
    if not menor > config.TOLERANCIA_IMERSAO:
        raise DegenerateImmersionError(
            f"Carta '{s.label}' não é imersão em (u={u}, v={v}): menor valor singular {menor:.3e}"
        )
    return J


def unit_normal(s: SurfacePatch, u: float, v: float) -> np.ndarray:
    J = frame_tangents(s, u, v)
    normal = np.cross(J[:, 0], J[:, 1])
    return normal / np.linalg.norm(normal)


def angle_functions(s: SurfacePatch, u: float, v: float) -> AngleFunctions:
    nu1, nu2, nu3 = unit_normal(s, u, v)
    return AngleFunctions(float(nu1), float(nu2), float(nu3))


def _derivadas_normal(s: SurfacePatch, u: float, v: float) -> Tuple[np.ndarray, np.ndarray]:
    hu, hv = _passo(s, u), _passo(s, v)
    du = (unit_normal(s, u + hu, v) - unit_normal(s, u - hu, v)) / (2.0 * hu)
    dv = (unit_normal(s, u, v + hv) - unit_normal(s, u, v - hv)) / (2.0 * hv)
    return du, dv


# ---------------------------------------------------------------------------
# Operador de forma
# ---------------------------------------------------------------------------

def shape_operator(s: SurfacePatch, u: float, v: float) -> ShapeSample:
    """
    Calcula A = -∇N numa base tangente ortonormal.

    ∇_e N = D_e ν + Σ e_j ν_k ∇_{E_j} E_k, com D_e ν por diferenças
    centrais das componentes de N no referencial.
    """
    J = frame_tangents(s, u, v)
    tu, tv = J[:, 0], J[:, 1]
    normal = np.cross(tu, tv)
    normal /= np.linalg.norm(normal)

    norma_u = np.linalg.norm(tu)
    e1 = tu / norma_u
    projecao = float(tv @ e1)
    resto = tv - projecao * e1
    norma_resto = np.linalg.norm(resto)
    e2 = resto / norma_resto
    coeficientes = np.array([
        [1.0 / norma_u, 0.0],
        [-projecao / (norma_u * norma_resto), 1.0 / norma_resto],
    ])
    base = np.vstack([e1, e2])

    du, dv = _derivadas_normal(s, u, v)
    gamma = s.connection.gamma
    derivadas = coeficientes[:, :1] * du + coeficientes[:, 1:] * dv
    covariantes = derivadas + np.einsum("aj,k,jkl->al", base, normal, gamma)

    operador = -(base @ covariantes.T)
    lam = 0.5 * float(np.trace(operador))
    residuo = float(np.linalg.norm(operador - lam * np.eye(2)))

    return ShapeSample(
        point=(float(u), float(v)),
        operator=operador,
        lam=lam,
        residual=residuo,
        normal=normal,
        tangent_basis=base,
        basis_coefficients=coeficientes,
        normal_derivatives=derivadas,
    )


def relative_residual(s: SurfacePatch, u: float, v: float) -> float:
    return shape_operator(s, u, v).relative_residual


def _amostra_umbilica(s: SurfacePatch, u: float, v: float) -> ShapeSample:
    amostra = shape_operator(s, u, v)
    if amostra.relative_residual >= config.TOLERANCIA_UMBILICA:
        raise PreconditionViolationError(
            f"Superfície '{s.label}' não é umbílica em (u={u}, v={v}): "
            f"resíduo relativo {amostra.relative_residual:.3e}"
        )
    return amostra


def _familia(s: SurfacePatch) -> AmbientFamily:
    familia = ambient_family(s.ambient)
    if familia is None:
        raise FamilyMismatchError(
            f"O modelo {s.ambient.tolist()} não pertence a nenhuma família com identidades conhecidas"
        )
    return familia


def grad_lambda_fd(s: SurfacePatch, u: float, v: float, amostra: Optional[ShapeSample] = None) -> np.ndarray:
    """Gradiente de λ por diferenças centrais, no referencial do modelo."""
    if amostra is None:
        amostra = shape_operator(s, u, v)
    hu, hv = _passo(s, u), _passo(s, v)
    dl_u = (shape_operator(s, u + hu, v).lam - shape_operator(s, u - hu, v).lam) / (2.0 * hu)
    dl_v = (shape_operator(s, u, v + hv).lam - shape_operator(s, u, v - hv).lam) / (2.0 * hv)
    direcionais = amostra.basis_coefficients @ np.array([dl_u, dl_v])
    return direcionais @ amostra.tangent_basis


def _projecoes_tangentes(nu: np.ndarray) -> np.ndarray:
    """Colunas E_k^T = E_k - ν_k N."""
    return np.eye(3) - np.outer(nu, nu)


def _gradiente_lambda_esperado(familia, nu: np.ndarray) -> np.ndarray:
    T = _projecoes_tangentes(nu)
    if isinstance(familia, StructureConstants):
        mu1, mu2, mu3 = mu_from_c(familia).as_array()
        return (
            2.0 * mu2 * (mu3 - mu1) * nu[0] * T[:, 0]
            + 2.0 * mu1 * (mu3 - mu2) * nu[1] * T[:, 1]
        )
    a, b = familia.a, familia.b
    return 2.0 * a * (1.0 + b * b) * ((a - 1.0) * nu[0] * T[:, 0] + (a + 1.0) * nu[1] * T[:, 1])


def _gradientes_angulos_esperados(familia, nu: np.ndarray, lam: float) -> np.ndarray:
    """Linhas i: ∇ν_i em fórmula fechada."""
    T = _projecoes_tangentes(nu)
    E1, E2, E3 = T[:, 0], T[:, 1], T[:, 2]
    nu1, nu2, nu3 = nu
    if isinstance(familia, StructureConstants):
        mu1, mu2, mu3 = mu_from_c(familia).as_array()
        return np.array([
            -lam * E1 - mu2 * nu3 * E2 + mu3 * nu2 * E3,
            -lam * E2 + mu1 * nu3 * E1 - mu3 * nu1 * E3,
            -lam * E3 + mu2 * nu1 * E2 - mu1 * nu2 * E1,
        ])
    a, b = familia.a, familia.b
    ab = a * b
    return np.array([
        ((1.0 + a) * nu3 - lam) * E1 + ab * nu3 * E2 + b * nu2 * E3,
        ab * nu3 * E1 + ((1.0 - a) * nu3 - lam) * E2 - b * nu1 * E3,
        -((1.0 + a) * nu1 + ab * nu2) * E1 - (ab * nu1 + (1.0 - a) * nu2) * E2 - lam * E3,
    ])


def grad_lambda_residual(s: SurfacePatch, u: float, v: float) -> float:
    """
    Distância entre ∇λ numérico e a fórmula fechada da família ambiente.

    Raises:
        PreconditionViolationError: Se o ponto não for umbílico.
        FamilyMismatchError: Se o modelo não tiver família reconhecida.
    """
    amostra = _amostra_umbilica(s, u, v)
    familia = _familia(s)
    gradiente = familia.to_family_frame(grad_lambda_fd(s, u, v, amostra))
    nu = familia.to_family_frame(amostra.normal)

    return min(
        float(np.linalg.norm(sinal * gradiente - _gradiente_lambda_esperado(familia.family, sinal * nu)))
        for sinal in (1.0, -1.0)
    )


def angle_gradient_residual(s: SurfacePatch, u: float, v: float) -> Tuple[float, float, float]:
    amostra = _amostra_umbilica(s, u, v)
    familia = _familia(s)
    R = familia.frame

    # linhas i: ∇ν_i no referencial do modelo
    gradientes = amostra.normal_derivatives.T @ amostra.tangent_basis
    gradientes = R @ gradientes @ R.T
    nu = R @ amostra.normal

    melhor: Optional[np.ndarray] = None
    for sinal in (1.0, -1.0):
        esperado = _gradientes_angulos_esperados(familia.family, sinal * nu, sinal * amostra.lam)
        residuos = np.linalg.norm(sinal * gradientes - esperado, axis=1)
        if melhor is None or residuos.sum() < melhor.sum():
            melhor = residuos
    return float(melhor[0]), float(melhor[1]), float(melhor[2])


def _identidades_unimodulares(c: StructureConstants, nu: np.ndarray, lam: float) -> Dict[str, float]:
    mu1, mu2, mu3 = mu_from_c(c).as_array()
    escalares = invariant_scalars(c)
    quadrados = nu**2
    return {
        "beta_quadric": float(escalares.beta @ quadrados),
        "lambda_quadric": float(
            mu2 * mu3 * quadrados[0] + mu1 * mu3 * quadrados[1] + mu1 * mu2 * quadrados[2] + lam**2
        ),
    }


def _identidades_nao_unimodulares(p: NonUnimodularParams, nu: np.ndarray, lam: float) -> Dict[str, float]:
    a, b = p.a, p.b
    nu1, nu2, nu3 = nu
    return {
        "gauss_curve": float(
            ((a + 1) * (a + 2) * nu2**2 - (a - 1) * (a - 2) * nu1**2 - 2 * a) * b
            + 2 * (a * a - 1) * nu1 * nu2
        ),
        "lambda_relation": float(
            lam**2 - 2 * nu3 * lam - a * b * b * nu1**2 + a * b * b * nu2**2
            - a * a * (1 + b * b) * nu3**2 + nu3**2 + 2 * a * b * nu1 * nu2
        ),
        "constant_angle_product": float(
            4 * b * nu1**2 * nu2**2 + ((1 - a) * nu1**2 - (1 + a) * nu2**2 + 2 * a) * a * b * nu3**2
        ),
        "lambda_nu2_nu3": float(
            (a + 1) * lam * nu2 * nu3
            - (a + 1) ** 2 * nu2 * nu3**2
            + b * nu1 * (2 * nu2**2 + a * (a - 1) * nu3**2)
        ),
        "lambda_nu1_nu3": float(
            (a - 1) * lam * nu1 * nu3
            + (a - 1) ** 2 * nu1 * nu3**2
            + b * nu2 * (2 * nu1**2 + a * (a + 1) * nu3**2)
        ),
        "lambda_nu1_nu2": float(
            2 * lam * nu1 * nu2
            - (-a * b * (a - 1) * nu1**2 + 2 * (1 + a * a) * nu1 * nu2 + a * b * (a + 1) * nu2**2) * nu3
        ),
    }


def pointwise_system_residuals(s: SurfacePatch, u: float, v: float) -> Dict[str, float]:
    """
    Valor absoluto (lado esquerdo menos direito) de cada identidade pontual.

    Grupos unimodulares: quádricas em β e em λ. Grupos não unimodulares:
    curva de Gauss, relação quadrática em λ, produto de ângulos constantes
    e as três relações λν_iν_j.
    """
    amostra = _amostra_umbilica(s, u, v)
    familia = _familia(s)
    nu = familia.to_family_frame(amostra.normal)

    if isinstance(familia.family, StructureConstants):
        avaliar = _identidades_unimodulares
    else:
        avaliar = _identidades_nao_unimodulares

    positivo = avaliar(familia.family, nu, amostra.lam)
    negativo = avaliar(familia.family, -nu, -amostra.lam)
    return {nome: min(abs(positivo[nome]), abs(negativo[nome])) for nome in positivo}


# ---------------------------------------------------------------------------
# Grades de amostragem
# ---------------------------------------------------------------------------

def grid_coordinates(s: SurfacePatch, nu: int, nv: int) -> List[Tuple[float, float]]:
    """Pares (u, v) em ordem canônica: u externo, v interno."""
    (u0, u1), (v0, v1) = s.domain
    return [(float(u), float(v)) for u in np.linspace(u0, u1, nu) for v in np.linspace(v0, v1, nv)]


def _linha_grade(s: SurfacePatch, u: float, v: float) -> Dict[str, float]:
    ponto = s.point(u, v)
    amostra = shape_operator(s, u, v)
    return {
        "u": u,
        "v": v,
        "x": ponto.x,
        "y": ponto.y,
        "z": ponto.z,
        "nu1": float(amostra.normal[0]),
        "nu2": float(amostra.normal[1]),
        "nu3": float(amostra.normal[2]),
        "lambda": amostra.lam,
        "residual": amostra.residual,
    }


def sample_grid(s: SurfacePatch, nu: int = config.GRADE_SUPERFICIE[0], nv: int = config.GRADE_SUPERFICIE[1]) -> pd.DataFrame:
    """
    Avalia o patch numa grade retangular.

    Returns:
        pd.DataFrame: Colunas u, v, x, y, z, nu1, nu2, nu3, lambda, residual,
        uma linha por ponto, na ordem de :func:`grid_coordinates`.
    """
    if nu < 1 or nv < 1:
        raise ParameterOutOfRangeError(f"Grade inválida: {nu}x{nv}")

    pontos = grid_coordinates(s, nu, nv)
    with ThreadPoolExecutor(max_workers=config.obter_workers()) as executor:
        linhas = list(executor.map(lambda uv: _linha_grade(s, *uv), pontos))

    logger.debug(f"Grade {nu}x{nv} avaliada para '{s.label}'")
    return pd.DataFrame(linhas, columns=config.COLUNAS_GRADE)

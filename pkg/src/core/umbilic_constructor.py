"""
Construção das superfícies totalmente umbílicas.

- distribuições totalmente geodésicas (subálgebras) com verificação algébrica;
- perfis umbílicos dos grupos não unimodulares com b = 0, integrados em
  comprimento de arco a partir da integral primeira;
- perfis por método de tiro no modelo diag(1, c), que inclui Sol₃;
- isometrias de congruência entre perfis e o teste de não congruência
  entre as famílias invariantes por x e por y.

O ângulo φ do perfil é medido a partir do campo E_w da coordenada do
perfil: a tangente unitária é cos φ·E_w + sin φ·E3. A condição de
umbilicidade vira φ' = σ cos φ, com σ = m - k, onde m e k são os
expoentes das direções invariante e do perfil.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from src.core import config
from src.core.exceptions import ParameterOutOfRangeError, PreconditionViolationError, RootFindingError
from src.core.lie_algebra import (
    Family,
    NonUnimodularParams,
    StructureConstants,
    bracket_for,
    branch_tolerance,
    connection_for,
    connection_semidirect,
    normalize_constants,
)
from src.core.semidirect import GroupPoint, PointMap
from src.core.surface_engine import SurfacePatch, coordinate_tangents, shape_operator

logger = logging.getLogger(__name__)

X_INVARIANTE = "x-invariant"
Y_INVARIANTE = "y-invariant"
DIRECOES = (X_INVARIANTE, Y_INVARIANTE)

MODELO_NAO_UNIMODULAR = "nonunimodular"
MODELO_DIAGONAL = "diag"

Derivada = Callable[[float, np.ndarray], np.ndarray]


# ---------------------------------------------------------------------------
# Distribuições totalmente geodésicas
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeodesicDistribution:
    normal: np.ndarray
    span: Tuple[np.ndarray, np.ndarray]
    label: str = ""

    def orthogonality_defect(self) -> float:
        return float(max(abs(vetor @ self.normal) for vetor in self.span))

    def to_descriptor(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "normal": [float(v) for v in self.normal],
            "span": [[float(v) for v in vetor] for vetor in self.span],
        }


def _distribuicao(s1: np.ndarray, s2: np.ndarray, label: str) -> GeodesicDistribution:
    s1 = s1 / np.linalg.norm(s1)
    s2 = s2 / np.linalg.norm(s2)
    normal = np.cross(s1, s2)
    return GeodesicDistribution(normal / np.linalg.norm(normal), (s1, s2), label)


def geodesic_distributions_unimodular(c: StructureConstants, exact: bool = False) -> List[GeodesicDistribution]:
    """
    As duas distribuições span{√c1 F1 ± √(-c3) F3, F2}.

    Só existem quando c3 < 0 < c1 e c2 = c1 + c3 (constantes normalizadas).
    Os vetores voltam escritos no referencial da entrada.
    """
    normalizado = normalize_constants(c, exact)
    c1, c2, c3 = normalizado.constants.as_array()
    tol = normalizado.tolerance
    if not (c3 < -tol and c1 > tol and abs(c2 - (c1 + c3)) <= tol):
        return []

    F1, F2, F3 = (normalizado.to_original(v) for v in np.eye(3))
    distribuicoes = []
    for sinal, nome in ((1.0, "+"), (-1.0, "-")):
        s1 = math.sqrt(c1) * F1 + sinal * math.sqrt(-c3) * F3
        distribuicoes.append(_distribuicao(s1, F2, f"sqrt(c1)F1{nome}sqrt(-c3)F3, F2"))
    return distribuicoes


def geodesic_distributions_nonunimodular(p: NonUnimodularParams, exact: bool = False) -> List[GeodesicDistribution]:
    """Planos coordenados {E1, E3} e {E2, E3}, presentes quando b = 0."""
    if abs(p.b) > branch_tolerance((p.a, p.b), exact):
        return []
    E1, E2, E3 = np.eye(3)
    return [
        _distribuicao(E1, E3, "E1, E3"),
        _distribuicao(E2, E3, "E2, E3"),
    ]


def algebraic_second_form(family: Family, d: GeodesicDistribution) -> np.ndarray:
    """II(S_i, S_j) = <∇_{S_i} S_j, N> pela tabela de conexão."""
    tabela = connection_for(family)
    S = np.vstack(d.span)
    return np.einsum("ia,jb,k,abk->ij", S, S, d.normal, tabela.gamma)


def subalgebra_defect(family: Family, d: GeodesicDistribution) -> float:
    """Componente normal de [S1, S2]; zero quando a distribuição é subálgebra."""
    colchete = bracket_for(family)(d.span[0], d.span[1])
    return float(abs(colchete @ d.normal))


# ---------------------------------------------------------------------------
# Perfis umbílicos
# ---------------------------------------------------------------------------

def _rk4(derivada: Derivada, estado0: np.ndarray, passo: float, passos: int) -> np.ndarray:
    """RK4 de passo fixo a partir de s = 0; a linha j é o estado em s = j·passo."""
    estados = np.zeros((passos + 1, len(estado0)))
    estados[0] = estado0
    for j in range(passos):
        s = j * passo
        y = estados[j]
        k1 = derivada(s, y)
        k2 = derivada(s + 0.5 * passo, y + 0.5 * passo * k1)
        k3 = derivada(s + 0.5 * passo, y + 0.5 * passo * k2)
        k4 = derivada(s + passo, y + passo * k3)
        estados[j + 1] = y + passo / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return estados


def _integrar_simetrico(derivada: Derivada, estado0: np.ndarray, passo: float, s_max: float) -> Tuple[np.ndarray, np.ndarray]:
    passos = int(round(s_max / passo))
    if passos < 1:
        raise ParameterOutOfRangeError(f"Intervalo {s_max} menor que o passo {passo}")
    frente = _rk4(derivada, estado0, passo, passos)
    tras = _rk4(derivada, estado0, -passo, passos)
    indices = np.arange(-passos, passos + 1)
    estados = np.vstack([tras[:0:-1], frente])
    return indices * passo, estados


@dataclass(frozen=True, eq=False)
class UmbilicProfile:
    """
    Curva geradora (w(s), z(s)) de uma superfície invariante, em comprimento de arco.

    ``states`` guarda (w, z, tan φ) no perfil fechado e (w, z, φ) no de tiro;
    ``tan_phi`` e ``sec_phi`` são tan φ e 1/cos φ em cada amostra.
    """

    model: str
    parameter: float
    Lambda: float
    theta: float
    step: float
    direction: str
    ambient: np.ndarray
    exponents: Tuple[float, float]
    s: np.ndarray
    states: np.ndarray
    tan_phi: np.ndarray
    sec_phi: np.ndarray
    phi_prime: np.ndarray
    derivative: Derivada = field(repr=False)

    @property
    def sigma(self) -> float:
        m, k = self.exponents
        return m - k

    @property
    def w(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def z(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    @property
    def coordinate_name(self) -> str:
        return "y" if self.direction == X_INVARIANTE else "x"

    @property
    def zprime(self) -> np.ndarray:
        """dz/dw do perfil visto como gráfico."""
        k = self.exponents[1]
        return np.exp(-k * self.z) * self.tan_phi

    @property
    def zsecond(self) -> np.ndarray:
        k = self.exponents[1]
        return np.exp(-2.0 * k * self.z) * (
            self.phi_prime * self.sec_phi**3 - k * self.tan_phi**2
        )

    @property
    def first_integral_drift(self) -> np.ndarray:
        """|Λ e^{σz} cos φ - 1|, nulo ao longo de um perfil exato."""
        return np.abs(self.Lambda * np.exp(self.sigma * self.z) / self.sec_phi - 1.0)

    def state_at(self, v: float) -> np.ndarray:
        """Estado em s = v: um passo RK4 a partir da amostra mais próxima."""
        total = len(self.s) // 2
        j = int(np.clip(round(v / self.step), -total, total))
        s0 = j * self.step
        y = self.states[j + total]
        h = v - s0
        if h == 0.0:
            return y.copy()
        k1 = self.derivative(s0, y)
        k2 = self.derivative(s0 + 0.5 * h, y + 0.5 * h * k1)
        k3 = self.derivative(s0 + 0.5 * h, y + 0.5 * h * k2)
        k4 = self.derivative(s0 + h, y + h * k3)
        return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def velocity_at(self, v: float) -> Tuple[np.ndarray, np.ndarray]:
        estado = self.state_at(v)
        return estado, self.derivative(v, estado)[:2]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "s": self.s,
            self.coordinate_name: self.w,
            "z": self.z,
            "zprime": self.zprime,
            "zsecond": self.zsecond,
            "first_integral_drift": self.first_integral_drift,
        })

    def descriptor(self) -> Dict[str, object]:
        dados: Dict[str, object] = {"model": self.model, "direction": self.direction}
        if self.model == MODELO_NAO_UNIMODULAR:
            dados.update({"a": float(self.parameter), "Lambda": float(self.Lambda)})
        else:
            dados.update({"c": float(self.parameter), "z0": float(self.theta)})
        return dados


def _expoentes(a: float, direction: str) -> Tuple[float, float]:
    if direction == X_INVARIANTE:
        return 1.0 + a, 1.0 - a
    if direction == Y_INVARIANTE:
        return 1.0 - a, 1.0 + a
    raise ParameterOutOfRangeError(f"Direção desconhecida: {direction!r} (use {DIRECOES})")


def _validar_passos(y_max: float, step: float) -> None:
    if not (np.isfinite(step) and step > 0):
        raise ParameterOutOfRangeError(f"O passo deve ser positivo (recebido {step})")
    if not (np.isfinite(y_max) and y_max >= step):
        raise ParameterOutOfRangeError(f"y_max deve ser finito e ≥ passo (recebido {y_max})")


def solve_profile_closed(
    a: float,
    Lambda: float,
    y_max: float = config.S_MAX_PERFIL,
    step: float = config.PASSO_RK4,
    direction: str = X_INVARIANTE,
) -> UmbilicProfile:
    """
    Integra o perfil umbílico do grupo não unimodular com b = 0.

    O representante integrado tem mínimo (ou máximo, no caso invariante
    por y) em s = 0, com z(0) = θ = -log(Λ)/σ. O RK4 integra o estado
    (w, z, t = tan φ) com w' = e^{kz} cos φ, z' = sin φ e φ' = σ cos φ,
    isto é t' = σ sec φ. A deriva da integral primeira é medida sobre
    esse estado integrado.

    Args:
        a: Parâmetro do grupo, a > 0 e a ≠ 1.
        Lambda: Constante da integral primeira, Λ > 0.
        y_max: Meia-largura em comprimento de arco.
        step: Passo do RK4.
        direction: "x-invariant" ou "y-invariant".

    Returns:
        UmbilicProfile: Amostras em s = j·step, j = -n..n.

    Raises:
        ParameterOutOfRangeError: Parâmetros fora do domínio.
    """
    if not (np.isfinite(a) and a > 0):
        raise ParameterOutOfRangeError(f"O perfil exige a > 0 (recebido a={a})")
    if abs(a - 1.0) <= branch_tolerance((a,)):
        raise ParameterOutOfRangeError("O perfil não está definido em a = 1 (ℍ²×ℝ)")
    if not (np.isfinite(Lambda) and Lambda > 0):
        raise ParameterOutOfRangeError(f"O perfil exige Λ > 0 (recebido {Lambda})")
    _validar_passos(y_max, step)

    m, k = _expoentes(a, direction)
    sigma = m - k
    theta = -math.log(Lambda) / sigma

    def derivada(s: float, estado: np.ndarray) -> np.ndarray:
        secante = math.sqrt(1.0 + estado[2] * estado[2])
        return np.array([
            math.exp(k * estado[1]) / secante,
            estado[2] / secante,
            sigma * secante,
        ])

    s, estados = _integrar_simetrico(derivada, np.array([0.0, theta, 0.0]), step, y_max)
    tan_phi = estados[:, 2].copy()
    sec_phi = np.sqrt(1.0 + tan_phi**2)

    perfil = UmbilicProfile(
        model=MODELO_NAO_UNIMODULAR,
        parameter=float(a),
        Lambda=float(Lambda),
        theta=theta,
        step=float(step),
        direction=direction,
        ambient=np.diag([1.0 + a, 1.0 - a]),
        exponents=(m, k),
        s=s,
        states=estados,
        tan_phi=tan_phi,
        sec_phi=sec_phi,
        phi_prime=sigma / sec_phi,
        derivative=derivada,
    )
    logger.info(
        f"Perfil fechado integrado: a={a}, Λ={Lambda}, {direction}, "
        f"{len(s)} amostras, deriva máxima {perfil.first_integral_drift.max():.3e}"
    )
    return perfil


def _curvatura_de_tiro(gamma: np.ndarray) -> Callable[[float], float]:
    """φ' que iguala as curvaturas principais ao longo do perfil e de E1."""

    def resolver(phi: float) -> float:
        cos_phi, sin_phi = math.cos(phi), math.sin(phi)
        tangente = np.array([0.0, cos_phi, sin_phi])
        normal = np.array([0.0, -sin_phi, cos_phi])
        kappa_invariante = -float(normal @ gamma[0, :, 0])
        termo_conexao = float(np.einsum("i,j,k,ijk->", tangente, tangente, normal, gamma))

        def diferenca(q: float) -> float:
            return q + termo_conexao - kappa_invariante

        inferior, superior = -1.0, 1.0
        while diferenca(inferior) * diferenca(superior) > 0:
            if superior >= config.INTERVALO_TIRO:
                raise RootFindingError(
                    f"Sem mudança de sinal em [-{config.INTERVALO_TIRO:g}, {config.INTERVALO_TIRO:g}] (φ={phi})"
                )
            inferior, superior = 10.0 * inferior, 10.0 * superior

        try:
            q = bisect(diferenca, inferior, superior, xtol=1e-14, maxiter=200)
        except (ValueError, RuntimeError) as e:
            raise RootFindingError(f"Bisseção falhou em φ={phi}: {str(e)}")
        if abs(diferenca(q)) > config.TOLERANCIA_TIRO:
            raise RootFindingError(f"Curvaturas não igualadas em φ={phi}: diferença {diferenca(q):.3e}")
        return q

    return resolver


def solve_profile_shooting(
    c: float,
    z0: float = 0.0,
    step: float = config.PASSO_TIRO,
    y_max: float = config.S_MAX_TIRO,
) -> UmbilicProfile:
    """
    Perfil umbílico no modelo diag(1, c) pelo método de tiro.

    Em cada estágio do RK4 a curvatura φ' do perfil é obtida por bisseção,
    de modo que a curvatura principal ao longo do perfil seja igual à da
    direção invariante E1.

    Raises:
        ParameterOutOfRangeError: Se c estiver fora de [-1, 1).
        RootFindingError: Se a bisseção não igualar as curvaturas.
    """
    if not (np.isfinite(c) and -1.0 <= c < 1.0):
        raise ParameterOutOfRangeError(f"O tiro exige c em [-1, 1) (recebido c={c})")
    if not np.isfinite(z0):
        raise ParameterOutOfRangeError(f"z0 deve ser finito (recebido {z0})")
    _validar_passos(y_max, step)

    A = np.diag([1.0, c])
    m, k = 1.0, float(c)
    sigma = m - k
    curvatura = _curvatura_de_tiro(connection_semidirect(A).gamma)

    def derivada(s: float, estado: np.ndarray) -> np.ndarray:
        _, z, phi = estado
        return np.array([math.exp(k * z) * math.cos(phi), math.sin(phi), curvatura(phi)])

    try:
        s, estados = _integrar_simetrico(derivada, np.array([0.0, z0, 0.0]), step, y_max)
    except RootFindingError as e:
        logger.error(f"Erro no tiro com c={c}: {str(e)}")
        raise

    phi = estados[:, 2]
    perfil = UmbilicProfile(
        model=MODELO_DIAGONAL,
        parameter=float(c),
        Lambda=math.exp(-sigma * z0),
        theta=float(z0),
        step=float(step),
        direction=X_INVARIANTE,
        ambient=A,
        exponents=(m, k),
        s=s,
        states=estados,
        tan_phi=np.tan(phi),
        sec_phi=1.0 / np.cos(phi),
        phi_prime=np.array([curvatura(angulo_j) for angulo_j in phi]),
        derivative=derivada,
    )
    logger.info(f"Perfil por tiro integrado: c={c}, z0={z0}, {len(s)} amostras")
    return perfil


def rescaled_diag_parameter(a: float) -> Tuple[float, float]:
    """
    (c, t) com A(a, 0) = t·diag(1, c).

    O ponto (x, y, z) do modelo A(a, 0) corresponde a (tx, ty, tz) no
    modelo diag(1, c), com comprimentos multiplicados por t.
    """
    return (1.0 - a) / (1.0 + a), 1.0 + a


def profile_second_derivative(a: float, Lambda: float, z):
    """z'' do gráfico invariante por x em função de z."""
    return (3 * a - 1) * Lambda**2 * np.exp(2 * (3 * a - 1) * z) - (a - 1) * np.exp(2 * (a - 1) * z)


def first_integral_residual(a: float, Lambda: float, z, zprime):
    """(z')² - Λ² e^{2(3a-1)z} + e^{2(a-1)z} para o gráfico invariante por x."""
    return zprime**2 - Lambda**2 * np.exp(2 * (3 * a - 1) * z) + np.exp(2 * (a - 1) * z)


# ---------------------------------------------------------------------------
# Superfícies invariantes
# ---------------------------------------------------------------------------

def build_invariant_surface(
    profile: UmbilicProfile,
    direction: Optional[str] = None,
    u_range: Tuple[float, float] = (-1.0, 1.0),
) -> SurfacePatch:
    """
    Superfície gerada pelo perfil transladado na direção invariante.

    Se a direção pedida for a outra, o perfil do mesmo (a, Λ) é integrado
    de novo para ela; perfis de tiro só existem invariantes por x.
    """
    direction = direction or profile.direction
    if direction != profile.direction:
        if profile.model != MODELO_NAO_UNIMODULAR:
            raise ParameterOutOfRangeError("Perfis do modelo diag(1, c) só geram superfícies invariantes por x")
        logger.info(f"Reintegrando o perfil para a direção {direction}")
        profile = solve_profile_closed(profile.parameter, profile.Lambda, profile.s_max, profile.step, direction)

    if direction == X_INVARIANTE:
        def carta(u: float, v: float) -> GroupPoint:
            w, z = profile.state_at(v)[:2]
            return GroupPoint(float(u), float(w), float(z))

        def tangentes(u: float, v: float) -> Tuple[np.ndarray, np.ndarray]:
            _, (dw, dz) = profile.velocity_at(v)
            return np.array([1.0, 0.0, 0.0]), np.array([0.0, dw, dz])
    else:
        def carta(u: float, v: float) -> GroupPoint:
            w, z = profile.state_at(v)[:2]
            return GroupPoint(float(w), float(u), float(z))

        def tangentes(u: float, v: float) -> Tuple[np.ndarray, np.ndarray]:
            _, (dw, dz) = profile.velocity_at(v)
            return np.array([0.0, 1.0, 0.0]), np.array([dw, 0.0, dz])

    return SurfacePatch(
        ambient=profile.ambient,
        chart=carta,
        domain=(tuple(u_range), (float(profile.s[0]), float(profile.s[-1]))),
        tangent_hook=tangentes,
        label=f"{profile.model}-{direction}",
    )


def congruence_map(a: float, w: float) -> PointMap:
    """Isometria (x, y, z) ↦ (x e^{(1+a)w}, y e^{(1-a)w}, z + w) do modelo com b = 0."""
    fator_x = math.exp((1.0 + a) * w)
    fator_y = math.exp((1.0 - a) * w)

    def transformar(q: GroupPoint) -> GroupPoint:
        return GroupPoint(q.x * fator_x, q.y * fator_y, q.z + w)

    return transformar


def congruence_shift(a: float, Lambda1: float, Lambda2: float, direction: str = X_INVARIANTE) -> float:
    """
    w que leva o perfil de Λ1 ao de Λ2 na mesma direção.

    É a diferença θ2 - θ1 = (log Λ1 - log Λ2)/σ, com σ = 2a para perfis
    invariantes por x e σ = -2a para perfis invariantes por y.
    """
    m, k = _expoentes(a, direction)
    return (math.log(Lambda1) - math.log(Lambda2)) / (m - k)


def map_profile(profile: UmbilicProfile, w: float) -> np.ndarray:
    """Amostras (coordenada do perfil, z) transportadas pela congruência."""
    if profile.model != MODELO_NAO_UNIMODULAR:
        raise ParameterOutOfRangeError("A congruência só se aplica ao modelo não unimodular com b = 0")
    a = profile.parameter
    expoente = 1.0 - a if profile.direction == X_INVARIANTE else 1.0 + a
    return np.column_stack([profile.w * math.exp(expoente * w), profile.z + w])


def profile_distance(points: np.ndarray, profile: UmbilicProfile) -> float:
    """Maior distância euclidiana entre amostras correspondentes."""
    points = np.asarray(points, dtype=float)
    if points.shape != (len(profile.s), 2):
        raise ParameterOutOfRangeError(
            f"Amostragens incompatíveis: {points.shape} contra {len(profile.s)} amostras"
        )
    alvo = np.column_stack([profile.w, profile.z])
    return float(np.max(np.linalg.norm(points - alvo, axis=1)))


def level_line_axis(patch: SurfacePatch, u: float, v: float) -> np.ndarray:
    """
    Direção coordenada unitária das curvas de nível de λ em (u, v).

    Raises:
        PreconditionViolationError: Se λ for localmente constante.
    """
    hu = patch.fd_step * max(1.0, abs(u))
    hv = patch.fd_step * max(1.0, abs(v))
    lam_u = (shape_operator(patch, u + hu, v).lam - shape_operator(patch, u - hu, v).lam) / (2.0 * hu)
    lam_v = (shape_operator(patch, u, v + hv).lam - shape_operator(patch, u, v - hv).lam) / (2.0 * hv)
    tu, tv = coordinate_tangents(patch, u, v)
    eixo = lam_v * tu - lam_u * tv
    norma = np.linalg.norm(eixo)
    if norma < 1e-10:
        raise PreconditionViolationError(f"λ é localmente constante em (u={u}, v={v})")
    return eixo / norma


def _faixa_lambda(patch: SurfacePatch, amostras: int) -> np.ndarray:
    (u0, u1), (v0, v1) = patch.domain
    u = 0.5 * (u0 + u1)
    valores = [abs(shape_operator(patch, u, v).lam) for v in np.linspace(v0, v1, amostras)]
    return np.array([min(valores), max(valores)])


def invariant_families_congruent(
    p1: SurfacePatch,
    p2: SurfacePatch,
    v: float = 0.5,
    amostras: int = 21,
) -> bool:
    """
    Decide se duas superfícies invariantes podem ser congruentes.

    O estabilizador (x, y, z) ↦ (±x, ±y, z) preserva os eixos coordenados,
    então a direção das curvas de nível de λ (a menos de sinal) e a faixa
    de valores de |λ| precisam coincidir.
    """
    eixo1 = np.abs(level_line_axis(p1, 0.0, v))
    eixo2 = np.abs(level_line_axis(p2, 0.0, v))
    eixos_iguais = bool(np.allclose(eixo1, eixo2, atol=1e-6))
    faixas_iguais = bool(np.allclose(_faixa_lambda(p1, amostras), _faixa_lambda(p2, amostras), rtol=1e-6))
    logger.debug(f"Eixos {eixo1} e {eixo2}; congruência possível: {eixos_iguais and faixas_iguais}")
    return eixos_iguais and faixas_iguais


def profile_from_descriptor(
    descriptor: Dict[str, object],
    y_max: Optional[float] = None,
    step: Optional[float] = None,
) -> UmbilicProfile:
    """Integra o perfil descrito num relatório de classificação."""
    modelo = descriptor.get("model")
    if modelo == MODELO_NAO_UNIMODULAR:
        return solve_profile_closed(
            float(descriptor["a"]),
            float(descriptor.get("Lambda", 1.0)),
            y_max if y_max is not None else config.S_MAX_PERFIL,
            step if step is not None else config.PASSO_RK4,
            str(descriptor.get("direction", X_INVARIANTE)),
        )
    if modelo == MODELO_DIAGONAL:
        return solve_profile_shooting(
            float(descriptor["c"]),
            float(descriptor.get("z0", 0.0)),
            step if step is not None else config.PASSO_TIRO,
            y_max if y_max is not None else config.S_MAX_TIRO,
        )
    raise ParameterOutOfRangeError(f"Descritor de perfil desconhecido: {descriptor!r}")

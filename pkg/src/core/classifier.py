"""
Classificação das superfícies totalmente umbílicas.

Transforma os parâmetros do grupo no item correspondente do teorema de
classificação (unimodular ou não unimodular) e anexa evidência numérica
verificável: invariantes escalares, coeficientes de curvatura e, no caso
de não existência sem b = 0, os zeros comuns dos polinômios P e Q.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core import config
from src.core.exceptions import ParameterOutOfRangeError
from src.core.lie_algebra import (
    NonUnimodularParams,
    StructureConstants,
    branch_tolerance,
    curvature_coefficients,
    detect_ektau,
    identify_unimodular_group,
    invariant_scalars,
    mu_from_c,
    normalize_constants,
)
from src.core.umbilic_constructor import (
    MODELO_DIAGONAL,
    MODELO_NAO_UNIMODULAR,
    X_INVARIANTE,
    Y_INVARIANTE,
    geodesic_distributions_nonunimodular,
    geodesic_distributions_unimodular,
)

logger = logging.getLogger(__name__)

FAMILIA_UNIMODULAR = "unimodular"
FAMILIA_NAO_UNIMODULAR = "non-unimodular"

TIPO_GEODESICA = "totally-geodesic-distribution"
TIPO_PERFIL = "invariant-umbilic-profile"
TIPO_CLASSICA = "constant-curvature-classical"
TIPO_NENHUMA = "none"

CASOS_INEXISTENCIA = {
    FAMILIA_UNIMODULAR: {"3"},
    FAMILIA_NAO_UNIMODULAR: {"4"},
}

LIMITE_BEZOUT = 8


@dataclass(frozen=True)
class SurfaceFamily:
    kind: str
    descriptor: Dict[str, object]

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "descriptor": self.descriptor}


@dataclass(frozen=True)
class ClassificationReport:
    family: str
    params: Dict[str, float]
    group_label: str
    case: str
    surfaces: List[SurfaceFamily]
    evidence: Dict[str, object]
    lcf: bool

    @property
    def is_nonexistence(self) -> bool:
        return self.case in CASOS_INEXISTENCIA[self.family]

    def to_dict(self) -> Dict[str, object]:
        """Dicionário na ordem fixa de campos do relatório."""
        return {
            "family": self.family,
            "params": self.params,
            "group_label": self.group_label,
            "case": self.case,
            "surfaces": [superficie.to_dict() for superficie in self.surfaces],
            "evidence": self.evidence,
            "lcf": self.lcf,
        }


@dataclass(frozen=True)
class NonexistenceEvidence:
    case: str
    criterion: Optional[str]
    beta: Tuple[float, float, float]
    beta_norm: float
    delta: float
    rho: float
    grad_bound_a: Optional[float]

    def to_dict(self) -> Dict[str, object]:
        return {
            "criterion": self.criterion,
            "beta": [float(v) for v in self.beta],
            "beta_norm": float(self.beta_norm),
            "delta": float(self.delta),
            "rho": float(self.rho),
            "grad_bound_a": None if self.grad_bound_a is None else float(self.grad_bound_a),
        }


@dataclass(frozen=True)
class GaussLocusSolution:
    x: float
    y: float
    p_residual: float
    q_residual: float

    def to_dict(self) -> Dict[str, float]:
        return {"x": self.x, "y": self.y, "p_residual": self.p_residual, "q_residual": self.q_residual}


# ---------------------------------------------------------------------------
# Grupos unimodulares
# ---------------------------------------------------------------------------

def _caso_unimodular(c1: float, c2: float, c3: float, tol: float) -> str:
    iguais_12 = abs(c1 - c2) <= tol
    iguais_23 = abs(c2 - c3) <= tol
    if (iguais_12 and iguais_23) or (iguais_12 and abs(c3) <= tol) or (iguais_23 and abs(c1) <= tol):
        return "1"
    if c3 < -tol and c1 > tol and abs(c2 - (c1 + c3)) <= tol:
        return "2"
    return "3"


def nonexistence_evidence_unimodular(c: StructureConstants, exact: bool = False) -> NonexistenceEvidence:
    """
    Critério de não existência aplicável (apenas diagnóstico).

    Na ordem: curvatura escalar positiva, Δ = 0 com β não nulo e o ramo
    genérico do polinômio de grau seis. Fora do caso 3 o critério é None.
    """
    normalizado = normalize_constants(c, exact)
    c1, c2, c3 = normalizado.constants.as_array()
    caso = _caso_unimodular(c1, c2, c3, normalizado.tolerance)
    escalares = invariant_scalars(normalizado.constants)
    norma_beta = float(np.linalg.norm(escalares.beta))

    criterio = None
    if caso == "3":
        escala = max(1.0, float(np.max(np.abs(mu_from_c(normalizado.constants).as_array()))))
        tol_rho = 0.0 if exact else config.TOLERANCIA_RAMO * escala**2
        tol_delta = 0.0 if exact else config.TOLERANCIA_RAMO * escala**5
        if escalares.rho > tol_rho:
            criterio = "positive-scalar-curvature"
        elif abs(escalares.delta) <= tol_delta:
            criterio = "delta-zero"
        else:
            criterio = "degree-six-polynomial"

    return NonexistenceEvidence(
        case=caso,
        criterion=criterio,
        beta=(escalares.beta1, escalares.beta2, escalares.beta3),
        beta_norm=norma_beta,
        delta=escalares.delta,
        rho=escalares.rho,
        grad_bound_a=escalares.grad_bound_a,
    )


def classify_unimodular(c: StructureConstants, exact: bool = False) -> ClassificationReport:
    """
    Classifica as superfícies totalmente umbílicas de um grupo unimodular.

    Args:
        c: Constantes de estrutura em qualquer ordem e sinal.
        exact: Compara os ramos sem tolerância.

    Returns:
        ClassificationReport: Caso "1" (curvatura constante), "2"
        (c3 < 0 < c1 e c2 = c1 + c3) ou "3" (não existem).
    """
    normalizado = normalize_constants(c, exact)
    c1, c2, c3 = normalizado.constants.as_array()
    tol = normalizado.tolerance
    caso = _caso_unimodular(c1, c2, c3, tol)
    rotulo = identify_unimodular_group(c, exact)
    evidencia_base = nonexistence_evidence_unimodular(c, exact).to_dict()

    superficies: List[SurfaceFamily] = []
    evidencia: Dict[str, object] = {}
    lcf = False

    if caso == "1":
        esfera = abs(c1 - c3) <= tol and c1 > tol
        superficies.append(SurfaceFamily(TIPO_CLASSICA, {
            "space": "S³" if esfera else "ℝ³",
            "sectional_curvature": c1 * c1 / 4.0 if esfera else 0.0,
        }))
        lcf = True
    elif caso == "2":
        ramo = "sol3" if abs(c2) <= tol else "c2-nonzero"
        evidencia["branch"] = ramo
        for distribuicao in geodesic_distributions_unimodular(c, exact):
            superficies.append(SurfaceFamily(TIPO_GEODESICA, distribuicao.to_descriptor()))
        if ramo == "sol3":
            superficies.append(SurfaceFamily(TIPO_PERFIL, {
                "model": MODELO_DIAGONAL,
                "c": -1.0,
                "direction": X_INVARIANTE,
                "z0": 0.0,
                "scale": float(c1),
            }))

    for chave in ("beta", "delta", "rho", "grad_bound_a"):
        evidencia[chave] = evidencia_base[chave]
    if caso == "3":
        evidencia["criterion"] = evidencia_base["criterion"]
        evidencia["beta_norm"] = evidencia_base["beta_norm"]
        ektau = detect_ektau(c, exact)
        if ektau is not None:
            evidencia["ektau"] = {"kappa": float(ektau[0]), "tau": float(ektau[1])}

    relatorio = ClassificationReport(
        family=FAMILIA_UNIMODULAR,
        params={"c1": float(c1), "c2": float(c2), "c3": float(c3)},
        group_label=rotulo,
        case=caso,
        surfaces=superficies,
        evidence=evidencia,
        lcf=lcf,
    )
    logger.info(f"Classificação unimodular concluída: c={c.as_array().tolist()} → caso {caso} ({rotulo})")
    return relatorio


# ---------------------------------------------------------------------------
# Grupos não unimodulares
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussPolynomials:
    """P, Q e seus gradientes nas variáveis (x, y) = (ν1, ν2)."""

    a: float
    b: float

    def P(self, x, y):
        a, b = self.a, self.b
        return ((a + 1) * (a + 2) * y**2 - (a - 1) * (a - 2) * x**2 - 2 * a) * b + 2 * (a * a - 1) * x * y

    def Q(self, x, y):
        a, b = self.a, self.b
        B = (1 - a) * x**2 - (1 + a) * y**2 + 2 * a
        C = 1 - x**2 - y**2
        return 4 * b * x**2 * y**2 + a * b * B * C

    def grad_P(self, x, y) -> Tuple[float, float]:
        a, b = self.a, self.b
        return (
            -2 * (a - 1) * (a - 2) * b * x + 2 * (a * a - 1) * y,
            2 * (a + 1) * (a + 2) * b * y + 2 * (a * a - 1) * x,
        )

    def grad_Q(self, x, y) -> Tuple[float, float]:
        a, b = self.a, self.b
        B = (1 - a) * x**2 - (1 + a) * y**2 + 2 * a
        C = 1 - x**2 - y**2
        return (
            8 * b * x * y**2 + a * b * (2 * (1 - a) * x * C - 2 * x * B),
            8 * b * x**2 * y + a * b * (-2 * (1 + a) * y * C - 2 * y * B),
        )


def gauss_polynomials(p: NonUnimodularParams) -> GaussPolynomials:
    return GaussPolynomials(p.a, p.b)


def constant_angle_violation(p: NonUnimodularParams, x: float, y: float) -> float:
    """max(|(aν3² - ν2²)b|, |(aν3² + ν1²)b|) com ν3² = 1 - x² - y²."""
    nu3_quadrado = 1.0 - x * x - y * y
    return max(
        abs((p.a * nu3_quadrado - y * y) * p.b),
        abs((p.a * nu3_quadrado + x * x) * p.b),
    )


def _polir(polinomios: GaussPolynomials, x: float, y: float, iteracoes: int = 50) -> Optional[Tuple[float, float]]:
    """Newton amortecido em (P, Q); None se não convergir."""
    ponto = np.array([x, y])
    valores = np.array([polinomios.P(*ponto), polinomios.Q(*ponto)])
    for _ in range(iteracoes):
        if np.max(np.abs(valores)) < 1e-15:
            break
        jacobiano = np.array([polinomios.grad_P(*ponto), polinomios.grad_Q(*ponto)])
        try:
            passo = np.linalg.solve(jacobiano, -valores)
        except np.linalg.LinAlgError:
            return None
        fator = 1.0
        while fator > 1e-6:
            candidato = ponto + fator * passo
            novos = np.array([polinomios.P(*candidato), polinomios.Q(*candidato)])
            if np.linalg.norm(novos) < np.linalg.norm(valores):
                ponto, valores = candidato, novos
                break
            fator *= 0.5
        else:
            break
    if np.max(np.abs(valores)) >= config.TOLERANCIA_NEWTON:
        return None
    return float(ponto[0]), float(ponto[1])


def celulas_candidatas(valores_P: np.ndarray, valores_Q: np.ndarray, limiar_relativo: float) -> np.ndarray:
    """
    Células da grade onde P e Q podem se anular ao mesmo tempo.

    Cada polinômio precisa mudar de sinal nos quatro cantos da célula ou
    ter num canto valor absoluto até ``limiar_relativo`` vezes o maior da
    grade; a segunda condição pega zeros tangenciais, como Q ≥ 0 tocando 0.

    Args:
        valores_P: P nos nós da grade, forma (n + 1, n + 1).
        valores_Q: Q nos mesmos nós.
        limiar_relativo: Fração do maior |valor| abaixo da qual um canto conta como zero.

    Returns:
        Máscara booleana (n, n) das células.
    """
    def pode_anular(valores: np.ndarray) -> np.ndarray:
        cantos = np.stack([valores[:-1, :-1], valores[1:, :-1], valores[:-1, 1:], valores[1:, 1:]])
        muda_sinal = (cantos.min(axis=0) <= 0) & (cantos.max(axis=0) >= 0)
        quase_zero = np.abs(cantos).min(axis=0) <= limiar_relativo * float(np.max(np.abs(valores)))
        return muda_sinal | quase_zero

    return pode_anular(valores_P) & pode_anular(valores_Q)


def gauss_locus(p: NonUnimodularParams, resolution: int = config.RESOLUCAO_GAUSS) -> List[GaussLocusSolution]:
    """
    Zeros comuns isolados de P e Q no disco x² + y² ≤ 1.

    Varre uma grade resolution×resolution em [-1, 1]², marca as células
    onde P e Q mudam de sinal ou quase se anulam num canto, refina por
    Newton e remove duplicatas.
    O resultado vem em ordem lexicográfica.

    Raises:
        ParameterOutOfRangeError: Se a ∈ {0, 1}, b = 0 ou resolução < 2.
    """
    tol = branch_tolerance((p.a, p.b))
    if abs(p.a) <= tol or abs(p.a - 1.0) <= tol or abs(p.b) <= tol:
        raise ParameterOutOfRangeError(f"gauss_locus exige a ∉ {{0, 1}} e b ≠ 0 (a={p.a}, b={p.b})")
    if resolution < 2:
        raise ParameterOutOfRangeError(f"Resolução insuficiente: {resolution}")

    polinomios = gauss_polynomials(p)
    eixo = np.linspace(-1.0, 1.0, resolution + 1)
    X, Y = np.meshgrid(eixo, eixo, indexing="ij")
    valores_P = polinomios.P(X, Y)
    valores_Q = polinomios.Q(X, Y)

    limiar = config.FATOR_TANGENCIA_GAUSS * (2.0 / resolution) ** 2
    candidatas = celulas_candidatas(valores_P, valores_Q, limiar)
    centros = 0.5 * (eixo[:-1] + eixo[1:])

    def polir_linha(i: int) -> Tuple[List[Tuple[float, float]], int]:
        encontrados, falhas = [], 0
        for j in np.flatnonzero(candidatas[i]):
            resultado = _polir(polinomios, centros[i], centros[j])
            if resultado is None:
                falhas += 1
            elif resultado[0] ** 2 + resultado[1] ** 2 <= 1.0 + 1e-12:
                encontrados.append(resultado)
        return encontrados, falhas

    with ThreadPoolExecutor(max_workers=config.obter_workers()) as executor:
        por_linha = list(executor.map(polir_linha, range(resolution)))

    falhas = sum(f for _, f in por_linha)
    if falhas:
        logger.warning(f"{falhas} candidatas de P = Q = 0 não convergiram no refinamento (a={p.a}, b={p.b})")

    unicos: List[Tuple[float, float]] = []
    for ponto in sorted(pt for encontrados, _ in por_linha for pt in encontrados):
        if all(math.hypot(ponto[0] - q[0], ponto[1] - q[1]) > config.DISTANCIA_DUPLICATAS for q in unicos):
            unicos.append(ponto)

    if len(unicos) > LIMITE_BEZOUT:
        logger.warning(
            f"{len(unicos)} zeros comuns encontrados (mais que {LIMITE_BEZOUT}): possível curva de soluções"
        )

    return [
        GaussLocusSolution(x, y, float(abs(polinomios.P(x, y))), float(abs(polinomios.Q(x, y))))
        for x, y in sorted(unicos)
    ]


def classify_nonunimodular(p: NonUnimodularParams, exact: bool = False) -> ClassificationReport:
    """
    Classifica as superfícies totalmente umbílicas de R² ⋉_{A(a,b)} R.

    Casos: "1" a = 0 (ℍ³), "2" a = 1 e b = 0 (ℍ²×ℝ), "3" b = 0 com
    a ∉ {0, 1} (dois planos geodésicos e dois perfis invariantes),
    "4" nenhuma superfície.
    """
    a, b = p.a, p.b
    tol = branch_tolerance((a, b), exact)
    coeficientes = curvature_coefficients(p)
    evidencia: Dict[str, object] = {"curvature_coefficients": [float(k) for k in coeficientes]}
    superficies: List[SurfaceFamily] = []
    rotulo = "ℝ²⋉_{A(a,b)}ℝ"
    lcf = False

    if abs(a) <= tol:
        caso, rotulo, lcf = "1", "ℍ³", True
        superficies.append(SurfaceFamily(TIPO_CLASSICA, {"space": "ℍ³", "sectional_curvature": -1.0}))
    elif abs(a - 1.0) <= tol and abs(b) <= tol:
        caso, rotulo, lcf = "2", "ℍ²×ℝ", True
        superficies.append(SurfaceFamily(TIPO_CLASSICA, {"space": "ℍ²×ℝ", "sectional_curvature": None}))
    elif abs(b) <= tol:
        caso = "3"
        for distribuicao in geodesic_distributions_nonunimodular(p, exact):
            superficies.append(SurfaceFamily(TIPO_GEODESICA, distribuicao.to_descriptor()))
        for direcao in (X_INVARIANTE, Y_INVARIANTE):
            superficies.append(SurfaceFamily(TIPO_PERFIL, {
                "model": MODELO_NAO_UNIMODULAR,
                "a": float(a),
                "direction": direcao,
                "Lambda": 1.0,
            }))
    else:
        caso = "4"
        if abs(a - 1.0) <= tol:
            rotulo = "𝔼(−4,τ)"
            evidencia["criterion"] = "ektau-isometry"
            evidencia["ektau"] = {"kappa": -4.0, "tau": float(b)}
        else:
            solucoes = gauss_locus(p)
            violacoes = [constant_angle_violation(p, s.x, s.y) for s in solucoes]
            evidencia["criterion"] = "gauss-locus"
            evidencia["gauss_locus"] = [s.to_dict() for s in solucoes]
            evidencia["min_constant_angle_violation"] = float(min(violacoes)) if violacoes else None

    relatorio = ClassificationReport(
        family=FAMILIA_NAO_UNIMODULAR,
        params={"a": float(a), "b": float(b)},
        group_label=rotulo,
        case=caso,
        surfaces=superficies,
        evidence=evidencia,
        lcf=lcf,
    )
    logger.info(f"Classificação não unimodular concluída: a={a}, b={b} → caso {caso}")
    return relatorio

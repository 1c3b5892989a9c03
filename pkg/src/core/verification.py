"""
Bateria de propriedades executada pelo comando ``verify``.

Cada propriedade devolve a maior violação observada e a tolerância; as
propriedades rodam em paralelo, cada uma com seu próprio fluxo Philox,
e o resultado sai sempre na ordem de registro.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from src.core import config
from src.core.classifier import (
    classify_nonunimodular,
    classify_unimodular,
    constant_angle_violation,
    gauss_locus,
    gauss_polynomials,
    nonexistence_evidence_unimodular,
)
from src.core.lie_algebra import (
    BASE,
    MuTriple,
    NonUnimodularParams,
    StructureConstants,
    bracket_nonunimodular,
    bracket_unimodular,
    c_from_mu,
    connection_nonunimodular,
    connection_unimodular,
    curvature,
    curvature_oracle,
    identify_unimodular_group,
    invariant_scalars,
    nonunimodular_matrix,
    scalar_curvature_from_tensor,
    sectional_curvature,
    verify_connection,
)
from src.core.semidirect import (
    GroupPoint,
    connection_from_metric,
    isometry_defect,
    left_translate_map,
    matrix_exp,
)
from src.core.surface_engine import (
    angle_gradient_residual,
    grad_lambda_residual,
    pointwise_system_residuals,
    shape_operator,
)
from src.core.umbilic_constructor import (
    algebraic_second_form,
    build_invariant_surface,
    congruence_map,
    congruence_shift,
    geodesic_distributions_nonunimodular,
    geodesic_distributions_unimodular,
    map_profile,
    profile_distance,
    profile_second_derivative,
    rescaled_diag_parameter,
    solve_profile_closed,
    solve_profile_shooting,
    subalgebra_defect,
)
from src.utils.aleatorio import criar_geradores

logger = logging.getLogger(__name__)

PERTURBACAO_CONEXAO = 1e-3
INDICE_PERTURBADO = (0, 1, 2)

Avaliacao = Callable[[np.random.Generator, int, bool], Tuple[float, float]]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    max_violation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_violation)) and self.max_violation <= self.tolerance

    def linha(self) -> str:
        estado = "PASS" if self.passed else "FAIL"
        return f"{self.name:<36} {self.max_violation:.3e} {self.tolerance:.1e} {estado}"


# ---------------------------------------------------------------------------
# Álgebra
# ---------------------------------------------------------------------------

def _constantes_aleatorias(gerador: np.random.Generator) -> StructureConstants:
    return StructureConstants.from_iterable(gerador.uniform(-3.0, 3.0, 3))


def _parametros_aleatorios(gerador: np.random.Generator, limite: float = 3.0) -> NonUnimodularParams:
    a, b = gerador.uniform(0.0, limite, 2)
    return NonUnimodularParams(float(a), float(b))


def _conexao_unimodular(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        c = _constantes_aleatorias(gerador)
        tabela = connection_unimodular(c)
        if corromper:
            tabela = tabela.perturbed(INDICE_PERTURBADO, PERTURBACAO_CONEXAO)
        relatorio = verify_connection(tabela, lambda x, y: bracket_unimodular(c, x, y))
        pior = max(pior, relatorio.max_violation)
    return pior, 1e-14


def _conexao_nao_unimodular(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        p = _parametros_aleatorios(gerador)
        tabela = connection_nonunimodular(p)
        if corromper:
            tabela = tabela.perturbed(INDICE_PERTURBADO, PERTURBACAO_CONEXAO)
        relatorio = verify_connection(tabela, lambda x, y: bracket_nonunimodular(p, x, y))
        pior = max(pior, relatorio.max_violation)
    return pior, 1e-14


def _conexao_da_metrica(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(max(1, amostras // 4)):
        p = _parametros_aleatorios(gerador, 2.0)
        ponto = GroupPoint(*gerador.uniform(-1.0, 1.0, 2), float(gerador.uniform(-0.25, 0.25)))
        esperado = connection_nonunimodular(p).gamma
        obtido = connection_from_metric(nonunimodular_matrix(p), ponto).gamma
        pior = max(pior, float(np.max(np.abs(obtido - esperado))) / max(1.0, float(np.max(np.abs(esperado)))))
    return pior, 1e-6


def _curvatura_contra_oraculo(familia, tabela, colchete) -> float:
    pior = 0.0
    for i, j, k in itertools.product(range(3), repeat=3):
        decomposicao = curvature(familia, BASE[i], BASE[j], BASE[k])
        oraculo = curvature_oracle(tabela, colchete, BASE[i], BASE[j], BASE[k])
        pior = max(pior, float(np.max(np.abs(decomposicao - oraculo))))
    return pior


def _curvatura_unimodular(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        c = _constantes_aleatorias(gerador)
        pior = max(pior, _curvatura_contra_oraculo(
            c, connection_unimodular(c), lambda x, y: bracket_unimodular(c, x, y)
        ))
    return pior, 1e-12


def _curvatura_nao_unimodular(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        p = _parametros_aleatorios(gerador)
        pior = max(pior, _curvatura_contra_oraculo(
            p, connection_nonunimodular(p), lambda x, y: bracket_nonunimodular(p, x, y)
        ))
    return pior, 1e-12


def _curvatura_hiperbolica(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(max(1, amostras // 2)):
        p = NonUnimodularParams(0.0, float(gerador.uniform(0.0, 3.0)))
        x, y = gerador.normal(size=(2, 3))
        pior = max(pior, abs(sectional_curvature(p, x, y) + 1.0))
    return pior, 1e-9


def _curvatura_escalar(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        c = _constantes_aleatorias(gerador)
        pior = max(pior, abs(invariant_scalars(c).rho - scalar_curvature_from_tensor(c)))
    return pior, 1e-12


def _soma_beta(gerador, amostras, corromper):
    pior = 0.0
    for mu in gerador.uniform(-3.0, 3.0, (50 * amostras, 3)):
        escalares = invariant_scalars(c_from_mu(MuTriple(*mu)))
        escala = max(1.0, float(np.max(np.abs(mu)))) ** 3
        pior = max(pior, abs(float(escalares.beta.sum())) / escala)
    return pior, 1e-14


def _ancora_sol3(gerador, amostras, corromper):
    escalares = invariant_scalars(StructureConstants(1.0, 0.0, -1.0))
    diferencas = [
        *np.abs(escalares.beta - np.array([-1.0, 0.0, 1.0])),
        abs(escalares.delta + 2.0),
        abs(escalares.rho + 2.0),
        abs(escalares.grad_bound_a - 1.0) if escalares.grad_bound_a is not None else math.inf,
    ]
    return float(max(diferencas)), 0.0


def _anulamento_beta(gerador, amostras, corromper):
    erros = 0
    for mu in itertools.product(range(-2, 3), repeat=3):
        mu = np.array(mu, dtype=float)
        escalares = invariant_scalars(c_from_mu(MuTriple(*mu)))
        anula = bool(np.all(escalares.beta == 0.0))
        esperado = bool(np.all(mu == mu[0]) or np.sum(mu == 0.0) >= 2)
        erros += int(anula != esperado)
    return float(erros), 0.0


# ---------------------------------------------------------------------------
# Modelo semidireto
# ---------------------------------------------------------------------------

def _translacoes_isometricas(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(max(1, amostras // 2)):
        A = nonunimodular_matrix(_parametros_aleatorios(gerador, 2.0))
        g = GroupPoint(*gerador.uniform(-1.0, 1.0, 3))
        q = GroupPoint(*gerador.uniform(-1.0, 1.0, 3))
        vetores = gerador.normal(size=(2, 3))
        # afim em q: a diferença central só carrega arredondamento
        pior = max(pior, isometry_defect(A, left_translate_map(A, g), q, vetores, h=1e-3))
    return pior, 1e-6


def _serie_exponencial(A: np.ndarray, z: float, termos: int = 40) -> np.ndarray:
    soma = np.eye(2)
    termo = np.eye(2)
    for k in range(1, termos + 1):
        termo = termo @ (z * A) / k
        soma = soma + termo
    return soma


def _exponencial_contra_serie(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(amostras):
        A = nonunimodular_matrix(_parametros_aleatorios(gerador))
        z = float(gerador.uniform(-1.0, 1.0)) * 5.0 / np.linalg.norm(A, 2)
        serie = _serie_exponencial(A, z)
        pior = max(pior, float(np.max(np.abs(matrix_exp(A, z) - serie))) / max(1.0, float(np.max(np.abs(serie)))))
    return pior, 1e-11


# ---------------------------------------------------------------------------
# Construções
# ---------------------------------------------------------------------------

def _distribuicoes_geodesicas(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(50):
        c1 = float(gerador.uniform(0.01, 3.0))
        c3 = -float(gerador.uniform(0.01, 3.0))
        c = StructureConstants(c1, c1 + c3, c3)
        distribuicoes = geodesic_distributions_unimodular(c, exact=True)
        if len(distribuicoes) != 2:
            return math.inf, 1e-12
        for d in distribuicoes:
            pior = max(pior, float(np.max(np.abs(algebraic_second_form(c, d)))), subalgebra_defect(c, d))
    for _ in range(50):
        p = NonUnimodularParams(float(gerador.uniform(0.0, 3.0)), 0.0)
        for d in geodesic_distributions_nonunimodular(p):
            pior = max(pior, float(np.max(np.abs(algebraic_second_form(p, d)))), subalgebra_defect(p, d))
    return pior, 1e-12


def _perfis_deriva(gerador, amostras, corromper):
    pior = 0.0
    for a, Lambda in itertools.product((0.5, 2.0, 3.0), (0.5, 1.0, 4.0)):
        perfil = solve_profile_closed(a, Lambda, 5.0, 1e-3)
        pior = max(pior, float(perfil.first_integral_drift.max()))
    return pior, 1e-6


def _perfis_cota_inferior(gerador, amostras, corromper):
    pior = 0.0
    for a, Lambda in itertools.product((0.5, 2.0, 3.0), (0.5, 1.0, 4.0)):
        perfil = solve_profile_closed(a, Lambda, 5.0, 1e-3)
        cota = -math.log(Lambda) / (2.0 * a)
        pior = max(pior, max(0.0, float(cota - perfil.z.min())))
        centro = len(perfil.s) // 2
        pior = max(pior, abs(float(perfil.zsecond[centro] - profile_second_derivative(a, Lambda, perfil.theta))))
    return pior, 1e-10


def _perfis_convergencia(gerador, amostras, corromper):
    grosso = solve_profile_closed(2.0, 1.0, 2.0, 0.05).first_integral_drift.max()
    fino = solve_profile_closed(2.0, 1.0, 2.0, 0.0125).first_integral_drift.max()
    return float(100.0 * fino / grosso), 1.0


def _umbilicidade_construida(gerador, amostras, corromper):
    pior = 0.0
    perfil = solve_profile_closed(2.0, 1.0, 1.0, 1e-3)
    for direcao in ("x-invariant", "y-invariant"):
        patch = build_invariant_surface(perfil, direcao)
        for v in np.linspace(-0.9, 0.9, 7):
            pior = max(pior, shape_operator(patch, 0.3, float(v)).relative_residual)
    return pior, 1e-5


def _identidades_construidas(gerador, amostras, corromper):
    pior = 0.0
    perfil = solve_profile_closed(2.0, 1.0, 1.0, 1e-3)
    for direcao in ("x-invariant", "y-invariant"):
        patch = build_invariant_surface(perfil, direcao)
        for v in (-0.6, 0.2, 0.7):
            pior = max(pior, grad_lambda_residual(patch, 0.1, v))
            pior = max(pior, *angle_gradient_residual(patch, 0.1, v))
            pior = max(pior, *pointwise_system_residuals(patch, 0.1, v).values())
    return pior, 1e-4


def _gradiente_lambda_convergencia(gerador, amostras, corromper):
    patch = build_invariant_surface(solve_profile_closed(2.0, 1.0, 1.0, 1e-3))
    pontos = [(float(u), float(v)) for u, v in gerador.uniform((-0.5, -0.8), (0.5, 0.8), size=(20, 2))]
    grosso = max(grad_lambda_residual(patch.with_fd_step(1e-2), u, v) for u, v in pontos)
    fino = max(grad_lambda_residual(patch.with_fd_step(5e-3), u, v) for u, v in pontos)
    return float(3.0 * fino / grosso), 1.0


def _tiro_sol3(gerador, amostras, corromper):
    perfil = solve_profile_shooting(-1.0, 0.0, 1e-3, 1.5)
    patch = build_invariant_surface(perfil)
    pior = 0.0
    for v in (-1.0, -0.3, 0.0, 0.4, 1.1):
        amostra = shape_operator(patch, 0.0, v)
        if abs(amostra.lam) < 0.1:
            return math.inf, 1e-4
        pior = max(pior, amostra.relative_residual)
        pior = max(pior, grad_lambda_residual(patch, 0.0, v))
        pior = max(pior, *angle_gradient_residual(patch, 0.0, v))
        pior = max(pior, *pointwise_system_residuals(patch, 0.0, v).values())
    return pior, 1e-4


def _tiro_contra_fechado(gerador, amostras, corromper):
    a = 2.0
    c, t = rescaled_diag_parameter(a)
    fechado = solve_profile_closed(a, 1.0, 1.0, 1e-3)
    tiro = solve_profile_shooting(c, t * fechado.theta, t * 1e-3, t * 1.0)
    diferenca = np.abs(np.column_stack([tiro.w, tiro.z]) - t * np.column_stack([fechado.w, fechado.z]))
    return float(diferenca.max()), 1e-4


def _congruencia(gerador, amostras, corromper):
    a = 2.0
    perfil1 = solve_profile_closed(a, 1.0, 5.0, 1e-3)
    perfil2 = solve_profile_closed(a, math.exp(4.0), 5.0, 1e-3)
    w = congruence_shift(a, 1.0, math.exp(4.0))
    distancia = profile_distance(map_profile(perfil1, w), perfil2)
    A = np.diag([1.0 + a, 1.0 - a])
    isometria = isometry_defect(A, congruence_map(a, w), GroupPoint(0.3, -0.2, 0.1), h=1e-4)
    return max(distancia * 1e-4, isometria), 1e-10


def _inexistencia_gauss(gerador, amostras, corromper):
    pior = 0.0
    for _ in range(50):
        a = float(gerador.uniform(0.1, 3.0))
        while abs(a - 1.0) < 0.05:
            a = float(gerador.uniform(0.1, 3.0))
        p = NonUnimodularParams(a, float(gerador.uniform(0.1, 3.0)))
        for solucao in gauss_locus(p):
            pior = max(pior, 1e-3 / constant_angle_violation(p, solucao.x, solucao.y))
    a, b = 2.0, 1.0
    y1 = math.sqrt(2.0 * a / ((a + 1.0) * (a + 2.0)))
    ancora = 2.0 * a * a * b * (a * a + a + 2.0) / (a + 2.0) ** 2
    polinomios = gauss_polynomials(NonUnimodularParams(a, b))
    erro_ancora = max(abs(polinomios.Q(0.0, s * y1) - ancora) for s in (1.0, -1.0))
    if erro_ancora > 1e-12:
        return math.inf, 1.0
    return pior, 1.0


def _tabela_classificacao(gerador, amostras, corromper):
    exemplos_unimodulares = [((1, 1, 1), "1"), ((2, 1, -1), "2"), ((1, 0, -1), "2")]
    exemplos_nao_unimodulares = [((0.0, 0.7), "1"), ((0.5, 0.0), "3"), ((0.5, 1.0), "4")]
    criterios = [
        ((1, 1, 2), "positive-scalar-curvature"), ((2, 1, -1), None), ((3, 1, -1), "degree-six-polynomial"),
    ]
    rotulos = [
        ((1, 1, 1), "SU(2)"), ((1, 1, -1), "SL̃₂(ℝ)"), ((1, 1, 0), "Ẽ(2)"),
        ((1, 0, -1), "Sol₃"), ((1, 0, 0), "Nil₃"), ((0, 0, 0), "ℝ³"),
    ]
    erros = sum(
        classify_unimodular(StructureConstants.from_iterable(c)).case != caso
        for c, caso in exemplos_unimodulares
    )
    erros += sum(
        classify_nonunimodular(NonUnimodularParams(*p)).case != caso
        for p, caso in exemplos_nao_unimodulares
    )
    erros += sum(
        identify_unimodular_group(StructureConstants.from_iterable(c)) != rotulo
        for c, rotulo in rotulos
    )
    erros += sum(
        nonexistence_evidence_unimodular(StructureConstants.from_iterable(c)).criterion != criterio
        for c, criterio in criterios
    )
    return float(erros), 0.0


def _invariancia_classificacao(gerador, amostras, corromper):
    erros = 0
    for _ in range(max(1, amostras // 4)):
        c = gerador.integers(-3, 4, 3).astype(float)
        referencia = classify_unimodular(StructureConstants.from_iterable(c))
        for permutacao in itertools.permutations(range(3)):
            for sinal in (1.0, -1.0):
                outro = classify_unimodular(StructureConstants.from_iterable(sinal * c[list(permutacao)]))
                erros += int(
                    (outro.case, outro.group_label, outro.params) != (referencia.case, referencia.group_label, referencia.params)
                )
    return float(erros), 0.0


PROPRIEDADES: List[Tuple[str, Avaliacao]] = [
    ("connection_unimodular", _conexao_unimodular),
    ("connection_nonunimodular", _conexao_nao_unimodular),
    ("connection_from_metric", _conexao_da_metrica),
    ("curvature_unimodular", _curvatura_unimodular),
    ("curvature_nonunimodular", _curvatura_nao_unimodular),
    ("hyperbolic_sectional_curvature", _curvatura_hiperbolica),
    ("scalar_curvature_trace", _curvatura_escalar),
    ("beta_sum", _soma_beta),
    ("sol3_anchor", _ancora_sol3),
    ("beta_vanishing", _anulamento_beta),
    ("left_translation_isometry", _translacoes_isometricas),
    ("matrix_exp_series", _exponencial_contra_serie),
    ("geodesic_distributions", _distribuicoes_geodesicas),
    ("profile_first_integral", _perfis_deriva),
    ("profile_lower_bound", _perfis_cota_inferior),
    ("profile_step_convergence", _perfis_convergencia),
    ("constructed_umbilicity", _umbilicidade_construida),
    ("constructed_identities", _identidades_construidas),
    ("grad_lambda_step_convergence", _gradiente_lambda_convergencia),
    ("sol3_shooting", _tiro_sol3),
    ("shooting_matches_closed", _tiro_contra_fechado),
    ("congruence", _congruencia),
    ("gauss_locus_nonexistence", _inexistencia_gauss),
    ("classifier_table", _tabela_classificacao),
    ("classifier_invariance", _invariancia_classificacao),
]


def _avaliar(nome: str, funcao: Avaliacao, gerador: np.random.Generator, amostras: int, corromper: bool) -> PropertyResult:
    try:
        violacao, tolerancia = funcao(gerador, amostras, corromper)
    except Exception as e:
        logger.error(f"Erro ao avaliar a propriedade {nome}: {str(e)}")
        return PropertyResult(nome, math.inf, 0.0)
    logger.debug(f"Propriedade {nome}: violação {violacao:.3e} (tolerância {tolerancia:.1e})")
    return PropertyResult(nome, float(violacao), float(tolerancia))


def run_property_suite(
    semente: int = config.SEMENTE_PADRAO,
    amostras: int = config.AMOSTRAS_PADRAO,
    corromper: bool = False,
) -> List[PropertyResult]:
    """
    Executa todas as propriedades.

    Args:
        semente: Semente de 64 bits dos fluxos aleatórios.
        amostras: Tamanho das amostras aleatórias.
        corromper: Perturba uma entrada das tabelas de conexão (autoteste).

    Returns:
        List[PropertyResult]: Um resultado por propriedade, na ordem de registro.
    """
    geradores = criar_geradores(semente, len(PROPRIEDADES))
    with ThreadPoolExecutor(max_workers=config.obter_workers()) as executor:
        futuros = [
            executor.submit(_avaliar, nome, funcao, gerador, amostras, corromper)
            for (nome, funcao), gerador in zip(PROPRIEDADES, geradores)
        ]
        resultados = [futuro.result() for futuro in futuros]

    falhas = [r.name for r in resultados if not r.passed]
    if falhas:
        logger.warning(f"Propriedades com falha: {', '.join(falhas)}")
    else:
        logger.info(f"Todas as {len(resultados)} propriedades passaram")
    return resultados

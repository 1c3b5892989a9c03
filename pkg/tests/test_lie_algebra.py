"""
Testes da camada algébrica: conexões, curvatura e invariantes escalares.
"""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.core.exceptions import ParameterOutOfRangeError
from src.core.lie_algebra import (
    BASE,
    MuTriple,
    NonUnimodularParams,
    StructureConstants,
    bracket_for,
    bracket_nonunimodular,
    bracket_unimodular,
    c_from_mu,
    connection_for,
    connection_from_bracket,
    connection_nonunimodular,
    connection_semidirect,
    connection_unimodular,
    curvature,
    curvature_coefficients,
    curvature_oracle,
    detect_ektau,
    identify_unimodular_group,
    invariant_scalars,
    mu_from_c,
    nonunimodular_matrix,
    normalize_constants,
    scalar_curvature_from_tensor,
    sectional_curvature,
    verify_connection,
)

CONSTANTES = [(1, 0, -1), (2, 1, -1), (1, 1, 1), (0.3, -2.5, 1.7), (0, 0, 0), (1, 1, 2)]
PARAMETROS = [(0.0, 0.0), (0.0, 1.3), (0.5, 0.0), (2.0, 0.7), (1.0, 2.0), (3.0, 3.0)]

reais = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


def _familias():
    return [StructureConstants.from_iterable(c) for c in CONSTANTES] + [
        NonUnimodularParams(*p) for p in PARAMETROS
    ]


class TestConexao:
    @pytest.mark.parametrize("c", CONSTANTES)
    def test_unimodular_compativel_e_sem_torcao(self, c):
        c = StructureConstants.from_iterable(c)
        relatorio = verify_connection(connection_unimodular(c), lambda x, y: bracket_unimodular(c, x, y))
        assert relatorio.max_violation < 1e-14

    @pytest.mark.parametrize("p", PARAMETROS)
    def test_nao_unimodular_compativel_e_sem_torcao(self, p):
        p = NonUnimodularParams(*p)
        relatorio = verify_connection(connection_nonunimodular(p), lambda x, y: bracket_nonunimodular(p, x, y))
        assert relatorio.max_violation < 1e-14

    def test_tabela_perturbada_e_detectada(self):
        c = StructureConstants(2.0, 1.0, -1.0)
        tabela = connection_unimodular(c).perturbed((0, 1, 2), 1e-3)
        relatorio = verify_connection(tabela, lambda x, y: bracket_unimodular(c, x, y))
        assert relatorio.max_violation >= 0.9e-3

    @pytest.mark.parametrize("constantes, nao_nulas", [((2.0, 1.0, -1.0), 4), ((3.0, 1.0, -1.0), 6)])
    def test_entradas_da_tabela_unimodular(self, constantes, nao_nulas):
        c = StructureConstants(*constantes)
        mu1, mu2, mu3 = mu_from_c(c).as_array()
        gamma = connection_unimodular(c).gamma
        assert gamma[0, 1, 2] == mu1
        assert gamma[1, 2, 0] == mu2
        assert gamma[2, 0, 1] == mu3
        assert np.count_nonzero(gamma) == nao_nulas

    def test_entradas_da_tabela_nao_unimodular(self):
        gamma = connection_nonunimodular(NonUnimodularParams(2.0, 0.5)).gamma
        assert gamma[0, 0, 2] == 3.0
        assert gamma[1, 1, 2] == -1.0
        assert gamma[0, 1, 2] == 1.0
        assert gamma[2, 0, 1] == 0.5

    @pytest.mark.parametrize("c", CONSTANTES)
    def test_koszul_reproduz_tabela_unimodular(self, c):
        c = StructureConstants.from_iterable(c)
        koszul = connection_from_bracket(lambda x, y: bracket_unimodular(c, x, y))
        assert_allclose(koszul.gamma, connection_unimodular(c).gamma, atol=1e-14)

    @pytest.mark.parametrize("p", PARAMETROS)
    def test_semidireto_reproduz_tabela_nao_unimodular(self, p):
        p = NonUnimodularParams(*p)
        tabela = connection_semidirect(nonunimodular_matrix(p))
        assert_allclose(tabela.gamma, connection_nonunimodular(p).gamma, atol=1e-14)

    def test_despacho_por_familia(self):
        c = StructureConstants(1.0, 0.0, -1.0)
        p = NonUnimodularParams(0.5, 0.5)
        assert_allclose(connection_for(c).gamma, connection_unimodular(c).gamma)
        assert_allclose(connection_for(p).gamma, connection_nonunimodular(p).gamma)
        assert_allclose(bracket_for(p)(BASE[0], BASE[2]), bracket_nonunimodular(p, BASE[0], BASE[2]))
        with pytest.raises(TypeError):
            connection_for((1.0, 2.0))

    @given(st.tuples(reais, reais, reais), st.tuples(reais, reais, reais), st.tuples(reais, reais, reais))
    @settings(max_examples=50, deadline=None)
    def test_colchete_antissimetrico(self, c, x, y):
        c = StructureConstants.from_iterable(c)
        x, y = np.array(x), np.array(y)
        assert_allclose(bracket_unimodular(c, x, y), -bracket_unimodular(c, y, x), atol=1e-12)


class TestParametros:
    @pytest.mark.parametrize("a, b", [(-0.1, 0.0), (0.0, -1.0), (float("nan"), 0.0), (1.0, float("inf"))])
    def test_parametros_invalidos(self, a, b):
        with pytest.raises(ParameterOutOfRangeError):
            NonUnimodularParams(a, b)

    def test_mu_e_c_sao_inversos(self):
        c = StructureConstants(0.3, -2.5, 1.7)
        assert_allclose(c_from_mu(mu_from_c(c)).as_array(), c.as_array(), atol=1e-15)


class TestCurvatura:
    @pytest.mark.parametrize("familia", _familias(), ids=str)
    def test_decomposicao_igual_ao_oraculo(self, familia):
        tabela = connection_for(familia)
        colchete = bracket_for(familia)
        for i, j, k in itertools.product(range(3), repeat=3):
            assert_allclose(
                curvature(familia, BASE[i], BASE[j], BASE[k]),
                curvature_oracle(tabela, colchete, BASE[i], BASE[j], BASE[k]),
                atol=1e-12,
            )

    def test_decomposicao_em_vetores_genericos(self):
        familia = NonUnimodularParams(2.0, 0.7)
        gerador = np.random.default_rng(7)
        x, y, z = gerador.normal(size=(3, 3))
        oraculo = curvature_oracle(connection_for(familia), bracket_for(familia), x, y, z)
        assert_allclose(curvature(familia, x, y, z), oraculo, atol=1e-11)

    @pytest.mark.parametrize("b", [0.0, 0.4, 2.5])
    def test_a_zero_tem_curvatura_seccional_menos_um(self, b):
        familia = NonUnimodularParams(0.0, b)
        gerador = np.random.default_rng(11)
        for x, y in gerador.normal(size=(20, 2, 3)):
            assert sectional_curvature(familia, x, y) == pytest.approx(-1.0, abs=1e-9)

    def test_coeficientes_a_zero(self):
        assert_allclose(curvature_coefficients(NonUnimodularParams(0.0, 1.5)), [1.0, 1.0, 1.0], atol=1e-14)

    def test_plano_degenerado(self):
        with pytest.raises(ParameterOutOfRangeError):
            sectional_curvature(StructureConstants(1.0, 1.0, 1.0), BASE[0], 2.0 * BASE[0])

    @pytest.mark.parametrize("c", CONSTANTES)
    def test_curvatura_escalar_e_traco_duplo(self, c):
        c = StructureConstants.from_iterable(c)
        assert scalar_curvature_from_tensor(c) == pytest.approx(invariant_scalars(c).rho, abs=1e-12)

    def test_esfera_redonda(self):
        # c = (2, 2, 2) é a esfera de curvatura seccional 1
        familia = StructureConstants(2.0, 2.0, 2.0)
        assert sectional_curvature(familia, BASE[0], BASE[1]) == pytest.approx(1.0, abs=1e-14)


class TestInvariantesEscalares:
    def test_ancora_sol3(self):
        escalares = invariant_scalars(StructureConstants(1.0, 0.0, -1.0))
        assert escalares.beta.tolist() == [-1.0, 0.0, 1.0]
        assert escalares.delta == -2.0
        assert escalares.rho == -2.0
        assert escalares.grad_bound_a == 1.0

    def test_exemplo_2_1_menos_1(self):
        escalares = invariant_scalars(StructureConstants(2.0, 1.0, -1.0))
        assert escalares.beta.tolist() == [-4.0, 2.0, 2.0]
        assert escalares.delta == -12.0
        assert escalares.rho == -4.0

    def test_constante_do_gradiente_indefinida(self):
        escalares = invariant_scalars(StructureConstants(0.0, 1.0, 1.0))
        assert not escalares.grad_bound_defined
        assert escalares.to_dict()["grad_bound_a"] is None

    @given(st.tuples(reais, reais, reais))
    @settings(max_examples=200, deadline=None)
    def test_soma_de_beta_nula(self, mu):
        escalares = invariant_scalars(c_from_mu(MuTriple(*mu)))
        escala = max(1.0, *(abs(m) for m in mu)) ** 3
        assert abs(escalares.beta.sum()) <= 1e-13 * escala

    @pytest.mark.parametrize("mu", [(1.0, 1.0, 1.0), (2.0, 0.0, 0.0), (0.0, 0.0, 0.0), (-1.5, -1.5, -1.5)])
    def test_beta_anula_nos_casos_previstos(self, mu):
        assert np.all(invariant_scalars(c_from_mu(MuTriple(*mu))).beta == 0.0)

    def test_beta_nao_anula_fora_deles(self):
        assert np.any(invariant_scalars(c_from_mu(MuTriple(1.0, 1.0, 0.0))).beta != 0.0)


class TestNormalizacao:
    @pytest.mark.parametrize("c", CONSTANTES)
    def test_ordem_decrescente(self, c):
        c1, c2, c3 = normalize_constants(StructureConstants.from_iterable(c)).constants.as_array()
        assert c1 >= c2 >= c3

    @pytest.mark.parametrize("c", CONSTANTES)
    def test_invariante_por_troca_de_sinal_e_permutacao(self, c):
        referencia = normalize_constants(StructureConstants.from_iterable(c)).constants
        for permutacao in itertools.permutations(range(3)):
            for sinal in (1.0, -1.0):
                outro = StructureConstants.from_iterable(sinal * np.array(c, dtype=float)[list(permutacao)])
                assert normalize_constants(outro).constants == referencia

    @pytest.mark.parametrize("c", [(-1, 0, 1), (0.3, -2.5, 1.7), (-2, -1, 1), (1, 2, 0)])
    def test_referencial_preserva_colchetes(self, c):
        c = StructureConstants.from_iterable(c)
        normalizado = normalize_constants(c)
        n1, n2, n3 = normalizado.constants.as_array()
        F1, F2, F3 = (normalizado.to_original(e) for e in BASE)
        assert_allclose(bracket_unimodular(c, F1, F2), n3 * F3, atol=1e-14)
        assert_allclose(bracket_unimodular(c, F2, F3), n1 * F1, atol=1e-14)
        assert_allclose(bracket_unimodular(c, F3, F1), n2 * F2, atol=1e-14)

    def test_sol3_invertido_mantem_versao_original(self):
        normalizado = normalize_constants(StructureConstants(-1.0, 0.0, 1.0))
        assert normalizado.constants == StructureConstants(1.0, 0.0, -1.0)
        assert not normalizado.flipped


class TestIdentificacao:
    @pytest.mark.parametrize("c, rotulo", [
        ((1, 1, 1), "SU(2)"),
        ((1, 1, -1), "SL̃₂(ℝ)"),
        ((1, 1, 0), "Ẽ(2)"),
        ((1, 0, -1), "Sol₃"),
        ((1, 0, 0), "Nil₃"),
        ((0, 0, 0), "ℝ³"),
        ((-1, -1, 1), "SL̃₂(ℝ)"),
        ((0, -3, 0), "Nil₃"),
    ])
    def test_tabela_de_sinais(self, c, rotulo):
        assert identify_unimodular_group(StructureConstants.from_iterable(c)) == rotulo

    def test_tolerancia_de_ramo(self):
        c = StructureConstants(1.0, 1e-12, -1.0)
        assert identify_unimodular_group(c) == "Sol₃"
        assert identify_unimodular_group(c, exact=True) == "SL̃₂(ℝ)"

    @pytest.mark.parametrize("c, esperado", [
        ((1, 1, 2), (2.0, 1.0)),
        ((2, 1, 1), (2.0, 1.0)),
        ((1, 1, 1), None),
        ((1, 2, 3), None),
        ((1, 1, 0), None),
    ])
    def test_deteccao_ektau(self, c, esperado):
        assert detect_ektau(StructureConstants.from_iterable(c)) == esperado

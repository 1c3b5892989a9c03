"""
Testes das distribuições geodésicas, dos perfis umbílicos e da congruência.
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.exceptions import ParameterOutOfRangeError
from src.core.lie_algebra import NonUnimodularParams, StructureConstants
from src.core.semidirect import GroupPoint, isometry_defect
from src.core.surface_engine import angle_functions, shape_operator
from src.core.umbilic_constructor import (
    algebraic_second_form,
    build_invariant_surface,
    congruence_map,
    congruence_shift,
    first_integral_residual,
    geodesic_distributions_nonunimodular,
    geodesic_distributions_unimodular,
    invariant_families_congruent,
    map_profile,
    profile_distance,
    profile_from_descriptor,
    profile_second_derivative,
    rescaled_diag_parameter,
    solve_profile_closed,
    solve_profile_shooting,
    subalgebra_defect,
)


@pytest.fixture(scope="module")
def perfil_a2():
    return solve_profile_closed(2.0, 1.0, 1.0, 1e-3)


@pytest.fixture(scope="module")
def perfil_sol3():
    return solve_profile_shooting(-1.0, 0.0, 1e-3, 1.5)


class TestDistribuicoesGeodesicas:
    @pytest.mark.parametrize("c", [(2, 1, -1), (1, 0, -1), (3, 1, -2), (-1, 2, -3), (0.5, 0.2, -0.3)])
    def test_unimodulares_sao_totalmente_geodesicas(self, c):
        familia = StructureConstants.from_iterable(c)
        distribuicoes = geodesic_distributions_unimodular(familia)
        assert len(distribuicoes) == 2
        for d in distribuicoes:
            assert np.max(np.abs(algebraic_second_form(familia, d))) < 1e-12
            assert subalgebra_defect(familia, d) < 1e-12
            assert d.orthogonality_defect() < 1e-14

    @pytest.mark.parametrize("c", [(1, 1, 1), (2, 2, -1), (0, 0, 0), (1, 0, 0)])
    def test_unimodulares_inexistentes(self, c):
        assert geodesic_distributions_unimodular(StructureConstants.from_iterable(c)) == []

    @pytest.mark.parametrize("a", [0.5, 2.0, 3.0])
    def test_nao_unimodulares_com_b_nulo(self, a):
        familia = NonUnimodularParams(a, 0.0)
        distribuicoes = geodesic_distributions_nonunimodular(familia)
        assert [d.label for d in distribuicoes] == ["E1, E3", "E2, E3"]
        for d in distribuicoes:
            assert np.max(np.abs(algebraic_second_form(familia, d))) < 1e-12
            assert subalgebra_defect(familia, d) < 1e-12

    def test_nao_unimodulares_com_b_positivo(self):
        assert geodesic_distributions_nonunimodular(NonUnimodularParams(2.0, 0.5)) == []

    def test_descritor(self):
        d = geodesic_distributions_nonunimodular(NonUnimodularParams(2.0, 0.0))[0]
        assert d.to_descriptor() == {
            "label": "E1, E3",
            "normal": [0.0, -1.0, 0.0],
            "span": [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        }


class TestPerfilFechado:
    @pytest.mark.parametrize("a, Lambda", [(0.5, 0.5), (2.0, 1.0), (3.0, 4.0)])
    def test_integral_primeira(self, a, Lambda):
        perfil = solve_profile_closed(a, Lambda, 5.0, 1e-3)
        assert perfil.first_integral_drift.max() < 1e-6

    @pytest.mark.parametrize("a, Lambda", [(0.5, 0.5), (2.0, 1.0), (0.5, 4.0)])
    def test_minimo_em_zero(self, a, Lambda):
        perfil = solve_profile_closed(a, Lambda, 2.0, 1e-3)
        centro = len(perfil.s) // 2
        assert perfil.s[centro] == 0.0
        assert perfil.z[centro] == pytest.approx(-math.log(Lambda) / (2.0 * a), abs=1e-15)
        assert perfil.z.min() >= perfil.z[centro] - 1e-12
        assert perfil.zsecond[centro] == pytest.approx(profile_second_derivative(a, Lambda, perfil.theta), abs=1e-10)

    def test_paridade(self, perfil_a2):
        assert_allclose(perfil_a2.z, perfil_a2.z[::-1], atol=1e-12)
        assert_allclose(perfil_a2.w, -perfil_a2.w[::-1], atol=1e-12)

    def test_convergencia_de_quarta_ordem(self):
        grosso = solve_profile_closed(2.0, 1.0, 2.0, 0.05).first_integral_drift.max()
        fino = solve_profile_closed(2.0, 1.0, 2.0, 0.0125).first_integral_drift.max()
        assert grosso / fino >= 100.0

    def test_inclinacao_integrada(self, perfil_a2):
        assert_allclose(perfil_a2.tan_phi, np.sinh(4.0 * perfil_a2.s), rtol=1e-8, atol=1e-12)
        assert perfil_a2.first_integral_drift.max() < 1e-9
        grosso = solve_profile_closed(2.0, 1.0, 2.0, 0.05)
        assert grosso.first_integral_drift.max() > 1e-10

    def test_integral_primeira_em_forma_de_grafico(self, perfil_a2):
        centro = len(perfil_a2.s) // 2
        trecho = slice(centro - 200, centro + 201)
        residuo = first_integral_residual(2.0, 1.0, perfil_a2.z[trecho], perfil_a2.zprime[trecho])
        assert np.max(np.abs(residuo)) < 1e-8

    def test_invariante_por_y_tem_maximo(self):
        perfil = solve_profile_closed(2.0, 1.0, 1.0, 1e-3, "y-invariant")
        centro = len(perfil.s) // 2
        assert perfil.z.max() == perfil.z[centro]
        assert perfil.zsecond[centro] == pytest.approx(-4.0, abs=1e-12)
        assert list(perfil.to_frame().columns) == ["s", "x", "z", "zprime", "zsecond", "first_integral_drift"]

    def test_colunas_do_perfil(self, perfil_a2):
        assert list(perfil_a2.to_frame().columns) == ["s", "y", "z", "zprime", "zsecond", "first_integral_drift"]

    def test_estado_entre_amostras(self, perfil_a2):
        centro = len(perfil_a2.s) // 2
        assert_allclose(perfil_a2.state_at(perfil_a2.s[centro + 10]), perfil_a2.states[centro + 10], atol=1e-15)
        meio = perfil_a2.state_at(0.0105)
        assert meio[1] == pytest.approx(0.5 * (perfil_a2.z[centro + 10] + perfil_a2.z[centro + 11]), abs=1e-5)

    @pytest.mark.parametrize("a, Lambda, passo", [
        (1.0, 1.0, 1e-3),
        (0.0, 1.0, 1e-3),
        (-1.0, 1.0, 1e-3),
        (2.0, 0.0, 1e-3),
        (2.0, -1.0, 1e-3),
        (2.0, 1.0, 0.0),
        (2.0, 1.0, float("nan")),
    ])
    def test_parametros_invalidos(self, a, Lambda, passo):
        with pytest.raises(ParameterOutOfRangeError):
            solve_profile_closed(a, Lambda, 1.0, passo)

    def test_direcao_invalida(self):
        with pytest.raises(ParameterOutOfRangeError):
            solve_profile_closed(2.0, 1.0, 1.0, 1e-3, "z-invariant")


class TestSuperficiesInvariantes:
    def test_normal_da_superficie_invariante_por_x(self, perfil_a2):
        patch = build_invariant_surface(perfil_a2)
        for v in (-0.5, 0.0, 0.8):
            nu = angle_functions(patch, 0.2, v)
            assert abs(nu.nu1) < 1e-10
            assert abs(nu.nu3) == pytest.approx(1.0 / math.cosh(4.0 * v), abs=1e-8)

    def test_lambda_da_superficie_invariante_por_x(self, perfil_a2):
        patch = build_invariant_surface(perfil_a2)
        for v in (-0.5, 0.0, 0.8):
            assert abs(shape_operator(patch, 0.2, v).lam) == pytest.approx(3.0 / math.cosh(4.0 * v), abs=1e-6)

    def test_sol3_por_tiro(self, perfil_sol3):
        patch = build_invariant_surface(perfil_sol3)
        for v in (-1.0, 0.0, 0.7):
            amostra = shape_operator(patch, 0.0, v)
            assert amostra.relative_residual < 1e-4
        assert abs(shape_operator(patch, 0.0, 0.0).lam) > 0.1

    def test_tiro_so_gera_invariante_por_x(self, perfil_sol3):
        with pytest.raises(ParameterOutOfRangeError):
            build_invariant_surface(perfil_sol3, "y-invariant")

    @pytest.mark.parametrize("c", [1.0, 1.5, -1.5, float("nan")])
    def test_tiro_fora_do_intervalo(self, c):
        with pytest.raises(ParameterOutOfRangeError):
            solve_profile_shooting(c, 0.0, 1e-3, 1.0)

    def test_tiro_reproduz_perfil_fechado(self):
        a = 2.0
        c, t = rescaled_diag_parameter(a)
        assert (c, t) == (pytest.approx(-1.0 / 3.0), 3.0)
        fechado = solve_profile_closed(a, 1.0, 1.0, 1e-3)
        tiro = solve_profile_shooting(c, t * fechado.theta, t * 1e-3, t * 1.0)
        assert len(tiro.s) == len(fechado.s)
        assert_allclose(tiro.w, t * fechado.w, atol=1e-4)
        assert_allclose(tiro.z, t * fechado.z, atol=1e-4)


class TestCongruencia:
    def test_deslocamento(self):
        assert congruence_shift(2.0, 1.0, math.exp(4.0)) == pytest.approx(-1.0)
        assert congruence_shift(2.0, 1.0, math.exp(2.0)) == pytest.approx(-0.5)

    def test_perfis_de_lambda_diferente_sao_congruentes(self):
        perfil1 = solve_profile_closed(2.0, 1.0, 2.0, 1e-3)
        perfil2 = solve_profile_closed(2.0, math.exp(4.0), 2.0, 1e-3)
        w = congruence_shift(2.0, 1.0, math.exp(4.0))
        assert profile_distance(map_profile(perfil1, w), perfil2) < 1e-6

    def test_deslocamento_invariante_por_y(self):
        assert congruence_shift(2.0, 1.0, math.exp(4.0), "y-invariant") == pytest.approx(1.0)
        perfil1 = solve_profile_closed(2.0, 1.0, 1.0, 1e-3, "y-invariant")
        perfil2 = solve_profile_closed(2.0, math.exp(4.0), 1.0, 1e-3, "y-invariant")
        w = congruence_shift(2.0, 1.0, math.exp(4.0), "y-invariant")
        assert profile_distance(map_profile(perfil1, w), perfil2) < 1e-6

    def test_mapa_de_congruencia_e_isometria(self):
        A = np.diag([3.0, -1.0])
        assert isometry_defect(A, congruence_map(2.0, -1.0), GroupPoint(0.3, -0.2, 0.1), h=1e-4) < 1e-10

    def test_amostragens_incompativeis(self, perfil_a2):
        with pytest.raises(ParameterOutOfRangeError):
            profile_distance(np.zeros((3, 2)), perfil_a2)

    def test_familias_invariantes_nao_sao_congruentes(self, perfil_a2):
        x_invariante = build_invariant_surface(perfil_a2, "x-invariant")
        y_invariante = build_invariant_surface(perfil_a2, "y-invariant")
        assert invariant_families_congruent(x_invariante, build_invariant_surface(perfil_a2)) is True
        assert invariant_families_congruent(x_invariante, y_invariante) is False


class TestDescritores:
    def test_perfil_fechado(self, perfil_a2):
        reconstruido = profile_from_descriptor(perfil_a2.descriptor(), y_max=1.0, step=1e-3)
        assert_allclose(reconstruido.z, perfil_a2.z)

    def test_perfil_de_tiro(self):
        perfil = profile_from_descriptor({"model": "diag", "c": -0.5, "z0": 0.2}, y_max=0.5, step=1e-2)
        assert perfil.model == "diag"
        assert perfil.theta == 0.2

    def test_descritor_desconhecido(self):
        with pytest.raises(ParameterOutOfRangeError):
            profile_from_descriptor({"model": "esfera"})

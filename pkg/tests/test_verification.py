"""
Testes da bateria de propriedades.
"""
import math

import numpy as np
import pytest

from src.core.verification import PROPRIEDADES, PropertyResult, _avaliar, run_property_suite
from src.utils.aleatorio import criar_gerador


@pytest.fixture(scope="module")
def resultados():
    return run_property_suite(semente=7, amostras=4)


def _propriedade(nome):
    return dict(PROPRIEDADES)[nome]


class TestResultado:
    def test_aprovacao(self):
        assert PropertyResult("x", 1e-15, 1e-14).passed
        assert PropertyResult("x", 0.0, 0.0).passed
        assert not PropertyResult("x", 2e-14, 1e-14).passed
        assert not PropertyResult("x", math.inf, 1.0).passed
        assert not PropertyResult("x", math.nan, 1.0).passed

    def test_linha(self):
        linha = PropertyResult("beta_sum", 1.5e-16, 1e-12).linha()
        assert linha.split() == ["beta_sum", "1.500e-16", "1.0e-12", "PASS"]


class TestBateria:
    def test_ordem_de_registro(self, resultados):
        assert [r.name for r in resultados] == [nome for nome, _ in PROPRIEDADES]

    def test_todas_passam(self, resultados):
        falhas = [r.linha() for r in resultados if not r.passed]
        assert falhas == []

    @pytest.mark.parametrize("nome", ["connection_unimodular", "connection_nonunimodular"])
    def test_tabela_corrompida_e_detectada(self, nome):
        gerador = criar_gerador(7)
        resultado = _avaliar(nome, _propriedade(nome), gerador, 3, True)
        assert not resultado.passed
        assert resultado.max_violation > 1e-6

    def test_mesma_semente_mesmo_resultado(self):
        nome = "beta_sum"
        violacoes = [
            _avaliar(nome, _propriedade(nome), criar_gerador(11), 10, False).max_violation
            for _ in range(2)
        ]
        assert violacoes[0] == violacoes[1]

    def test_excecao_vira_falha(self):
        def quebrada(gerador, amostras, corromper):
            raise np.linalg.LinAlgError("singular")

        resultado = _avaliar("quebrada", quebrada, criar_gerador(1), 1, False)
        assert resultado.max_violation == math.inf
        assert not resultado.passed

    @pytest.mark.parametrize("semente", [7, 11, 13])
    def test_translacoes_longe_da_tolerancia(self, semente):
        nome = "left_translation_isometry"
        resultado = _avaliar(nome, _propriedade(nome), criar_gerador(semente), 20, False)
        assert resultado.max_violation < 0.1 * resultado.tolerance

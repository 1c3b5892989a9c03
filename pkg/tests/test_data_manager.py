"""
Testes da exportação dos dados e do validador do relatório.
"""
import copy
import json

import pandas as pd
import pytest

from src.core import config
from src.core.classifier import classify_nonunimodular, classify_unimodular, gauss_locus
from src.core.data_manager import DataManager
from src.core.lie_algebra import NonUnimodularParams, StructureConstants
from src.core.report_schema import validar_relatorio
from src.core.surface_engine import sample_grid
from src.core.umbilic_constructor import build_invariant_surface, solve_profile_closed


@pytest.fixture
def gerenciador(tmp_path):
    return DataManager(tmp_path)


@pytest.fixture(scope="module")
def perfil():
    return solve_profile_closed(2.0, 1.0, 0.1, 1e-2)


class TestExportacao:
    def test_perfil_em_csv(self, gerenciador, perfil, tmp_path):
        caminho = gerenciador.exportar_perfil(perfil, "perfil.csv")
        assert caminho == tmp_path / "perfil.csv"
        conteudo = caminho.read_bytes()
        assert b"\r\n" not in conteudo
        linhas = conteudo.decode("utf-8").splitlines()
        assert linhas[0] == "s,y,z,zprime,zsecond,first_integral_drift"
        assert len(linhas) == len(perfil.s) + 1
        primeiro = linhas[1].split(",")[0]
        assert primeiro == "%.12e" % perfil.s[0]

    def test_diretorios_intermediarios(self, gerenciador, perfil, tmp_path):
        caminho = gerenciador.exportar_perfil(perfil, tmp_path / "a" / "b" / "perfil.csv")
        assert caminho.exists()

    def test_grade(self, gerenciador, perfil):
        grade = sample_grid(build_invariant_surface(perfil), 2, 3)
        caminho = gerenciador.exportar_grade(grade, "grade.csv")
        assert list(pd.read_csv(caminho).columns) == config.COLUNAS_GRADE

    def test_grade_com_colunas_erradas(self, gerenciador):
        with pytest.raises(ValueError):
            gerenciador.exportar_grade(pd.DataFrame({"u": [0.0], "v": [0.0]}), "grade.csv")

    def test_zeros_de_gauss(self, gerenciador):
        p = NonUnimodularParams(2.0, 1.0)
        caminho = gerenciador.exportar_gauss(p, gauss_locus(p), "gauss.csv")
        dados = pd.read_csv(caminho)
        assert list(dados.columns) == ["x", "y", "p_residual", "q_residual", "constant_angle_violation"]
        assert (dados["constant_angle_violation"] >= 1e-3).all()

    def test_relatorio_json(self, gerenciador):
        relatorio = classify_unimodular(StructureConstants(1.0, 0.0, -1.0))
        caminho = gerenciador.exportar_relatorio(relatorio, "relatorio.json")
        texto = caminho.read_text(encoding="utf-8")
        assert "Sol₃" in texto
        dados = json.loads(texto)
        assert list(dados) == ["family", "params", "group_label", "case", "surfaces", "evidence", "lcf"]
        validar_relatorio(dados)


class TestLeitura:
    def test_carregar_e_resumir(self, gerenciador, perfil):
        caminho = gerenciador.exportar_perfil(perfil, "perfil.csv")
        dados = gerenciador.carregar_perfil(caminho)
        assert len(dados) == len(perfil.s)
        resumo = gerenciador.resumo_perfil()
        assert resumo["amostras"] == len(perfil.s)
        assert resumo["z_min"] == pytest.approx(perfil.z.min(), rel=1e-11)

    def test_arquivo_inexistente(self, gerenciador, tmp_path):
        with pytest.raises(ValueError):
            gerenciador.carregar_perfil(tmp_path / "nao_existe.csv")

    def test_colunas_faltantes(self, gerenciador, tmp_path):
        arquivo = tmp_path / "incompleto.csv"
        arquivo.write_text("s,z\n0.0,1.0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="zprime"):
            gerenciador.carregar_perfil(arquivo)

    def test_resumo_sem_dados(self, gerenciador):
        with pytest.raises(ValueError):
            gerenciador.resumo_perfil()


class TestValidador:
    @pytest.fixture
    def relatorio(self):
        return classify_nonunimodular(NonUnimodularParams(0.5, 0.0)).to_dict()

    def test_relatorio_valido(self, relatorio):
        validar_relatorio(relatorio)

    def test_ordem_dos_campos(self, relatorio):
        invertido = dict(reversed(list(relatorio.items())))
        with pytest.raises(ValueError, match="ordem"):
            validar_relatorio(invertido)

    def test_superficies_vazias_fora_da_inexistencia(self, relatorio):
        relatorio["surfaces"] = []
        with pytest.raises(ValueError, match="inexistência"):
            validar_relatorio(relatorio)

    def test_tipo_desconhecido(self, relatorio):
        relatorio["surfaces"][0] = {"kind": "esfera", "descriptor": {}}
        with pytest.raises(ValueError, match="kind"):
            validar_relatorio(relatorio)

    def test_parametros_da_familia_errada(self, relatorio):
        relatorio["params"] = {"c1": 1.0, "c2": 0.0, "c3": -1.0}
        with pytest.raises(ValueError, match="params"):
            validar_relatorio(relatorio)

    def test_valor_nao_finito(self, relatorio):
        relatorio["evidence"] = copy.deepcopy(relatorio["evidence"])
        relatorio["evidence"]["curvature_coefficients"][0] = float("nan")
        with pytest.raises(ValueError, match="finito"):
            validar_relatorio(relatorio)

    def test_caso_invalido(self, relatorio):
        relatorio["family"] = "unimodular"
        relatorio["params"] = {"c1": 1.0, "c2": 1.0, "c3": 1.0}
        relatorio["case"] = "4"
        with pytest.raises(ValueError, match="case"):
            validar_relatorio(relatorio)

    def test_lcf_booleano(self, relatorio):
        relatorio["lcf"] = 0
        with pytest.raises(ValueError, match="lcf"):
            validar_relatorio(relatorio)

    def test_familia_fora_do_esquema(self, relatorio):
        relatorio["family"] = "solvivel"
        with pytest.raises(ValueError, match="family"):
            validar_relatorio(relatorio)

    def test_campo_extra_na_superficie(self, relatorio):
        relatorio["surfaces"][0] = dict(relatorio["surfaces"][0], nota="extra")
        with pytest.raises(ValueError, match="campo inesperado 'nota'"):
            validar_relatorio(relatorio)

    def test_parametro_nao_numerico(self, relatorio):
        relatorio["params"] = {"a": "0.5", "b": 0.0}
        with pytest.raises(ValueError, match=r"params\.a deve ser do tipo number"):
            validar_relatorio(relatorio)

"""
Módulo responsável pela exportação e leitura dos dados gerados.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from src.core import config
from src.core.classifier import ClassificationReport, GaussLocusSolution, constant_angle_violation
from src.core.lie_algebra import NonUnimodularParams
from src.core.report_schema import validar_relatorio
from src.core.umbilic_constructor import UmbilicProfile

logger = logging.getLogger(__name__)

COLUNAS_PERFIL_BASE = ["s", "z", "zprime", "zsecond", "first_integral_drift"]
COLUNAS_GAUSS = ["x", "y", "p_residual", "q_residual", "constant_angle_violation"]


class DataManager:
    """Classe responsável por gravar perfis, grades e relatórios."""

    def __init__(self, diretorio_saida: Optional[Path] = None):
        """
        Inicializa o gerenciador de dados.

        Args:
            diretorio_saida: Diretório padrão dos arquivos (default: config.DIR_OUTPUT).
        """
        self.diretorio_saida = Path(diretorio_saida) if diretorio_saida else config.DIR_OUTPUT
        self.dados: Optional[pd.DataFrame] = None

    def _caminho(self, arquivo: Path) -> Path:
        arquivo = Path(arquivo)
        if not arquivo.is_absolute() and arquivo.parent == Path("."):
            arquivo = self.diretorio_saida / arquivo
        arquivo.parent.mkdir(parents=True, exist_ok=True)
        return arquivo

    def _gravar_csv(self, dados: pd.DataFrame, arquivo: Path) -> Path:
        caminho = self._caminho(arquivo)
        try:
            dados.to_csv(
                caminho,
                index=False,
                float_format=config.CSV_FLOAT_FORMAT,
                lineterminator="\n",
            )
        except OSError as e:
            logger.error(f"Erro ao gravar {caminho}: {str(e)}")
            raise
        logger.info(f"Arquivo gravado: {caminho} ({len(dados)} linhas)")
        return caminho

    def exportar_perfil(self, perfil: UmbilicProfile, arquivo: Path) -> Path:
        """
        Grava o perfil em CSV.

        Args:
            perfil: Perfil integrado.
            arquivo: Caminho do CSV.

        Returns:
            Path: Caminho efetivamente gravado.
        """
        return self._gravar_csv(perfil.to_frame(), arquivo)

    def exportar_grade(self, grade: pd.DataFrame, arquivo: Path) -> Path:
        """
        Grava uma grade de superfície em CSV.

        Raises:
            ValueError: Se a grade não tiver as colunas canônicas.
        """
        if list(grade.columns) != config.COLUNAS_GRADE:
            raise ValueError(f"Colunas da grade fora do padrão: {list(grade.columns)}")
        return self._gravar_csv(grade, arquivo)

    def exportar_gauss(
        self,
        parametros: NonUnimodularParams,
        solucoes: List[GaussLocusSolution],
        arquivo: Path,
    ) -> Path:
        linhas = [
            {
                **solucao.to_dict(),
                "constant_angle_violation": constant_angle_violation(parametros, solucao.x, solucao.y),
            }
            for solucao in solucoes
        ]
        return self._gravar_csv(pd.DataFrame(linhas, columns=COLUNAS_GAUSS), arquivo)

    @staticmethod
    def relatorio_json(relatorio: ClassificationReport) -> str:
        """Serializa o relatório (UTF-8, ordem fixa de campos) já validado."""
        dados = relatorio.to_dict()
        validar_relatorio(dados)
        return json.dumps(dados, ensure_ascii=False, indent=2, allow_nan=False)

    def exportar_relatorio(self, relatorio: ClassificationReport, arquivo: Path) -> Path:
        caminho = self._caminho(arquivo)
        try:
            with open(caminho, "w", encoding="utf-8", newline="\n") as f:
                f.write(self.relatorio_json(relatorio))
                f.write("\n")
        except OSError as e:
            logger.error(f"Erro ao gravar {caminho}: {str(e)}")
            raise
        logger.info(f"Relatório gravado: {caminho}")
        return caminho

    def carregar_perfil(self, arquivo: Path) -> pd.DataFrame:
        """
        Carrega um perfil exportado.

        Args:
            arquivo: Caminho do CSV.

        Returns:
            DataFrame com os dados carregados.

        Raises:
            ValueError: Se o arquivo não existir ou não tiver as colunas necessárias.
        """
        arquivo = Path(arquivo)
        if not arquivo.exists():
            raise ValueError(f"Arquivo não encontrado: {arquivo}")

        self.dados = pd.read_csv(arquivo)

        colunas_faltantes = [col for col in COLUNAS_PERFIL_BASE if col not in self.dados.columns]
        if not ({"x", "y"} & set(self.dados.columns)):
            colunas_faltantes.append("y|x")
        if colunas_faltantes:
            raise ValueError(
                f"Colunas necessárias não encontradas no arquivo: {', '.join(colunas_faltantes)}"
            )

        return self.dados

    def resumo_perfil(self) -> Dict[str, float]:
        """
        Resumo do perfil carregado.

        Raises:
            ValueError: Se os dados não foram carregados.
        """
        if self.dados is None:
            raise ValueError("Dados não carregados")

        return {
            "amostras": int(len(self.dados)),
            "z_min": float(self.dados["z"].min()),
            "deriva_maxima": float(self.dados["first_integral_drift"].max()),
        }

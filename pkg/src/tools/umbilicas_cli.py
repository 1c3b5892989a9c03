#!/usr/bin/env python
"""
Linha de comando para classificar, construir e verificar superfícies
totalmente umbílicas em grupos de Lie métricos tridimensionais.

Subcomandos:
    classify   Relatório JSON da classificação no stdout.
    construct  CSV do perfil e da grade da superfície gerada.
    verify     Tabela de propriedades; código 1 se alguma falhar.
    report     Relatório JSON e todos os CSVs associados num diretório.

Códigos de saída: 0 sucesso, 1 verificação com falha, 2 parâmetros
inválidos, 3 falha do método de tiro.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from src.core import config
from src.core.classifier import (
    TIPO_PERFIL,
    ClassificationReport,
    classify_nonunimodular,
    classify_unimodular,
    gauss_locus,
)
from src.core.data_manager import DataManager
from src.core.exceptions import ParameterOutOfRangeError, RootFindingError
from src.core.lie_algebra import NonUnimodularParams, StructureConstants
from src.core.surface_engine import sample_grid
from src.core.umbilic_constructor import (
    DIRECOES,
    X_INVARIANTE,
    UmbilicProfile,
    build_invariant_surface,
    profile_from_descriptor,
    solve_profile_closed,
    solve_profile_shooting,
)
from src.core.verification import run_property_suite
from src.utils.logger import setup_logger

logger = logging.getLogger(__name__)

SAIDA_OK = 0
SAIDA_FALHA_VERIFICACAO = 1
SAIDA_PARAMETROS = 2
SAIDA_TIRO = 3


def _pares_chave_valor(itens: Sequence[str], permitidas: Sequence[str]) -> Dict[str, str]:
    """
    Converte ["a=2", "lambda=1"] em {"a": "2", "lambda": "1"}.

    Raises:
        ParameterOutOfRangeError: Item sem "=" ou chave desconhecida.
    """
    pares: Dict[str, str] = {}
    for item in itens:
        chave, separador, valor = item.partition("=")
        chave = chave.strip().lower()
        if not separador or chave not in permitidas:
            raise ParameterOutOfRangeError(
                f"Parâmetro inválido {item!r}; esperado chave=valor com chave em {', '.join(permitidas)}"
            )
        pares[chave] = valor.strip()
    return pares


def _real(pares: Dict[str, str], chave: str, padrao: Optional[float] = None) -> float:
    if chave not in pares:
        if padrao is None:
            raise ParameterOutOfRangeError(f"Parâmetro obrigatório ausente: {chave}")
        return padrao
    try:
        valor = float(pares[chave])
    except ValueError:
        raise ParameterOutOfRangeError(f"{chave} deve ser numérico (recebido {pares[chave]!r})")
    if not math.isfinite(valor):
        raise ParameterOutOfRangeError(f"{chave} deve ser finito (recebido {pares[chave]!r})")
    return valor


def _classificar(args: argparse.Namespace) -> ClassificationReport:
    if args.unimodular is not None:
        return classify_unimodular(StructureConstants.from_iterable(args.unimodular), args.exact)
    return classify_nonunimodular(NonUnimodularParams(*args.nonunimodular), args.exact)


def _perfil_da_superficie(perfil: UmbilicProfile, s_max: float) -> UmbilicProfile:
    """Mesmo perfil restrito à meia-largura em que a superfície continua imersa."""
    if perfil.s_max <= s_max:
        return perfil
    return profile_from_descriptor(perfil.descriptor(), y_max=s_max, step=perfil.step)


def _grade_da_superficie(perfil: UmbilicProfile, args: argparse.Namespace):
    superficie = build_invariant_surface(_perfil_da_superficie(perfil, args.surface_s_max))
    return sample_grid(superficie, *args.grid)


def _arquivo_superficie(arquivo: Path) -> Path:
    return arquivo.with_name(f"{arquivo.stem}_superficie{arquivo.suffix or '.csv'}")


# ---------------------------------------------------------------------------
# Subcomandos
# ---------------------------------------------------------------------------

def cmd_classify(args: argparse.Namespace) -> int:
    relatorio = _classificar(args)
    print(DataManager.relatorio_json(relatorio))
    return SAIDA_OK


def cmd_construct(args: argparse.Namespace) -> int:
    if args.shooting is not None:
        pares = _pares_chave_valor(args.shooting, ("c", "z0"))
        perfil = solve_profile_shooting(
            _real(pares, "c"),
            _real(pares, "z0", 0.0),
            args.step or config.PASSO_TIRO,
            args.s_max or config.S_MAX_TIRO,
        )
    else:
        pares = _pares_chave_valor(args.profile, ("a", "lambda", "direction"))
        direcao = pares.get("direction", X_INVARIANTE)
        if direcao not in DIRECOES:
            raise ParameterOutOfRangeError(f"Direção inválida: {direcao!r}")
        perfil = solve_profile_closed(
            _real(pares, "a"),
            _real(pares, "lambda", 1.0),
            args.s_max or config.S_MAX_PERFIL,
            args.step or config.PASSO_RK4,
            direcao,
        )

    grade = _grade_da_superficie(perfil, args)
    gerenciador = DataManager()
    arquivo_perfil = gerenciador.exportar_perfil(perfil, args.out)
    arquivo_grade = gerenciador.exportar_grade(grade, _arquivo_superficie(Path(args.out)))

    print(
        f"perfil={arquivo_perfil} amostras={len(perfil.s)} "
        f"superficie={arquivo_grade} pontos={len(grade)} "
        f"deriva_maxima={float(perfil.first_integral_drift.max()):.3e} "
        f"residuo_maximo={float(grade['residual'].max()):.3e}"
    )
    return SAIDA_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.samples < 1:
        raise ParameterOutOfRangeError(f"--samples deve ser positivo (recebido {args.samples})")
    semente = config.obter_semente(args.seed)
    logger.info(f"Verificação com semente {semente} e {args.samples} amostras")

    resultados = run_property_suite(semente, args.samples, args.corromper)
    for resultado in resultados:
        print(resultado.linha())
    return SAIDA_OK if all(r.passed for r in resultados) else SAIDA_FALHA_VERIFICACAO


def cmd_report(args: argparse.Namespace) -> int:
    relatorio = _classificar(args)
    diretorio = Path(args.out_dir)
    gerenciador = DataManager(diretorio)
    gravados: List[Path] = [gerenciador.exportar_relatorio(relatorio, diretorio / "relatorio.json")]

    indice = 0
    for superficie in relatorio.surfaces:
        if superficie.kind != TIPO_PERFIL:
            continue
        indice += 1
        perfil = profile_from_descriptor(superficie.descriptor)
        caminho_perfil = gerenciador.exportar_perfil(perfil, diretorio / f"perfil_{indice}.csv")
        gerenciador.carregar_perfil(caminho_perfil)
        resumo = gerenciador.resumo_perfil()
        logger.info(
            f"{caminho_perfil.name}: {resumo['amostras']} amostras, z mínimo {resumo['z_min']:.6f}, "
            f"deriva máxima {resumo['deriva_maxima']:.3e}"
        )
        gravados.append(caminho_perfil)
        gravados.append(gerenciador.exportar_grade(
            _grade_da_superficie(perfil, args), diretorio / f"superficie_{indice}.csv"
        ))

    if relatorio.evidence.get("criterion") == "gauss-locus":
        parametros = NonUnimodularParams(*args.nonunimodular)
        gravados.append(gerenciador.exportar_gauss(parametros, gauss_locus(parametros), diretorio / "gauss_locus.csv"))

    for caminho in gravados:
        print(caminho)
    return SAIDA_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _adicionar_familia(parser: argparse.ArgumentParser) -> None:
    grupo = parser.add_mutually_exclusive_group(required=True)
    grupo.add_argument("--unimodular", nargs=3, type=float, metavar=("C1", "C2", "C3"),
                       help="Constantes de estrutura do grupo unimodular")
    grupo.add_argument("--nonunimodular", nargs=2, type=float, metavar=("A", "B"),
                       help="Parâmetros a, b ≥ 0 do grupo não unimodular")
    parser.add_argument("--exact", action="store_true",
                        help="Compara os ramos sem tolerância (entradas inteiras)")


def _adicionar_superficie(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", nargs=2, type=int, metavar=("NU", "NV"),
                        default=list(config.GRADE_SUPERFICIE), help="Resolução da grade da superfície")
    parser.add_argument("--surface-s-max", type=float, default=config.S_MAX_SUPERFICIE,
                        help="Meia-largura (comprimento de arco) da superfície amostrada")


def criar_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umbilicas",
        description="Superfícies totalmente umbílicas em grupos de Lie métricos tridimensionais",
    )
    subparsers = parser.add_subparsers(dest="comando", required=True)

    classify = subparsers.add_parser("classify", help="Classifica e imprime o relatório JSON")
    _adicionar_familia(classify)
    classify.set_defaults(func=cmd_classify)

    construct = subparsers.add_parser("construct", help="Integra um perfil e amostra a superfície")
    origem = construct.add_mutually_exclusive_group(required=True)
    origem.add_argument("--profile", nargs="+", metavar="CHAVE=VALOR",
                        help="a=<a> lambda=<Λ> [direction=x-invariant|y-invariant]")
    origem.add_argument("--shooting", nargs="+", metavar="CHAVE=VALOR",
                        help="c=<c> [z0=<z0>] no modelo diag(1, c)")
    construct.add_argument("--out", type=Path, required=True, help="CSV do perfil")
    construct.add_argument("--step", type=float, default=None, help="Passo do RK4")
    construct.add_argument("--s-max", type=float, default=None, help="Meia-largura do perfil")
    _adicionar_superficie(construct)
    construct.set_defaults(func=cmd_construct)

    verify = subparsers.add_parser("verify", help="Executa a bateria de propriedades")
    verify.add_argument("--seed", type=int, default=config.SEMENTE_PADRAO, help="Semente de 64 bits")
    verify.add_argument("--samples", type=int, default=config.AMOSTRAS_PADRAO, help="Tamanho das amostras")
    verify.add_argument("--corromper", action="store_true", help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)

    report = subparsers.add_parser("report", help="Grava relatório JSON e CSVs num diretório")
    _adicionar_familia(report)
    report.add_argument("--out-dir", type=Path, required=True, help="Diretório de saída")
    _adicionar_superficie(report)
    report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ponto de entrada da linha de comando.

    Args:
        argv: Argumentos (padrão: sys.argv[1:]).

    Returns:
        int: Código de saída.
    """
    setup_logger(config.obter_nivel_log(), config.log_em_arquivo())
    try:
        args = criar_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        return args.func(args)
    except RootFindingError as e:
        logger.error(f"Falha no método de tiro: {str(e)}")
        return SAIDA_TIRO
    except ValueError as e:
        logger.error(f"Parâmetros inválidos: {str(e)}")
        return SAIDA_PARAMETROS


if __name__ == "__main__":
    sys.exit(main())

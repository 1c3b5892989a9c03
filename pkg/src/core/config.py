"""
Módulo responsável pelas configurações do sistema.
"""
import logging
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Diretórios
DIR_BASE = Path(__file__).parent.parent.parent
DIR_DATA = DIR_BASE / "data"
DIR_OUTPUT = DIR_DATA / "output"

# Diferenças finitas e integração
PASSO_FD = 1e-5
PASSO_RK4 = 1e-3
PASSO_TIRO = 1e-3
S_MAX_PERFIL = 5.0
S_MAX_TIRO = 3.0
S_MAX_SUPERFICIE = 2.0

# Tolerâncias
TOLERANCIA_RAMO = 1e-9
TOLERANCIA_UMBILICA = 1e-4
TOLERANCIA_IMERSAO = 1e-8
TOLERANCIA_TIRO = 1e-10
INTERVALO_TIRO = 1e4

# Busca de zeros comuns de P e Q
RESOLUCAO_GAUSS = 400
TOLERANCIA_NEWTON = 1e-9
DISTANCIA_DUPLICATAS = 1e-6
# canto conta como zero abaixo de FATOR·(passo da grade)²·max|valor|
FATOR_TANGENCIA_GAUSS = 10.0

# Grade padrão das superfícies exportadas (u, v)
GRADE_SUPERFICIE = (9, 41)

# Exportação
CSV_FLOAT_FORMAT = "%.12e"
COLUNAS_GRADE = [
    "u", "v", "x", "y", "z", "nu1", "nu2", "nu3", "lambda", "residual"
]

# Variáveis de ambiente
SEMENTE_PADRAO = 20240611
AMOSTRAS_PADRAO = 200


def obter_semente(semente: int = SEMENTE_PADRAO) -> int:
    """Retorna a semente efetiva; UMBILIC_SEED tem precedência sobre o argumento."""
    valor = os.getenv("UMBILIC_SEED")
    if valor is None or valor.strip() == "":
        return semente
    try:
        return int(valor) & 0xFFFFFFFFFFFFFFFF
    except ValueError:
        raise ValueError(f"UMBILIC_SEED inválida: {valor!r}")


def obter_nivel_log() -> int:
    """Nível de log definido em UMBILIC_LOG_LEVEL (padrão INFO)."""
    nome = os.getenv("UMBILIC_LOG_LEVEL", "INFO").upper()
    return getattr(logging, nome, logging.INFO)


def log_em_arquivo() -> bool:
    return os.getenv("UMBILIC_LOG_FILE", "0").strip().lower() in ("1", "true", "sim")


def obter_workers() -> int:
    try:
        return max(1, int(os.getenv("UMBILIC_WORKERS", "4")))
    except ValueError:
        return 4

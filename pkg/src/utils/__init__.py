"""
Pacote de utilitários.
"""
from .aleatorio import criar_gerador, criar_geradores
from .logger import setup_logger

__all__ = ['setup_logger', 'criar_gerador', 'criar_geradores']

"""
Erros do domínio.

Todos derivam de ValueError, exceto a falha do método de tiro
(RuntimeError).
"""


class ParameterOutOfRangeError(ValueError):
    """Parâmetro numérico fora do intervalo aceito pela operação."""


class DegenerateImmersionError(ValueError):
    """A carta deixa de ser imersão no ponto avaliado."""


class PreconditionViolationError(ValueError):
    """Pré-condição pontual violada (por exemplo, superfície não umbílica)."""


class FamilyMismatchError(ValueError):
    """Resíduos pedidos para uma família diferente da do modelo ambiente."""


class RootFindingError(RuntimeError):
    """O método de tiro não conseguiu igualar as curvaturas principais."""

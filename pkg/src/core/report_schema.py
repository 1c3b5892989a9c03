"""
Esquema JSON do relatório de classificação e seu validador.
"""
import logging
import math
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

CAMPOS_RELATORIO = ["family", "params", "group_label", "case", "surfaces", "evidence", "lcf"]

ESQUEMA_RELATORIO: Dict[str, Any] = {
    "type": "object",
    "required": CAMPOS_RELATORIO,
    "additionalProperties": False,
    "properties": {
        "family": {"enum": ["unimodular", "non-unimodular"]},
        "params": {"type": "object", "additionalProperties": {"type": "number"}},
        "group_label": {"type": "string"},
        "case": {"enum": ["1", "2", "3", "4"]},
        "surfaces": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "descriptor"],
                "additionalProperties": False,
                "properties": {
                    "kind": {
                        "enum": [
                            "totally-geodesic-distribution",
                            "invariant-umbilic-profile",
                            "constant-curvature-classical",
                            "none",
                        ]
                    },
                    "descriptor": {"type": "object"},
                },
            },
        },
        "evidence": {"type": "object"},
        "lcf": {"type": "boolean"},
    },
}

PARAMETROS_POR_FAMILIA = {
    "unimodular": ["c1", "c2", "c3"],
    "non-unimodular": ["a", "b"],
}

CASOS_POR_FAMILIA = {
    "unimodular": {"1", "2", "3"},
    "non-unimodular": {"1", "2", "3", "4"},
}

CASOS_SEM_SUPERFICIES = {
    "unimodular": {"3"},
    "non-unimodular": {"4"},
}


TIPOS_JSON = {
    "object": lambda v: isinstance(v, dict),
    "array": lambda v: isinstance(v, list),
    "string": lambda v: isinstance(v, str),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "boolean": lambda v: isinstance(v, bool),
}


def _numeros_finitos(valor: Any, caminho: str, erros: List[str]) -> None:
    if isinstance(valor, float) and not math.isfinite(valor):
        erros.append(f"{caminho}: valor não finito")
    elif isinstance(valor, dict):
        for chave, item in valor.items():
            _numeros_finitos(item, f"{caminho}.{chave}", erros)
    elif isinstance(valor, list):
        for indice, item in enumerate(valor):
            _numeros_finitos(item, f"{caminho}[{indice}]", erros)


def _validar_contra_esquema(valor: Any, esquema: Dict[str, Any], caminho: str, erros: List[str]) -> None:
    """Aplica enum, type, required, properties, additionalProperties e items."""
    if "enum" in esquema and valor not in esquema["enum"]:
        erros.append(f"{caminho} inválido: {valor!r} (esperado um de {esquema['enum']})")
        return
    tipo = esquema.get("type")
    if tipo is not None and not TIPOS_JSON[tipo](valor):
        erros.append(f"{caminho} deve ser do tipo {tipo}")
        return

    if isinstance(valor, dict):
        obrigatorios = esquema.get("required", [])
        ausentes = [campo for campo in obrigatorios if campo not in valor]
        if ausentes:
            erros.append(f"{caminho}: campos ausentes {ausentes}")
        propriedades = esquema.get("properties", {})
        extras = esquema.get("additionalProperties", True)
        for chave, item in valor.items():
            if chave in propriedades:
                _validar_contra_esquema(item, propriedades[chave], f"{caminho}.{chave}", erros)
            elif extras is False:
                erros.append(f"{caminho}: campo inesperado {chave!r}")
            elif isinstance(extras, dict):
                _validar_contra_esquema(item, extras, f"{caminho}.{chave}", erros)
    elif isinstance(valor, list) and "items" in esquema:
        for indice, item in enumerate(valor):
            _validar_contra_esquema(item, esquema["items"], f"{caminho}[{indice}]", erros)


def validar_relatorio(dados: Dict[str, Any]) -> None:
    """
    Valida um relatório já decodificado do JSON.

    A estrutura vem de ``ESQUEMA_RELATORIO``; a ordem dos campos segue
    ``required``. Por cima do esquema são conferidos os parâmetros e os
    casos de cada família e a coincidência entre lista de superfícies
    vazia e caso de inexistência.

    Args:
        dados: Dicionário do relatório.

    Raises:
        ValueError: Com a lista de problemas encontrados.
    """
    erros: List[str] = []
    if not isinstance(dados, dict):
        raise ValueError("O relatório deve ser um objeto JSON")

    if list(dados.keys()) != ESQUEMA_RELATORIO["required"]:
        erros.append(f"Campos fora da ordem ou ausentes: {list(dados.keys())}")
    _validar_contra_esquema(dados, ESQUEMA_RELATORIO, "relatorio", erros)

    familia = dados.get("family")
    if familia in PARAMETROS_POR_FAMILIA:
        params = dados.get("params")
        if not isinstance(params, dict) or list(params.keys()) != PARAMETROS_POR_FAMILIA[familia]:
            erros.append(f"params inválidos para {familia}: {params!r}")

        caso = dados.get("case")
        if caso not in CASOS_POR_FAMILIA[familia]:
            erros.append(f"case inválido para {familia}: {caso!r}")
        superficies = dados.get("surfaces")
        if isinstance(superficies, list):
            vazio = len(superficies) == 0
            if vazio != (caso in CASOS_SEM_SUPERFICIES[familia]):
                erros.append(f"surfaces vazia deve coincidir com caso de inexistência (case={caso})")

    _numeros_finitos(dados, "relatorio", erros)

    if erros:
        for erro in erros:
            logger.debug(f"Relatório inválido: {erro}")
        raise ValueError("Relatório inválido: " + "; ".join(erros))

"""Перевод мощности между дБм и мВт.

Внутри симулятора вся арифметика ведётся в линейных милливаттах,
дБм появляются только на границе с конфигурацией и отчётами.
"""
import math
from typing import Union

import numpy as np

from .exceptions import ConfigurationError, DomainError

PowerDbm = Union[float, np.ndarray]
PowerMw = Union[float, np.ndarray]

# Допустимый диапазон мощностей, задаваемых в конфигурации.
DBM_SANITY_MIN = -80.0
DBM_SANITY_MAX = 20.0


def dbm_to_mw(p: PowerDbm) -> PowerMw:
    return np.power(10.0, np.asarray(p, dtype=float) / 10.0)[()]


def mw_to_dbm(p: PowerMw) -> PowerDbm:
    value = np.asarray(p, dtype=float)
    if np.any(~(value > 0)):
        raise DomainError('Мощность в мВт должна быть положительной.')
    return (10.0 * np.log10(value))[()]


def db_to_linear(value_db):
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)[()]


def linear_to_db(value):
    value = np.asarray(value, dtype=float)
    if np.any(~(value > 0)):
        raise DomainError('Отношение мощностей должно быть положительным.')
    return (10.0 * np.log10(value))[()]


def check_dbm(value: float, name: str = 'мощность') -> float:
    """Проверяет мощность, пришедшую из конфигурации."""
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f'Параметр `{name}` должен быть конечным.')
    if not DBM_SANITY_MIN <= value <= DBM_SANITY_MAX:
        raise ConfigurationError(
            f'Параметр `{name}` = {value} дБм вне диапазона '
            f'[{DBM_SANITY_MIN}, {DBM_SANITY_MAX}] дБм.'
        )
    return value

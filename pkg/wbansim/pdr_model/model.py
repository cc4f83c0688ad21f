"""Сжатая экспонента: PDR как функция обратного SINR.

    pdr = exp(-(1 / (gamma * a_c)) ** b_c) = exp(a * gamma ** b),
    a = -(1 / a_c) ** b_c,  b = -b_c.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

# Нижняя граница PDR: слагаемое d / pdr**v в полезности остаётся конечным.
PDR_FLOOR = 1e-12

MODULATIONS = ('BPSK', 'DPSK')


@dataclass(frozen=True)
class PdrModelParams:
    a_c: float
    b_c: float
    a: float
    b: float
    modulation: Optional[str] = None

    def __post_init__(self):
        if not (self.a_c > 0 and self.b_c > 0):
            raise ConfigurationError('Параметры a_c и b_c должны быть > 0.')
        if not (self.a < 0 and self.b < 0):
            raise ConfigurationError('Параметры a и b должны быть < 0.')
        if self.b != -self.b_c:
            raise ConfigurationError('Должно выполняться b = -b_c.')
        derived = -(1.0 / self.a_c) ** self.b_c
        if not math.isclose(self.a, derived, rel_tol=1e-6):
            raise ConfigurationError(
                f'Должно выполняться a = -(1/a_c)^b_c: {self.a} != {derived}.')

    @classmethod
    def from_compressed(cls, a_c: float, b_c: float,
                        modulation: Optional[str] = None):
        return cls(a_c=a_c, b_c=b_c, a=-(1.0 / a_c) ** b_c, b=-b_c,
                   modulation=modulation)

    @classmethod
    def from_simplified(cls, a: float, b: float,
                        modulation: Optional[str] = None):
        if not (a < 0 and b < 0):
            raise ConfigurationError('Параметры a и b должны быть < 0.')
        return cls(a_c=(-a) ** (1.0 / b), b_c=-b, a=a, b=b,
                   modulation=modulation)


# Оценённые параметры для BCH(31,19) и пакетов по 256 байт.
BPSK = PdrModelParams.from_simplified(-30.0512, -6.3470, modulation='BPSK')
DPSK = PdrModelParams.from_simplified(-337.2164, -7.4540, modulation='DPSK')

PRESETS = {'BPSK': BPSK, 'DPSK': DPSK}


def params_for(modulation: str) -> PdrModelParams:
    try:
        return PRESETS[modulation.upper()]
    except KeyError:
        raise ConfigurationError(
            f'Неизвестная модуляция `{modulation}`; '
            f'допустимо: {", ".join(MODULATIONS)}.'
        )


def _check_sinr(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma > 0)):
        raise DomainError('SINR должен быть положительным.')
    return gamma


def raw_pdr(gamma, params: PdrModelParams):
    """exp(a * gamma**b) без ограничения снизу."""
    gamma = _check_sinr(gamma)
    with np.errstate(over='ignore', under='ignore'):
        return np.exp(params.a * np.power(gamma, params.b))[()]


def pdr_from_sinr(gamma, params: PdrModelParams):
    """PDR при линейном SINR; результат ограничен снизу PDR_FLOOR."""
    return np.clip(raw_pdr(gamma, params), PDR_FLOOR, 1.0)[()]


def compressed_pdr(gamma, params: PdrModelParams):
    """Та же модель в исходной записи через a_c и b_c."""
    gamma = _check_sinr(gamma)
    with np.errstate(over='ignore', under='ignore'):
        return np.exp(-np.power(1.0 / (gamma * params.a_c), params.b_c))[()]


def sinr_for_target_pdr(target: float, params: PdrModelParams) -> float:
    if not 0.0 < target < 1.0:
        raise DomainError(
            'Обратная функция определена только для 0 < PDR < 1.')
    return float((math.log(target) / params.a) ** (1.0 / params.b))

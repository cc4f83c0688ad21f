"""Первая и вторая производные полезности по собственной мощности.

Помеха остальных игроков фиксирована профилем, поэтому
gamma = p * k, где k = |h_i^i|^2 / (I_-i + sigma^2).
"""
import logging
from typing import List, NamedTuple, Sequence

import numpy as np

from core.exceptions import DomainError
from core.units import db_to_linear

from .scenario import Scenario

logger = logging.getLogger(__name__)

OPERATIONAL_SINR_DB = (-10.0, 30.0)


class ConcavityViolation(NamedTuple):
    sinr_db: float
    second_derivative: float


def _link(p_mw, scenario: Scenario, i: int, profile: Sequence[float]):
    p_mw = np.asarray(p_mw, dtype=float)
    if np.any(~(p_mw > 0)):
        raise DomainError('Мощность должна быть > 0.')
    power = scenario.grid.levels_mw[scenario.profile_indices(profile)]
    k = scenario.own_gain[i] / scenario.interference_plus_noise(power)[i]
    return p_mw, k, p_mw * k


def _inverse_pdr_power(gamma, scenario: Scenario):
    """1 / pdr^v без ограничения PDR снизу."""
    params = scenario.pdr_params
    with np.errstate(over='ignore'):
        return np.exp(-scenario.weights.v * params.a
                      * np.power(gamma, params.b))


def utility_gradient(p_mw, scenario: Scenario, i: int,
                     profile: Sequence[float]):
    p_mw, k, gamma = _link(p_mw, scenario, i, profile)
    w, v, d = scenario.weights.w, scenario.weights.v, scenario.weights.d
    a, b = scenario.pdr_params.a, scenario.pdr_params.b
    return (-w * np.power(p_mw, w - 1)
            + a * b * np.power(gamma, b - 1)
            * d * v * _inverse_pdr_power(gamma, scenario) * k)[()]


def utility_second_derivative(p_mw, scenario: Scenario, i: int,
                              profile: Sequence[float]):
    p_mw, k, gamma = _link(p_mw, scenario, i, profile)
    w, v, d = scenario.weights.w, scenario.weights.v, scenario.weights.d
    a, b = scenario.pdr_params.a, scenario.pdr_params.b
    if w == 1:
        power_term = np.zeros_like(p_mw)
    else:
        power_term = -w * (w - 1) * np.power(p_mw, w - 2)
    c = a * b * d * v * k ** 2
    bracket = (b - 1) - a * b * v * np.power(gamma, b)
    return (power_term + c * np.power(gamma, b - 2)
            * _inverse_pdr_power(gamma, scenario) * bracket)[()]


def concavity_scan(scenario: Scenario, i: int, profile: Sequence[float],
                   sinr_range_db=OPERATIONAL_SINR_DB,
                   n_points: int = 401) -> List[ConcavityViolation]:
    """Знак второй производной на рабочем диапазоне SINR.

    Нарушения не скрываются: каждое попадает в отчёт и в журнал.
    """
    sinr_db = np.linspace(*sinr_range_db, n_points)
    power = scenario.grid.levels_mw[scenario.profile_indices(profile)]
    k = scenario.own_gain[i] / scenario.interference_plus_noise(power)[i]
    p_mw = db_to_linear(sinr_db) / k
    values = utility_second_derivative(p_mw, scenario, i, profile)
    bad = ~(values < 0)
    violations = [ConcavityViolation(float(s), float(val))
                  for s, val in zip(sinr_db[bad], values[bad])]
    if violations:
        logger.warning(
            'Вторая производная неотрицательна в %s точках из %s '
            '(игрок %s, SINR от %.1f дБ)', len(violations), n_points, i,
            violations[0].sinr_db)
    return violations

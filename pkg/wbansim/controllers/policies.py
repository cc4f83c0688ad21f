"""Правила выбора мощности на следующую стадию.

Все правила являются чистыми функциями наблюдения и конфигурации; у одной BAN
нет общего изменяемого состояния с другими.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import CalibrationError, ConfigurationError, DomainError
from core.grid import PowerGrid
from core.units import linear_to_db, mw_to_dbm
from pdr_model.model import PdrModelParams, pdr_from_sinr

from .utility import LinkObservation, UtilityWeights, utility

logger = logging.getLogger(__name__)

CALIBRATION_LOWER = 1e-8
CALIBRATION_UPPER = 1e2
CALIBRATION_RESOLUTION = 1e-3
DEFAULT_RELAX = 0.2


class ControllerKind(str, enum.Enum):
    GAME = 'game'
    SAMPLE_AND_HOLD = 'sah'
    SINR_BALANCING = 'sinr_balance'
    CONSTANT = 'constant'


@dataclass(frozen=True)
class ControllerConfig:
    kind: ControllerKind = ControllerKind.GAME
    constant_dbm: Optional[float] = None
    relax: float = DEFAULT_RELAX
    # 0: среднее по всем пакетам, 1: только последний пакет.
    gain_forgetting: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', ControllerKind(self.kind))
        if not 0 < self.relax <= 1:
            raise ConfigurationError(
                'Коэффициент relax должен лежать в (0, 1].')
        if not 0 <= self.gain_forgetting <= 1:
            raise ConfigurationError(
                'Коэффициент gain_forgetting должен лежать в [0, 1].')
        if self.kind is ControllerKind.CONSTANT and self.constant_dbm is None:
            raise ConfigurationError(
                'Для постоянной мощности нужен параметр constant_dbm.')

    @property
    def label(self) -> str:
        if self.kind is ControllerKind.CONSTANT:
            return f'constant({self.constant_dbm:g} dBm)'
        return self.kind.value


def argmax_lowest(values, levels) -> np.ndarray:
    """Индекс максимума по последней оси; из равных берётся меньший уровень.

    Результат не зависит от порядка, в котором перечислены уровни.
    """
    values = np.asarray(values, dtype=float)
    top = values == values.max(axis=-1, keepdims=True)
    return np.argmin(np.where(top, np.asarray(levels, dtype=float), np.inf),
                     axis=-1)


def best_response_indices(gain_over_ipn, grid: PowerGrid,
                          weights: UtilityWeights,
                          pdr_params: PdrModelParams) -> np.ndarray:
    """Индексы argmax полезности по сетке для каждой BAN.

    gain_over_ipn = |h_i^i|^2 / (I_-i + sigma^2); помеха считается
    неизменной с прошлой стадии. При равенстве выбирается меньшая мощность.
    """
    ratio = np.atleast_1d(np.asarray(gain_over_ipn, dtype=float))
    gamma = ratio[:, None] * grid.levels_mw[None, :]
    values = utility(grid.levels_mw[None, :],
                     pdr_from_sinr(gamma, pdr_params), weights)
    return argmax_lowest(values, grid.levels_mw)


def game_best_response(obs: LinkObservation, grid: PowerGrid,
                       weights: UtilityWeights,
                       pdr_params: PdrModelParams) -> float:
    ratio = obs.own_gain / obs.interference_plus_noise
    idx = best_response_indices(ratio, grid, weights, pdr_params)[0]
    return grid.levels[idx]


def calibrate_weight(grid: PowerGrid, pdr_params: PdrModelParams,
                     nominal_gain: float, noise_mw: float, target: float,
                     weights: UtilityWeights = UtilityWeights(),
                     lower: float = CALIBRATION_LOWER,
                     upper: float = CALIBRATION_UPPER,
                     resolution: float = CALIBRATION_RESOLUTION) -> float:
    """Наименьший d, при котором лучший ответ без помех даёт PDR >= target.

    Поиск делением пополам в логарифмической шкале; выбранная мощность
    не убывает по d, поэтому условие монотонно.
    """
    if not 0.0 < target < 1.0:
        raise DomainError('Целевой PDR должен лежать в (0, 1).')
    ratio = nominal_gain / noise_mw

    def delivered(d):
        idx = best_response_indices(
            ratio, grid, weights.with_d(d), pdr_params)[0]
        return float(pdr_from_sinr(grid.levels_mw[idx] * ratio, pdr_params))

    if delivered(upper) < target:
        best = float(pdr_from_sinr(grid.levels_mw[-1] * ratio, pdr_params))
        raise CalibrationError(
            f'Ни один вес d из [{lower:g}, {upper:g}] не обеспечивает '
            f'PDR {target}: при d={upper:g} PDR={delivered(upper):.4g}, '
            f'при максимальной мощности {grid.max} дБм PDR={best:.4g}.'
        )
    if delivered(lower) >= target:
        return lower
    while upper / lower > 1.0 + resolution:
        middle = math.sqrt(lower * upper)
        if delivered(middle) >= target:
            upper = middle
        else:
            lower = middle
    logger.info('Калиброван вес d=%.6g (целевой PDR %s)', upper, target)
    return upper


def _corrected(last_power_dbm, target_sinr, last_sinr, gain, grid):
    step = gain * (linear_to_db(target_sinr) - linear_to_db(last_sinr))
    return grid.clamp(np.asarray(last_power_dbm, dtype=float) + step)


def sample_and_hold_update(obs: LinkObservation, target_sinr: float,
                           grid: PowerGrid) -> float:
    return float(_corrected(mw_to_dbm(obs.last_power), target_sinr,
                            obs.last_sinr, 1.0, grid))


def sinr_balancing_update(obs: LinkObservation, target_sinr: float,
                          relax: float, grid: PowerGrid) -> float:
    if not 0 < relax <= 1:
        raise DomainError('Коэффициент relax должен лежать в (0, 1].')
    return float(_corrected(mw_to_dbm(obs.last_power), target_sinr,
                            obs.last_sinr, relax, grid))


def constant_power(config: ControllerConfig, grid: PowerGrid) -> float:
    if config.kind is not ControllerKind.CONSTANT:
        raise ConfigurationError('Контроллер не задаёт постоянную мощность.')
    return grid.levels[grid.index_of(config.constant_dbm)]


def decide(config: ControllerConfig, own_gain, interference_plus_noise,
           last_power_dbm, last_sinr, grid: PowerGrid,
           weights: UtilityWeights, pdr_params: PdrModelParams,
           target_sinr: float) -> np.ndarray:
    """Мощности следующей стадии для группы BAN (массивы наблюдений)."""
    last_power_dbm = np.asarray(last_power_dbm, dtype=float)
    if config.kind is ControllerKind.GAME:
        ratio = (np.asarray(own_gain, dtype=float)
                 / np.asarray(interference_plus_noise, dtype=float))
        idx = best_response_indices(ratio, grid, weights, pdr_params)
        return grid.levels_dbm[idx]
    if config.kind is ControllerKind.SAMPLE_AND_HOLD:
        return np.atleast_1d(_corrected(
            last_power_dbm, target_sinr, last_sinr, 1.0, grid))
    if config.kind is ControllerKind.SINR_BALANCING:
        return np.atleast_1d(_corrected(
            last_power_dbm, target_sinr, last_sinr, config.relax, grid))
    return np.full(last_power_dbm.shape, constant_power(config, grid))

"""Замороженная стадия игры: каналы фиксированы, меняются только мощности."""
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from channel.fading import OnBodyFadingParams, sample_onbody_gain
from channel.mobility import MobilityParams
from channel.pathloss import InterBodyParams, interbody_gain
from controllers.utility import UtilityWeights, utility
from core.exceptions import ConfigurationError, DomainError
from core.grid import DEFAULT_GRID, PowerGrid
from core.units import dbm_to_mw
from pdr_model.model import BPSK, PdrModelParams, pdr_from_sinr

# Профиль действий: по одной мощности сетки (дБм) на каждую BAN.
ActionProfile = Tuple[float, ...]

DEFAULT_NOISE_DBM = -100.0


@dataclass(frozen=True, eq=False)
class Scenario:
    """Стадия с замороженными каналами.

    own_gain[i]: канал на теле BAN i; cross_gain[j, i]: датчик j -> хаб i.
    """

    own_gain: np.ndarray
    cross_gain: np.ndarray
    noise_mw: float
    weights: UtilityWeights = field(default_factory=UtilityWeights)
    pdr_params: PdrModelParams = BPSK
    grid: PowerGrid = DEFAULT_GRID

    def __post_init__(self):
        own = np.array(self.own_gain, dtype=float).reshape(-1)
        cross = np.array(self.cross_gain, dtype=float)
        m = own.size
        if m < 1:
            raise ConfigurationError('В сценарии нужна хотя бы одна BAN.')
        if cross.shape != (m, m):
            raise DomainError(
                f'Матрица помех должна иметь форму ({m}, {m}).')
        np.fill_diagonal(cross, 0.0)
        if np.any(~(own > 0)) or np.any(
                ~(cross[~np.eye(m, dtype=bool)] > 0)):
            raise DomainError('Коэффициенты передачи должны быть > 0.')
        if not self.noise_mw > 0:
            raise DomainError('Мощность шума должна быть > 0.')
        own.setflags(write=False)
        cross.setflags(write=False)
        object.__setattr__(self, 'own_gain', own)
        object.__setattr__(self, 'cross_gain', cross)

    @property
    def m(self) -> int:
        return self.own_gain.size

    def interference_plus_noise(self, power_mw) -> np.ndarray:
        """I_-i + sigma^2 для каждого хаба; игроки идут по последней оси."""
        return np.asarray(power_mw, dtype=float) @ self.cross_gain \
            + self.noise_mw

    def sinrs(self, power_mw) -> np.ndarray:
        power_mw = np.asarray(power_mw, dtype=float)
        return (self.own_gain * power_mw
                / self.interference_plus_noise(power_mw))

    def utilities(self, power_mw) -> np.ndarray:
        power_mw = np.asarray(power_mw, dtype=float)
        pdr = pdr_from_sinr(self.sinrs(power_mw), self.pdr_params)
        return utility(power_mw, pdr, self.weights)

    def profile_indices(self, profile: Sequence[float]) -> np.ndarray:
        if len(profile) != self.m:
            raise DomainError(
                f'Профиль должен содержать {self.m} мощностей.')
        return np.array([self.grid.index_of(p) for p in profile])

    def profile_from_indices(self, indices) -> ActionProfile:
        return tuple(self.grid.levels[int(k)] for k in indices)


def social_welfare(profile: Sequence[float], scenario: Scenario) -> float:
    """Сумма полезностей всех игроков при данном профиле."""
    indices = scenario.profile_indices(profile)
    return float(np.sum(scenario.utilities(scenario.grid.levels_mw[indices])))


def sample_scenario(m: int, rng: np.random.Generator,
                    noise_dbm: float = DEFAULT_NOISE_DBM,
                    weights: UtilityWeights = UtilityWeights(),
                    pdr_params: PdrModelParams = BPSK,
                    grid: PowerGrid = DEFAULT_GRID,
                    onbody: OnBodyFadingParams = OnBodyFadingParams(),
                    interbody: InterBodyParams = InterBodyParams(),
                    mobility: MobilityParams = MobilityParams()
                    ) -> Scenario:
    """Стадия из модели канала: люди стоят в случайных точках площадки."""
    if m < 1:
        raise ConfigurationError('В сценарии нужна хотя бы одна BAN.')
    positions = rng.uniform(0.0, mobility.area_m, size=(m, 2))
    own = sample_onbody_gain(onbody, rng, size=m)
    delta = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    np.fill_diagonal(dist, 1.0)
    # Мощность релеевского замирания экспоненциальна с единичным средним.
    amplitude = np.sqrt(rng.exponential(1.0, size=(m, m)))
    cross = interbody_gain(dist, interbody.shadowing_db, amplitude,
                           interbody)
    return Scenario(own_gain=own, cross_gain=cross,
                    noise_mw=float(dbm_to_mw(noise_dbm)), weights=weights,
                    pdr_params=pdr_params, grid=grid)


def random_profile_welfare(scenario: Scenario, n_samples: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Благосостояние случайных профилей, равномерных по сетке."""
    indices = rng.integers(0, len(scenario.grid),
                           size=(n_samples, scenario.m))
    power = scenario.grid.levels_mw[indices]
    return scenario.utilities(power).sum(axis=-1)

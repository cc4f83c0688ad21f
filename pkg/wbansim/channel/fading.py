import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from core.exceptions import ConfigurationError, DomainError
from core.units import db_to_linear

N_OSCILLATORS = 16


@dataclass(frozen=True)
class OnBodyFadingParams:
    """Гамма-замирания канала на теле (средняя потеря 60 дБ)."""

    mean_attenuation_db: float = 60.0
    shape: float = 1.31
    scale: float = 0.562
    # Коэффициент AR(1) гауссовой копулы; при 0 отсчёты независимы.
    correlation: float = 0.0

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ConfigurationError(
                'Параметры формы и масштаба гамма-распределения '
                'должны быть > 0.')
        if not 0.0 <= self.correlation < 1.0:
            raise ConfigurationError(
                'Коэффициент корреляции должен лежать в [0, 1).')

    @property
    def mean_gain(self) -> float:
        return float(db_to_linear(-self.mean_attenuation_db))

    @property
    def gamma_mean(self) -> float:
        return self.shape * self.scale


def sample_onbody_gain(params: OnBodyFadingParams,
                       rng: np.random.Generator, size=None):
    """Линейный коэффициент передачи; среднее ровно mean_gain."""
    draws = rng.gamma(params.shape, params.scale, size=size)
    return params.mean_gain * draws / params.gamma_mean


def onbody_series(params: OnBodyFadingParams, rng: np.random.Generator,
                  n_stages: int) -> np.ndarray:
    """Отсчёты по стадиям: независимые или AR(1) через гауссову копулу."""
    if params.correlation == 0.0:
        return np.asarray(sample_onbody_gain(params, rng, size=n_stages))
    rho = params.correlation
    innovations = rng.standard_normal(n_stages)
    z = np.empty(n_stages)
    z[0] = innovations[0]
    for t in range(1, n_stages):
        z[t] = rho * z[t - 1] + math.sqrt(1.0 - rho ** 2) * innovations[t]
    draws = stats.gamma.ppf(stats.norm.cdf(z), params.shape,
                            scale=params.scale)
    return params.mean_gain * draws / params.gamma_mean


@dataclass(frozen=True, eq=False)
class JakesOscillator:
    """Сумма синусоид с равномерно разнесёнными углами прихода.

    Синфазная и квадратурная составляющие используют свои наборы
    доплеровских частот и фаз; средний квадрат модуля равен 1,
    автокорреляция комплексного процесса близка к J0(2 pi f_d tau).
    """

    doppler_hz: float
    cos_freqs: np.ndarray
    sin_freqs: np.ndarray
    phase_i: np.ndarray
    phase_q: np.ndarray

    def complex_gain(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError('Время должно быть неотрицательным.')
        arg = 2 * np.pi * t[..., None]
        norm = 1.0 / math.sqrt(self.cos_freqs.size)
        h_i = np.cos(arg * self.cos_freqs + self.phase_i).sum(axis=-1)
        h_q = np.sin(arg * self.sin_freqs + self.phase_q).sum(axis=-1)
        return (norm * (h_i + 1j * h_q))[()]


def make_jakes_oscillator(doppler_hz: float, rng: np.random.Generator,
                          n_oscillators: int = N_OSCILLATORS
                          ) -> JakesOscillator:
    if not doppler_hz > 0:
        raise ConfigurationError('Доплеровское расширение должно быть > 0.')
    theta = rng.uniform(-np.pi, np.pi)
    n = np.arange(1, n_oscillators + 1)
    alpha = (2 * np.pi * n - np.pi + theta) / (4 * n_oscillators)
    return JakesOscillator(
        doppler_hz=doppler_hz,
        cos_freqs=doppler_hz * np.cos(alpha),
        sin_freqs=doppler_hz * np.sin(alpha),
        phase_i=rng.uniform(-np.pi, np.pi, size=n_oscillators),
        phase_q=rng.uniform(-np.pi, np.pi, size=n_oscillators),
    )


def jakes_amplitude(oscillator: JakesOscillator, t):
    """Модуль релеевского процесса в момент(ы) t."""
    return np.abs(oscillator.complex_gain(t))

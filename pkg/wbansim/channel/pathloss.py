from dataclasses import dataclass

import numpy as np

from core.exceptions import ConfigurationError, DomainError
from core.units import db_to_linear

MIN_DISTANCE_M = 0.1
GAIN_FLOOR = 1e-30


@dataclass(frozen=True)
class InterBodyParams:
    pathloss_exponent: float = 2.7
    ref_distance_m: float = 5.0
    ref_attenuation_db: float = 54.0
    shadowing_db: float = 45.0
    doppler_hz: float = 1.1

    def __post_init__(self):
        if min(self.pathloss_exponent, self.ref_distance_m,
               self.ref_attenuation_db, self.shadowing_db,
               self.doppler_hz) <= 0:
            raise ConfigurationError(
                'Параметры канала между телами должны быть > 0.')


def mean_attenuation_db(dist_m, params: InterBodyParams):
    """Средняя потеря мощности: A_t + A_BS + 10 n log10(d / d0)."""
    dist_m = np.maximum(np.asarray(dist_m, dtype=float), MIN_DISTANCE_M)
    return (params.ref_attenuation_db + params.shadowing_db
            + 10 * params.pathloss_exponent
            * np.log10(dist_m / params.ref_distance_m))[()]


def interbody_gain(dist_m, shadowing_db, smallscale_amp,
                   params: InterBodyParams):
    """|h|^2 для h = A_t (d0/d)^(n/2) A_BS A_SC.

    A_t и A_BS: амплитудные множители, эквивалентные потерям мощности
    ref_attenuation_db и shadowing_db.
    """
    dist_m = np.asarray(dist_m, dtype=float)
    if np.any(~(dist_m > 0)):
        raise DomainError('Расстояние между телами должно быть > 0.')
    dist_m = np.maximum(dist_m, MIN_DISTANCE_M)
    amp_t = np.sqrt(db_to_linear(-params.ref_attenuation_db))
    amp_bs = np.sqrt(db_to_linear(-np.asarray(shadowing_db, dtype=float)))
    path = (params.ref_distance_m / dist_m) ** (params.pathloss_exponent / 2)
    h = amp_t * path * amp_bs * np.abs(smallscale_amp)
    return np.maximum(h ** 2, GAIN_FLOOR)[()]

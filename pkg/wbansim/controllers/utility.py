from dataclasses import dataclass

import numpy as np

from core.exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class UtilityWeights:
    """Показатели w, v и вес d функции полезности -p^w - d / pdr^v."""

    w: float = 1.0
    v: float = 4.0
    d: float = 1e-3

    def __post_init__(self):
        if self.w < 1:
            raise ConfigurationError(
                'Показатель w должен быть >= 1, иначе полезность '
                'не вогнута по мощности.')
        if not self.v > 0:
            raise ConfigurationError('Показатель v должен быть > 0.')
        if not self.d > 0:
            raise ConfigurationError(
                'Вес d должен быть > 0, иначе равновесие не единственно.')

    def with_d(self, d: float) -> 'UtilityWeights':
        return UtilityWeights(w=self.w, v=self.v, d=d)


@dataclass(frozen=True)
class LinkObservation:
    """Что хаб BAN i знает после приёма последнего пакета."""

    own_gain: float
    interference_plus_noise: float
    last_power: float
    last_sinr: float

    def __post_init__(self):
        if min(self.own_gain, self.interference_plus_noise,
               self.last_power, self.last_sinr) <= 0:
            raise DomainError('Поля наблюдения должны быть > 0.')

    @classmethod
    def from_reception(cls, own_gain: float, last_power: float,
                       last_sinr: float) -> 'LinkObservation':
        """Помеха с шумом оценивается как принятая мощность / SINR."""
        return cls(own_gain=own_gain,
                   interference_plus_noise=last_power * own_gain / last_sinr,
                   last_power=last_power, last_sinr=last_sinr)


def utility(p_mw, pdr, weights: UtilityWeights):
    p_mw = np.asarray(p_mw, dtype=float)
    pdr = np.asarray(pdr, dtype=float)
    if np.any(~(pdr > 0)):
        raise DomainError('PDR должен быть > 0.')
    if np.any(~(p_mw > 0)):
        raise DomainError('Мощность должна быть > 0.')
    with np.errstate(over='ignore'):
        return (-np.power(p_mw, weights.w)
                - weights.d / np.power(pdr, weights.v))[()]

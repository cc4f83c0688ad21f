"""Оценка собственного канала BAN по принятым пакетам.

Хаб видит усиление своего канала в каждом пакете, но замирания на теле
меняются от стадии к стадии, поэтому для выбора мощности берётся
сглаженное среднее, а не последнее значение.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import ConfigurationError, DomainError

DEFAULT_PRIOR_WEIGHT = 4.0


@dataclass(frozen=True, eq=False)
class GainTracker:
    """Среднее усиление канала каждой BAN и число учтённых наблюдений.

    Шаг обновления равен max(1 / (weight + 1), forgetting): при
    forgetting = 0 это обычное среднее, при forgetting = 1 остаётся
    только последний пакет.
    """

    mean: np.ndarray
    weight: np.ndarray
    forgetting: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.forgetting <= 1.0:
            raise ConfigurationError(
                'Коэффициент забывания должен лежать в [0, 1].')
        if np.shape(self.mean) != np.shape(self.weight):
            raise ConfigurationError(
                'Оценки и их веса должны иметь одну форму.')

    @classmethod
    def start(cls, n_bans: int, prior_gain: Optional[float] = None,
              prior_weight: float = DEFAULT_PRIOR_WEIGHT,
              forgetting: float = 0.0) -> 'GainTracker':
        """Оценки до первого пакета.

        Без prior_gain первое наблюдение принимается как есть.
        """
        if prior_gain is None:
            return cls(mean=np.full(n_bans, np.nan),
                       weight=np.zeros(n_bans), forgetting=forgetting)
        if not prior_gain > 0:
            raise DomainError('Априорное усиление должно быть > 0.')
        if prior_weight < 0:
            raise ConfigurationError(
                'Вес априорной оценки не может быть отрицательным.')
        return cls(mean=np.full(n_bans, float(prior_gain)),
                   weight=np.full(n_bans, float(prior_weight)),
                   forgetting=forgetting)

    def update(self, members, gains) -> 'GainTracker':
        """Новый трекер с учётом усилений, принятых от members."""
        members = np.asarray(members, dtype=int)
        gains = np.asarray(gains, dtype=float)
        if np.any(~(gains > 0)):
            raise DomainError('Усиление канала должно быть > 0.')
        mean = self.mean.copy()
        weight = self.weight.copy()
        previous = mean[members]
        step = np.maximum(1.0 / (weight[members] + 1.0), self.forgetting)
        mean[members] = np.where(np.isnan(previous), gains,
                                 previous + step * (gains - previous))
        weight[members] += 1.0
        return GainTracker(mean=mean, weight=weight,
                           forgetting=self.forgetting)

    def estimate(self, members) -> np.ndarray:
        estimate = self.mean[np.asarray(members, dtype=int)]
        if np.any(np.isnan(estimate)):
            raise DomainError('Нет ни одного наблюдения канала BAN.')
        return estimate

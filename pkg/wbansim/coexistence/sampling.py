"""Сколько и какие BAN передают одновременно.

При несинхронном межсетевом TDMA каждая BAN перекрывается с данной
с вероятностью 2/N_c, поэтому число одновременно активных сетей
биномиальное; случай m = 0 отбрасывается и распределение нормируется.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from core.exceptions import ConfigurationError

STOCHASTIC = 'stochastic'
FIXED_M = 'fixed_m'
MODES = (STOCHASTIC, FIXED_M)

PER_GAME = 'per_game'
PER_STAGE = 'per_stage'
RESAMPLE_POLICIES = (PER_GAME, PER_STAGE)


def _check_channels(total_bans: int, orthogonal_channels: int) -> None:
    if total_bans < 1:
        raise ConfigurationError('Число BAN M должно быть >= 1.')
    if orthogonal_channels < 2:
        raise ConfigurationError(
            'Число ортогональных каналов N_c должно быть >= 2: '
            'вероятность перекрытия 2/N_c не может превышать 1.'
        )


@dataclass(frozen=True)
class CoexistenceParams:
    total_bans: int = 8
    orthogonal_channels: int = 4
    mode: str = STOCHASTIC
    fixed_m: Optional[int] = None
    resample: str = PER_GAME

    def __post_init__(self):
        _check_channels(self.total_bans, self.orthogonal_channels)
        if self.mode not in MODES:
            raise ConfigurationError(
                f'Режим `{self.mode}` не поддерживается; '
                f'допустимо: {", ".join(MODES)}.')
        if self.resample not in RESAMPLE_POLICIES:
            raise ConfigurationError(
                f'Политика `{self.resample}` не поддерживается; '
                f'допустимо: {", ".join(RESAMPLE_POLICIES)}.')
        if self.mode == FIXED_M and not (
                self.fixed_m is not None
                and 1 <= self.fixed_m <= self.total_bans):
            raise ConfigurationError(
                f'В режиме fixed_m нужно 1 <= m <= M = {self.total_bans}.')


@dataclass(frozen=True)
class ActiveSet:
    members: Tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(int(i) for i in self.members))
        if not members:
            raise ConfigurationError('Множество активных BAN пусто.')
        if len(set(members)) != len(members):
            raise ConfigurationError('Индексы активных BAN повторяются.')
        object.__setattr__(self, 'members', members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, ban):
        return ban in self.members

    def mask(self, n_bans: int) -> np.ndarray:
        result = np.zeros(n_bans, dtype=bool)
        result[list(self.members)] = True
        return result


def unconditioned_distribution(total_bans: int,
                               orthogonal_channels: int) -> np.ndarray:
    """Pr(m) для m = 0..M без отбрасывания m = 0."""
    _check_channels(total_bans, orthogonal_channels)
    m = np.arange(total_bans + 1)
    return stats.binom.pmf(m, total_bans, 2.0 / orthogonal_channels)


def active_count_distribution(total_bans: int,
                              orthogonal_channels: int) -> np.ndarray:
    """Pr(m | m >= 1); элемент k отвечает m = k + 1."""
    pmf = unconditioned_distribution(total_bans, orthogonal_channels)
    return pmf[1:] / pmf[1:].sum()


def sample_active_set(params: CoexistenceParams,
                      rng: np.random.Generator) -> ActiveSet:
    if params.mode == FIXED_M:
        m = params.fixed_m
    else:
        probabilities = active_count_distribution(
            params.total_bans, params.orthogonal_channels)
        m = int(rng.choice(params.total_bans, p=probabilities)) + 1
    members = rng.choice(params.total_bans, size=m, replace=False)
    return ActiveSet(members=tuple(members.tolist()))

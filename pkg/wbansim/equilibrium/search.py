"""Равновесие Нэша и общественный оптимум на дискретной сетке мощностей.

Во всех поисках при равенстве выбирается профиль с меньшими мощностями
(лексикографически).
"""
import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from django.conf import settings

from controllers.policies import best_response_indices
from controllers.utility import utility
from core.exceptions import SizeError
from pdr_model.model import pdr_from_sinr

from .scenario import ActionProfile, Scenario, social_welfare

logger = logging.getLogger(__name__)

MAX_NE_ITERATIONS = 10_000
CHUNK_PROFILES = 1 << 18


class NashResult(NamedTuple):
    profile: ActionProfile
    converged: bool
    iterations: int


class Deviation(NamedTuple):
    player: int
    power_dbm: float
    gain: float


class VerificationReport(NamedTuple):
    ne_profile: ActionProfile
    optimal_profile: ActionProfile
    ne_welfare: float
    optimal_welfare: float
    gap: float
    profiles_equal: bool
    converged: bool
    iterations: int


def best_response_profile(scenario: Scenario, indices) -> np.ndarray:
    """Синхронные лучшие ответы всех игроков на текущий профиль."""
    power = scenario.grid.levels_mw[np.asarray(indices)]
    ratio = scenario.own_gain / scenario.interference_plus_noise(power)
    return best_response_indices(ratio, scenario.grid, scenario.weights,
                                 scenario.pdr_params)


def simultaneous_ne(scenario: Scenario,
                    max_iterations: int = MAX_NE_ITERATIONS) -> NashResult:
    """Итерации синхронных лучших ответов от профиля минимальных мощностей.

    Повтор профиля без неподвижной точки означает цикл; тогда
    возвращается последний профиль с converged=False.
    """
    current = np.zeros(scenario.m, dtype=int)
    seen = {tuple(current.tolist())}
    for iteration in range(1, max_iterations + 1):
        following = best_response_profile(scenario, current)
        if np.array_equal(following, current):
            return NashResult(scenario.profile_from_indices(current),
                              True, iteration)
        key = tuple(following.tolist())
        if key in seen:
            logger.warning(
                'Лучшие ответы зациклились без неподвижной точки '
                'на итерации %s (m=%s)', iteration, scenario.m)
            return NashResult(scenario.profile_from_indices(following),
                              False, iteration)
        seen.add(key)
        current = following
    logger.warning('Равновесие не найдено за %s итераций', max_iterations)
    return NashResult(scenario.profile_from_indices(current),
                      False, max_iterations)


def unilateral_deviations(scenario: Scenario,
                          profile: Sequence[float]) -> List[Deviation]:
    """Все одиночные отклонения по сетке, строго повышающие полезность."""
    indices = scenario.profile_indices(profile)
    power = scenario.grid.levels_mw[indices]
    ratio = scenario.own_gain / scenario.interference_plus_noise(power)
    levels = scenario.grid.levels_mw
    deviations = []
    for i in range(scenario.m):
        values = utility(
            levels, pdr_from_sinr(ratio[i] * levels, scenario.pdr_params),
            scenario.weights)
        current = values[indices[i]]
        for k in np.flatnonzero(values > current):
            deviations.append(Deviation(
                i, scenario.grid.levels[k], float(values[k] - current)))
    return deviations


def exhaustive_social_optimum(scenario: Scenario,
                              max_profiles: Optional[int] = None):
    """Перебор всех |P|^m профилей; возвращает (профиль, благосостояние).

    Плоский индекс профиля идёт в порядке C, поэтому первый максимум
    оказывается лексикографически наименьшим.
    """
    if max_profiles is None:
        max_profiles = settings.WBANSIM_MAX_PROFILES
    size = len(scenario.grid)
    total = size ** scenario.m
    if total > max_profiles:
        raise SizeError(
            f'Полный перебор требует {size}^{scenario.m} = {total} '
            f'профилей при допустимых {max_profiles}; '
            'уменьшите сетку (например, --coarse-step-db 5).'
        )
    shape = (size,) * scenario.m
    best_index, best_welfare = 0, -np.inf
    for start in range(0, total, CHUNK_PROFILES):
        flat = np.arange(start, min(total, start + CHUNK_PROFILES))
        indices = np.stack(np.unravel_index(flat, shape), axis=-1)
        welfare = scenario.utilities(
            scenario.grid.levels_mw[indices]).sum(axis=-1)
        k = int(np.argmax(welfare))
        if welfare[k] > best_welfare:
            best_index, best_welfare = start + k, float(welfare[k])
    profile = scenario.profile_from_indices(
        np.unravel_index(best_index, shape))
    return profile, best_welfare


def verify_social_optimality(scenario: Scenario,
                             max_profiles: Optional[int] = None
                             ) -> VerificationReport:
    nash = simultaneous_ne(scenario)
    optimum, optimal_welfare = exhaustive_social_optimum(
        scenario, max_profiles)
    ne_welfare = social_welfare(nash.profile, scenario)
    return VerificationReport(
        ne_profile=nash.profile,
        optimal_profile=optimum,
        ne_welfare=ne_welfare,
        optimal_welfare=optimal_welfare,
        gap=optimal_welfare - ne_welfare,
        profiles_equal=nash.profile == optimum,
        converged=nash.converged,
        iterations=nash.iterations,
    )

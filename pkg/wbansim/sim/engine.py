"""Одна стадия и одна игра: SINR, PDR, наблюдения и новые мощности.

Неактивные в стадии BAN не передают, не мешают остальным и сохраняют
свою мощность до следующего выхода в эфир.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from channel.trace import ChannelTrace
from coexistence.sampling import (
    PER_STAGE, ActiveSet, CoexistenceParams, sample_active_set,
)
from controllers.policies import decide
from controllers.tracking import GainTracker
from controllers.utility import LinkObservation
from core.exceptions import ConfigurationError
from core.rng import ACTIVITY, INITIAL_POWER, PACKETS, RngStream
from core.units import dbm_to_mw
from pdr_model.model import PDR_FLOOR, pdr_from_sinr, raw_pdr

from .config import GameRules

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GameState:
    """Оценённая стадия: мощности, с которыми передавали, и их итог.

    sinr, pdr и observations определены только для активных BAN
    (для остальных NaN и None).
    """

    stage: int
    power_dbm: np.ndarray
    sinr: np.ndarray
    pdr: np.ndarray
    active: ActiveSet
    observations: Tuple[Optional[LinkObservation], ...]
    next_power_dbm: np.ndarray
    delivered: Optional[np.ndarray] = None
    clamp_events: int = 0
    tracker: Optional[GainTracker] = None


@dataclass(frozen=True, eq=False)
class GameRecord:
    """Трассы одной игры, массивы формы (стадии, BAN)."""

    power_dbm: np.ndarray
    sinr: np.ndarray
    pdr: np.ndarray
    active: np.ndarray
    delivered: Optional[np.ndarray]
    clamp_events: int

    @property
    def n_stages(self) -> int:
        return self.power_dbm.shape[0]

    def hits(self, target_pdr: float) -> np.ndarray:
        """Число активных BAN с PDR >= target на каждой стадии."""
        reached = np.where(self.active, self.pdr, -np.inf) >= target_pdr
        return reached.sum(axis=1)

    def active_counts(self) -> np.ndarray:
        return self.active.sum(axis=1)

    def active_power_mw(self) -> np.ndarray:
        """Суммарная мощность активных BAN на каждой стадии, мВт."""
        return np.where(self.active, dbm_to_mw(self.power_dbm), 0.0) \
            .sum(axis=1)

    def equals(self, other: 'GameRecord') -> bool:
        def same(x, y):
            if x is None or y is None:
                return x is y
            return np.array_equal(x, y, equal_nan=x.dtype.kind == 'f')
        return (self.clamp_events == other.clamp_events
                and all(same(getattr(self, name), getattr(other, name))
                        for name in ('power_dbm', 'sinr', 'pdr', 'active',
                                     'delivered')))


def compute_sinr(i: int, power_dbm, active: ActiveSet,
                 trace: ChannelTrace, stage: int, noise_mw: float) -> float:
    """SINR на хабе BAN i; мешают только активные BAN."""
    if i not in active:
        raise ConfigurationError(f'BAN {i} не активна на стадии {stage}.')
    power_mw = dbm_to_mw(np.asarray(power_dbm, dtype=float))
    interference = sum(power_mw[j] * trace.interbody_gain[j, i, stage]
                       for j in active if j != i)
    signal = power_mw[i] * trace.onbody_gain[i, stage]
    return float(signal / (interference + noise_mw))


def compute_sinrs(power_dbm, active: ActiveSet, trace: ChannelTrace,
                  stage: int, noise_mw: float) -> np.ndarray:
    """SINR всех BAN сразу; у неактивных NaN."""
    mask = active.mask(trace.n_bans)
    power_mw = np.where(mask, dbm_to_mw(power_dbm), 0.0)
    interference = power_mw @ trace.interbody_gain[:, :, stage]
    signal = power_mw * trace.onbody_gain[:, stage]
    return np.where(mask, signal / (interference + noise_mw), np.nan)


def run_stage(stage: int, power_dbm, active: ActiveSet,
              trace: ChannelTrace, rules: GameRules,
              packets: Optional[np.random.Generator] = None,
              tracker: Optional[GainTracker] = None) -> GameState:
    """Оценивает стадию и выбирает мощности следующей.

    Игра планирует по сглаженной оценке своего канала (tracker),
    ослабленной на запас rules.fade_margin_db; помеха берётся из
    последнего пакета. Без tracker оценка начинается заново.
    """
    power_dbm = np.asarray(power_dbm, dtype=float)
    members = list(active)
    sinr = compute_sinrs(power_dbm, active, trace, stage, rules.noise_mw)
    gamma = sinr[members]
    pdr = np.full(trace.n_bans, np.nan)
    pdr[members] = pdr_from_sinr(gamma, rules.pdr_params)
    clamp_events = int(np.count_nonzero(
        raw_pdr(gamma, rules.pdr_params) < PDR_FLOOR))

    own_gain = trace.onbody_gain[members, stage]
    last_power = dbm_to_mw(power_dbm[members])
    observations = [None] * trace.n_bans
    for k, i in enumerate(members):
        observations[i] = LinkObservation.from_reception(
            float(own_gain[k]), float(last_power[k]), float(gamma[k]))
    ipn = np.array([observations[i].interference_plus_noise
                    for i in members])
    if tracker is None:
        tracker = rules.gain_tracker(trace.n_bans)
    tracker = tracker.update(members, own_gain)
    planned_gain = tracker.estimate(members) * rules.planning_factor

    next_power = power_dbm.copy()
    next_power[members] = decide(
        rules.controller, planned_gain, ipn, power_dbm[members], gamma,
        rules.grid, rules.weights, rules.pdr_params, rules.target_sinr)

    delivered = None
    if rules.packet_draws:
        if packets is None:
            raise ConfigurationError(
                'Для розыгрыша пакетов нужен генератор случайных чисел.')
        delivered = np.zeros(trace.n_bans, dtype=bool)
        delivered[members] = packets.random(len(members)) < pdr[members]
    return GameState(
        stage=stage, power_dbm=power_dbm, sinr=sinr, pdr=pdr, active=active,
        observations=tuple(observations), next_power_dbm=next_power,
        delivered=delivered, clamp_events=clamp_events, tracker=tracker,
    )


def initial_powers(n_bans: int, rules: GameRules,
                   rng: np.random.Generator) -> np.ndarray:
    """Равномерно случайные уровни сетки."""
    return rules.grid.levels_dbm[rng.integers(0, len(rules.grid),
                                              size=n_bans)]


def run_game(trace: ChannelTrace, rules: GameRules, stages: int,
             coexistence: CoexistenceParams,
             game_rng: RngStream) -> GameRecord:
    if trace.n_stages < stages:
        raise ConfigurationError(
            f'Трасса содержит {trace.n_stages} стадий, '
            f'а игра требует {stages}.')
    if trace.n_bans != coexistence.total_bans:
        raise ConfigurationError(
            f'Трасса построена для {trace.n_bans} BAN, '
            f'а в конфигурации M = {coexistence.total_bans}.')
    n = trace.n_bans
    power = initial_powers(
        n, rules, game_rng.substream(INITIAL_POWER).generator())
    activity = game_rng.substream(ACTIVITY).generator()
    packets = (game_rng.substream(PACKETS).generator()
               if rules.packet_draws else None)

    record = {
        'power_dbm': np.empty((stages, n)),
        'sinr': np.empty((stages, n)),
        'pdr': np.empty((stages, n)),
        'active': np.zeros((stages, n), dtype=bool),
    }
    delivered = None
    if packets is not None:
        delivered = np.zeros((stages, n), dtype=bool)
    clamp_events = 0
    active = sample_active_set(coexistence, activity)
    tracker = rules.gain_tracker(n)
    for stage in range(stages):
        if stage and coexistence.resample == PER_STAGE:
            active = sample_active_set(coexistence, activity)
        state = run_stage(stage, power, active, trace, rules, packets,
                          tracker)
        record['power_dbm'][stage] = state.power_dbm
        record['sinr'][stage] = state.sinr
        record['pdr'][stage] = state.pdr
        record['active'][stage] = active.mask(n)
        if delivered is not None:
            delivered[stage] = state.delivered
        clamp_events += state.clamp_events
        power = state.next_power_dbm
        tracker = state.tracker
    return GameRecord(delivered=delivered, clamp_events=clamp_events,
                      **record)

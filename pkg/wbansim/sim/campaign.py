"""Кампания: наборы каналов, игры на них и усреднение метрик.

Результаты игр сводятся строго в порядке номеров игр, поэтому отчёт
не зависит от числа потоков.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from channel.trace import ChannelTrace, compose_trace, generate_distances
from controllers.utility import UtilityWeights
from core.exceptions import DomainError
from core.rng import RngStream
from core.units import mw_to_dbm

from .config import CampaignConfig, GameRules
from .engine import GameRecord, run_game

logger = logging.getLogger(__name__)

CONVERGENCE_BAND_DB = 0.5
STEADY_STAGES = 10
MIN_SERIES = 20


class Convergence(NamedTuple):
    stage: int
    converged: bool


@dataclass(frozen=True, eq=False)
class MetricsReport:
    pct_at_target: np.ndarray
    mean_power_dbm: np.ndarray
    convergence: Convergence
    weights: UtilityWeights
    clamp_events: int
    games: Optional[List[GameRecord]] = None

    @property
    def convergence_stage(self) -> int:
        return self.convergence.stage

    @property
    def steady_pct(self) -> float:
        return float(np.mean(self.pct_at_target[-STEADY_STAGES:]))

    @property
    def steady_power_dbm(self) -> float:
        return float(np.mean(self.mean_power_dbm[-STEADY_STAGES:]))


def convergence_stage(mean_power_dbm,
                      band_db: float = CONVERGENCE_BAND_DB) -> Convergence:
    """Первая стадия, после которой ряд не выходит из полосы ±band_db.

    Опорное значение равно среднему последних 10 стадий. Если ряд так и не
    вошёл в полосу, возвращается его длина с converged=False.
    """
    series = np.asarray(mean_power_dbm, dtype=float)
    if series.size < MIN_SERIES:
        raise DomainError(
            f'Для оценки сходимости нужно не меньше {MIN_SERIES} стадий.')
    reference = series[-STEADY_STAGES:].mean()
    outside = np.flatnonzero(np.abs(series - reference) > band_db)
    if outside.size == 0:
        return Convergence(0, True)
    stage = int(outside[-1]) + 1
    if stage == series.size:
        return Convergence(series.size, False)
    return Convergence(stage, True)


def game_stream(seed: int, set_index: int, game_index: int) -> RngStream:
    return RngStream(seed).substream('set', set_index, 'game', game_index)


def set_distances(config: CampaignConfig, set_index: int) -> np.ndarray:
    """Геометрия набора каналов, общая для всех его игр."""
    return generate_distances(
        config.coexistence.total_bans, config.stages_per_game,
        config.stage_duration_s,
        RngStream(config.seed).substream('set', set_index),
        config.channel.mobility,
    )


def game_trace(config: CampaignConfig, set_index: int, game_index: int,
               distances=None) -> ChannelTrace:
    if distances is None:
        distances = set_distances(config, set_index)
    return compose_trace(
        distances, config.stage_duration_s,
        game_stream(config.seed, set_index, game_index), config.channel)


def set_games(config: CampaignConfig, rules: GameRules,
              set_index: int) -> List[GameRecord]:
    """Все игры одного набора: общая геометрия, свои замирания."""
    distances = set_distances(config, set_index)
    games = []
    for game_index in range(config.games_per_set):
        games.append(play_game(config, rules, set_index, game_index,
                               distances))
    logger.debug('Набор каналов %s: сыграно %s игр',
                 set_index, len(games))
    return games


def play_game(config: CampaignConfig, rules: GameRules, set_index: int,
              game_index: int, distances=None) -> GameRecord:
    """Одна игра кампании; результат не зависит от соседних игр."""
    trace = game_trace(config, set_index, game_index, distances)
    return run_game(trace, rules, config.stages_per_game,
                    config.coexistence,
                    game_stream(config.seed, set_index, game_index))


def run_campaign(config: CampaignConfig, jobs: int = 1) -> MetricsReport:
    weights = config.resolve_weights()
    rules = config.game_rules(weights)
    logger.info(
        'Кампания: %s наборов x %s игр, %s стадий, контроллер %s, d=%.6g',
        config.n_channel_sets, config.games_per_set,
        config.stages_per_game, config.controller.label, weights.d)

    set_indices = range(config.n_channel_sets)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_set = list(pool.map(
                lambda s: set_games(config, rules, s), set_indices))
    else:
        per_set = [set_games(config, rules, s) for s in set_indices]

    stages = config.stages_per_game
    hits = np.zeros(stages)
    active = np.zeros(stages)
    power_mw = np.zeros(stages)
    clamp_events = 0
    games = []
    for records in per_set:
        for record in records:
            hits += record.hits(config.target_pdr)
            active += record.active_counts()
            power_mw += record.active_power_mw()
            clamp_events += record.clamp_events
            if config.record_games:
                games.append(record)
    if clamp_events:
        logger.warning('PDR ограничивался снизу %s раз', clamp_events)

    mean_power_dbm = np.atleast_1d(mw_to_dbm(power_mw / active))
    if stages >= MIN_SERIES:
        convergence = convergence_stage(mean_power_dbm)
    else:
        convergence = Convergence(stages, False)
    report = MetricsReport(
        pct_at_target=100.0 * hits / active,
        mean_power_dbm=mean_power_dbm,
        convergence=convergence,
        weights=weights,
        clamp_events=clamp_events,
        games=games if config.record_games else None,
    )
    logger.info(
        'Кампания завершена: %.1f%% BAN на целевом PDR, %.2f дБм, '
        'сходимость на стадии %s', report.steady_pct,
        report.steady_power_dbm, convergence.stage)
    return report

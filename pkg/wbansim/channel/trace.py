"""Трассы каналов: коэффициенты передачи на теле и между телами по стадиям."""
import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import ConfigurationError, DomainError
from core.rng import MOBILITY, ONBODY, SMALL_SCALE, RngStream
from core.units import linear_to_db, db_to_linear

from .fading import (
    OnBodyFadingParams, jakes_amplitude, make_jakes_oscillator, onbody_series,
)
from .mobility import MobilityParams, initial_walker, walk_positions
from .pathloss import InterBodyParams, interbody_gain

logger = logging.getLogger(__name__)

TRACE_HEADER = ('ban_i', 'ban_j', 'stage', 'gain_db')


@dataclass(frozen=True)
class ChannelParams:
    onbody: OnBodyFadingParams = field(default_factory=OnBodyFadingParams)
    interbody: InterBodyParams = field(default_factory=InterBodyParams)
    mobility: MobilityParams = field(default_factory=MobilityParams)


@dataclass(frozen=True, eq=False)
class ChannelTrace:
    """onbody_gain[i, t] и interbody_gain[j, i, t] (датчик j -> хаб i).

    Диагональ interbody_gain нулевая: своя сеть себе не мешает.
    """

    onbody_gain: np.ndarray
    interbody_gain: np.ndarray
    stage_duration_s: float

    def __post_init__(self):
        onbody = np.asarray(self.onbody_gain, dtype=float)
        inter = np.asarray(self.interbody_gain, dtype=float)
        if onbody.ndim != 2 or inter.shape != (
                onbody.shape[0], onbody.shape[0], onbody.shape[1]):
            raise DomainError('Размерности трассы не согласованы.')
        if np.any(~(onbody > 0)) or np.any(~(self._cross(inter) > 0)):
            raise DomainError('Коэффициенты передачи должны быть > 0.')
        onbody.setflags(write=False)
        inter.setflags(write=False)
        object.__setattr__(self, 'onbody_gain', onbody)
        object.__setattr__(self, 'interbody_gain', inter)

    @staticmethod
    def _cross(inter):
        n = inter.shape[0]
        return inter[~np.eye(n, dtype=bool)]

    @property
    def n_bans(self) -> int:
        return self.onbody_gain.shape[0]

    @property
    def n_stages(self) -> int:
        return self.onbody_gain.shape[1]

    @property
    def cross_gains(self) -> np.ndarray:
        """Коэффициенты только для пар j != i, форма (n(n-1), T)."""
        return self._cross(self.interbody_gain)

    def equals(self, other: 'ChannelTrace') -> bool:
        return (self.stage_duration_s == other.stage_duration_s
                and np.array_equal(self.onbody_gain, other.onbody_gain)
                and np.array_equal(self.interbody_gain,
                                   other.interbody_gain))


def _substeps_per_stage(stage_duration_s: float,
                        params: MobilityParams) -> int:
    ratio = stage_duration_s / params.substep_s
    n_sub = round(ratio)
    if n_sub < 1 or not math.isclose(ratio, n_sub, rel_tol=1e-9):
        raise ConfigurationError(
            'Длительность стадии должна быть кратна шагу модели ходьбы '
            f'({params.substep_s} с).'
        )
    return n_sub


def generate_distances(n_bans: int, n_stages: int, stage_duration_s: float,
                       mobility_rng: RngStream,
                       params: MobilityParams) -> np.ndarray:
    """Попарные расстояния в серединах стадий, форма (n, n, T)."""
    if n_bans < 1 or n_stages < 1:
        raise ConfigurationError('Нужны хотя бы одна BAN и одна стадия.')
    n_sub = _substeps_per_stage(stage_duration_s, params)
    n_substeps = n_stages * n_sub
    n_turns = -(-n_substeps // params.turn_interval_steps)
    walkers, turns = [], []
    for ban in range(n_bans):
        gen = mobility_rng.substream('ban', ban, MOBILITY).generator()
        walkers.append(initial_walker(gen, params))
        turns.append(gen.normal(
            0.0, math.radians(params.turn_std_deg), size=n_turns))
    sample_steps = (np.arange(n_stages) * n_sub + max(n_sub // 2, 1))
    positions = walk_positions(
        walkers, np.asarray(turns), n_substeps, sample_steps, params)
    delta = positions[:, None, :, :] - positions[None, :, :, :]
    return np.hypot(delta[..., 0], delta[..., 1])


def compose_trace(distances: np.ndarray, stage_duration_s: float,
                  fading_rng: RngStream,
                  params: ChannelParams) -> ChannelTrace:
    """Накладывает замирания одной игры на геометрию набора каналов."""
    n_bans, _, n_stages = distances.shape
    onbody = np.empty((n_bans, n_stages))
    inter = np.zeros((n_bans, n_bans, n_stages))
    t_mid = (np.arange(n_stages) + 0.5) * stage_duration_s
    for i in range(n_bans):
        gen = fading_rng.substream('ban', i, ONBODY).generator()
        onbody[i] = onbody_series(params.onbody, gen, n_stages)
    for j in range(n_bans):
        for i in range(n_bans):
            if i == j:
                continue
            gen = fading_rng.substream(
                'pair', j, i, SMALL_SCALE).generator()
            oscillator = make_jakes_oscillator(
                params.interbody.doppler_hz, gen)
            inter[j, i] = interbody_gain(
                distances[j, i], params.interbody.shadowing_db,
                jakes_amplitude(oscillator, t_mid), params.interbody,
            )
    return ChannelTrace(onbody_gain=onbody, interbody_gain=inter,
                        stage_duration_s=stage_duration_s)


def generate_channel_set(n_bans: int, n_stages: int,
                         stage_duration_s: float, mobility_rng: RngStream,
                         fading_rng: RngStream,
                         params: ChannelParams = ChannelParams()
                         ) -> ChannelTrace:
    distances = generate_distances(
        n_bans, n_stages, stage_duration_s, mobility_rng, params.mobility)
    logger.debug('Сгенерирована геометрия: %s BAN, %s стадий',
                 n_bans, n_stages)
    return compose_trace(distances, stage_duration_s, fading_rng, params)


def write_trace_csv(trace: ChannelTrace, path) -> None:
    """Строки ban_i,ban_j,stage,gain_db; при ban_j == ban_i это канал на теле.

    ban_i: хаб-приёмник, ban_j: датчик-источник.
    """
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for i in range(trace.n_bans):
            for j in range(trace.n_bans):
                gains = (trace.onbody_gain[i] if i == j
                         else trace.interbody_gain[j, i])
                for stage, gain in enumerate(linear_to_db(gains).tolist()):
                    writer.writerow((i, j, stage, repr(gain)))


def read_trace_csv(path, stage_duration_s: float) -> ChannelTrace:
    rows = []
    with open(path, newline='', encoding='utf-8') as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != TRACE_HEADER:
            raise DomainError(
                'Строка 1: ожидается заголовок `ban_i,ban_j,stage,gain_db`.')
        for row in reader:
            try:
                rows.append((int(row['ban_i']), int(row['ban_j']),
                             int(row['stage']), float(row['gain_db'])))
            except (TypeError, ValueError):
                raise DomainError(
                    f'Строка {reader.line_num}: некорректная запись трассы.')
    if not rows:
        raise DomainError('Файл трассы пуст.')
    n_bans = max(max(r[0], r[1]) for r in rows) + 1
    n_stages = max(r[2] for r in rows) + 1
    onbody = np.full((n_bans, n_stages), np.nan)
    inter = np.zeros((n_bans, n_bans, n_stages))
    for i, j, stage, gain_db in rows:
        if i == j:
            onbody[i, stage] = db_to_linear(gain_db)
        else:
            inter[j, i, stage] = db_to_linear(gain_db)
    if np.isnan(onbody).any():
        raise DomainError('В трассе не хватает коэффициентов на теле.')
    return ChannelTrace(onbody_gain=onbody, interbody_gain=inter,
                        stage_duration_s=stage_duration_s)

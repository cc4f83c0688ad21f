"""Параметры кампании: сколько игр, на каких каналах и с каким правилом."""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from channel.trace import ChannelParams
from coexistence.sampling import FIXED_M, CoexistenceParams
from controllers.policies import ControllerConfig, calibrate_weight
from controllers.tracking import DEFAULT_PRIOR_WEIGHT, GainTracker
from controllers.utility import UtilityWeights
from core.exceptions import ConfigurationError
from core.grid import DEFAULT_GRID, PowerGrid
from core.units import db_to_linear, dbm_to_mw
from pdr_model.model import PdrModelParams, params_for, sinr_for_target_pdr

logger = logging.getLogger(__name__)

DEFAULT_NOISE_DBM = -100.0
DEFAULT_TARGET_PDR = 0.9
DEFAULT_STAGE_DURATION_S = 0.05
DEFAULT_CALIBRATION_MARGIN_DB = 10.0


@dataclass(frozen=True)
class GameRules:
    """Всё, что нужно стадии игры, с уже выбранным весом d."""

    controller: ControllerConfig
    grid: PowerGrid
    weights: UtilityWeights
    pdr_params: PdrModelParams
    target_pdr: float
    noise_mw: float
    packet_draws: bool = False
    # Мощность выбирается под канал, ослабленный на этот запас.
    fade_margin_db: float = 0.0
    prior_gain: Optional[float] = None
    prior_weight: float = DEFAULT_PRIOR_WEIGHT

    @property
    def target_sinr(self) -> float:
        return sinr_for_target_pdr(self.target_pdr, self.pdr_params)

    @property
    def planning_factor(self) -> float:
        return float(db_to_linear(-self.fade_margin_db))

    def gain_tracker(self, n_bans: int) -> GainTracker:
        return GainTracker.start(
            n_bans, self.prior_gain, self.prior_weight,
            self.controller.gain_forgetting)


@dataclass(frozen=True)
class CampaignConfig:
    n_channel_sets: int = 20
    games_per_set: int = 50
    stages_per_game: int = 100
    stage_duration_s: float = DEFAULT_STAGE_DURATION_S
    coexistence: CoexistenceParams = field(default_factory=CoexistenceParams)
    modulation: str = 'BPSK'
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    grid: PowerGrid = DEFAULT_GRID
    weights: UtilityWeights = field(default_factory=UtilityWeights)
    # Вес d подбирается калибровкой; weights.d тогда игнорируется.
    auto_weight: bool = True
    # Запас на замирания при калибровке d и при выборе мощности игрой.
    calibration_margin_db: float = DEFAULT_CALIBRATION_MARGIN_DB
    noise_dbm: float = DEFAULT_NOISE_DBM
    target_pdr: float = DEFAULT_TARGET_PDR
    channel: ChannelParams = field(default_factory=ChannelParams)
    packet_draws: bool = False
    record_games: bool = False
    seed: int = 0

    def __post_init__(self):
        for name in ('n_channel_sets', 'games_per_set', 'stages_per_game'):
            if getattr(self, name) < 1:
                raise ConfigurationError(
                    f'Параметр `{name}` должен быть >= 1.')
        if not self.stage_duration_s > 0:
            raise ConfigurationError('Длительность стадии должна быть > 0.')
        if not math.isfinite(self.noise_dbm):
            raise ConfigurationError('Уровень шума должен быть конечным.')
        if not 0.0 < self.target_pdr < 1.0:
            raise ConfigurationError('Целевой PDR должен лежать в (0, 1).')
        if self.calibration_margin_db < 0:
            raise ConfigurationError(
                'Запас калибровки не может быть отрицательным.')
        if self.seed < 0:
            raise ConfigurationError('Seed должен быть неотрицательным.')
        params_for(self.modulation)
        if self.controller.constant_dbm is not None:
            self.grid.index_of(self.controller.constant_dbm)

    @property
    def n_games(self) -> int:
        return self.n_channel_sets * self.games_per_set

    @property
    def pdr_params(self) -> PdrModelParams:
        return params_for(self.modulation)

    @property
    def noise_mw(self) -> float:
        return float(dbm_to_mw(self.noise_dbm))

    @property
    def nominal_gain(self) -> float:
        """Средний канал на теле, ослабленный на запас калибровки."""
        return (self.channel.onbody.mean_gain
                * float(db_to_linear(-self.calibration_margin_db)))

    def resolve_weights(self) -> UtilityWeights:
        if not self.auto_weight:
            return self.weights
        d = calibrate_weight(self.grid, self.pdr_params, self.nominal_gain,
                             self.noise_mw, self.target_pdr, self.weights)
        return self.weights.with_d(d)

    def game_rules(self, weights: UtilityWeights) -> GameRules:
        return GameRules(
            controller=self.controller, grid=self.grid, weights=weights,
            pdr_params=self.pdr_params, target_pdr=self.target_pdr,
            noise_mw=self.noise_mw, packet_draws=self.packet_draws,
            fade_margin_db=self.calibration_margin_db,
            prior_gain=self.channel.onbody.mean_gain,
        )

    def as_items(self) -> List[Tuple[str, object]]:
        """Пары ключ-значение в формате файла конфигурации запуска."""
        coexistence = self.coexistence
        mobility = self.channel.mobility
        return [
            ('seed', self.seed),
            ('n_channel_sets', self.n_channel_sets),
            ('games_per_set', self.games_per_set),
            ('stages_per_game', self.stages_per_game),
            ('stage_duration_s', self.stage_duration_s),
            ('total_bans', coexistence.total_bans),
            ('orthogonal_channels', coexistence.orthogonal_channels),
            ('m_mode', coexistence.mode),
            ('fixed_m', coexistence.fixed_m
             if coexistence.mode == FIXED_M else ''),
            ('activity_resample', coexistence.resample),
            ('modulation', self.modulation),
            ('controller', self.controller.kind.value),
            ('constant_dbm', '' if self.controller.constant_dbm is None
             else self.controller.constant_dbm),
            ('relax', self.controller.relax),
            ('gain_forgetting', self.controller.gain_forgetting),
            ('grid.min_dbm', self.grid.min),
            ('grid.max_dbm', self.grid.max),
            ('grid.step_db', self.grid.step_db),
            ('weights.w', self.weights.w),
            ('weights.v', self.weights.v),
            ('weights.d', 'auto' if self.auto_weight else self.weights.d),
            ('calibration_margin_db', self.calibration_margin_db),
            ('noise_dbm', self.noise_dbm),
            ('target_pdr', self.target_pdr),
            ('onbody.correlation', self.channel.onbody.correlation),
            ('mobility.area_m', mobility.area_m),
            ('mobility.speed_mean', mobility.speed_mean),
            ('mobility.speed_std', mobility.speed_std),
            ('mobility.turn_std_deg', mobility.turn_std_deg),
            ('packet_draws', self.packet_draws),
            ('record_games', self.record_games),
        ]

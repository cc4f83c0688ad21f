from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exceptions import ConfigurationError
from .units import check_dbm, dbm_to_mw

GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PowerGrid:
    """Конечное множество дискретных мощностей передатчика, дБм."""

    levels: Tuple[float, ...]
    step_db: float
    levels_mw: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if levels.size == 0:
            raise ConfigurationError('Сетка мощностей пуста.')
        if levels.size > 1:
            steps = np.diff(levels)
            if np.any(steps <= 0):
                raise ConfigurationError(
                    'Уровни сетки должны строго возрастать.')
            if not np.allclose(steps, self.step_db, atol=GRID_TOLERANCE):
                raise ConfigurationError(
                    'Уровни сетки должны идти с постоянным шагом.')
        levels_mw = dbm_to_mw(levels)
        levels_mw.setflags(write=False)
        object.__setattr__(self, 'levels_mw', levels_mw)

    @property
    def min(self) -> float:
        return self.levels[0]

    @property
    def max(self) -> float:
        return self.levels[-1]

    @property
    def levels_dbm(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    def __len__(self):
        return len(self.levels)

    def index_of(self, level_dbm: float) -> int:
        """Индекс уровня сетки; для уровня вне сетки ConfigurationError."""
        idx = int(np.argmin(np.abs(self.levels_dbm - level_dbm)))
        if abs(self.levels[idx] - level_dbm) > GRID_TOLERANCE:
            raise ConfigurationError(
                f'Мощность {level_dbm} дБм не лежит на сетке '
                f'[{self.min}, {self.max}] дБм с шагом {self.step_db} дБ.'
            )
        return idx

    def contains(self, level_dbm: float) -> bool:
        try:
            self.index_of(level_dbm)
        except ConfigurationError:
            return False
        return True

    def nearest_index(self, level_dbm):
        """Ближайший уровень сетки с насыщением на границах."""
        position = np.asarray(level_dbm, dtype=float) - self.min
        if len(self) > 1:
            position = np.rint(position / self.step_db)
        else:
            position = np.zeros_like(position)
        return np.clip(position, 0, len(self) - 1).astype(int)[()]

    def clamp(self, level_dbm):
        return self.levels_dbm[self.nearest_index(level_dbm)][()]

    def coarsen(self, step_db: float) -> 'PowerGrid':
        """Прореженная сетка на том же диапазоне (для полного перебора)."""
        return make_power_grid(self.min, self.max, step_db)


def make_power_grid(min_dbm: float, max_dbm: float,
                    step_db: float) -> PowerGrid:
    min_dbm = check_dbm(min_dbm, 'минимальная мощность')
    max_dbm = check_dbm(max_dbm, 'максимальная мощность')
    if not min_dbm < max_dbm:
        raise ConfigurationError(
            'Минимальная мощность сетки должна быть меньше максимальной.')
    if not step_db > 0:
        raise ConfigurationError('Шаг сетки должен быть положительным.')
    steps = (max_dbm - min_dbm) / step_db
    n_steps = round(steps)
    if n_steps < 1 or abs(steps - n_steps) > GRID_TOLERANCE:
        raise ConfigurationError(
            f'Диапазон [{min_dbm}, {max_dbm}] дБм не делится на шаг '
            f'{step_db} дБ.'
        )
    levels = tuple(float(min_dbm + k * step_db) for k in range(n_steps + 1))
    levels = levels[:-1] + (float(max_dbm),)
    return PowerGrid(levels=levels, step_db=float(step_db))


DEFAULT_GRID = make_power_grid(-30.0, 0.0, 1.0)

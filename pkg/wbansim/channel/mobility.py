"""Модель ходьбы носителей BAN по квадратной площадке.

Положение обновляется каждую миллисекунду, курс получает небольшой
случайный поворот каждые 10 мс, на стенах площадки путь отражается.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class MobilityParams:
    area_m: float = 6.0
    speed_mean: float = 3.0
    speed_std: float = 0.2
    min_speed: float = 0.5
    turn_std_deg: float = 1.0
    turn_interval_steps: int = 10
    substep_s: float = 1e-3

    def __post_init__(self):
        if not (self.area_m > 0 and self.substep_s > 0):
            raise ConfigurationError(
                'Размер площадки и шаг обновления должны быть > 0.')
        if not (self.speed_mean > self.min_speed > 0):
            raise ConfigurationError(
                'Средняя скорость должна превышать минимальную (> 0).')
        if self.speed_std < 0 or self.turn_std_deg < 0:
            raise ConfigurationError(
                'Стандартные отклонения не могут быть отрицательными.')
        if self.turn_interval_steps < 1:
            raise ConfigurationError('Интервал поворотов должен быть >= 1.')

    @property
    def turn_period_s(self) -> float:
        return self.turn_interval_steps * self.substep_s

    def turn_std_rad(self, dt: float) -> float:
        """СКО поворота за dt: дисперсия растёт линейно со временем."""
        return math.radians(self.turn_std_deg) * math.sqrt(
            dt / self.turn_period_s)


@dataclass(frozen=True)
class WalkerState:
    position: Tuple[float, float]
    heading: float
    speed: float

    def __post_init__(self):
        if not self.speed > 0:
            raise DomainError('Скорость носителя должна быть > 0.')


def _reflect(coord, heading_component, area_m):
    """Отражение от стен [0, area_m]; возвращает координату и знак курса."""
    below = coord < 0
    above = coord > area_m
    coord = np.where(below, -coord, coord)
    coord = np.where(above, 2 * area_m - coord, coord)
    flip = below | above
    return np.clip(coord, 0.0, area_m), np.where(
        flip, -heading_component, heading_component)


def advance(x, y, heading, speed, dt, turn, area_m):
    """Один шаг для массива носителей: поворот, перенос, отражение."""
    heading = heading + turn
    dx = np.cos(heading)
    dy = np.sin(heading)
    x, dx = _reflect(x + speed * dt * dx, dx, area_m)
    y, dy = _reflect(y + speed * dt * dy, dy, area_m)
    return x, y, np.arctan2(dy, dx)


def step_walk(state: WalkerState, dt: float, rng: np.random.Generator,
              params: MobilityParams = MobilityParams(),
              turn: bool = True) -> WalkerState:
    """Один шаг одного носителя длиной dt секунд.

    Поворот масштабируется по dt так же, как накапливаются повороты
    walk_positions: шаги по 10 мс дают курс того же распределения.
    """
    if not dt > 0:
        raise DomainError('Шаг по времени должен быть > 0.')
    angle = rng.normal(0.0, params.turn_std_rad(dt)) if turn else 0.0
    x, y, heading = advance(
        np.float64(state.position[0]), np.float64(state.position[1]),
        np.float64(state.heading), state.speed, dt, angle, params.area_m,
    )
    return WalkerState(
        position=(float(x), float(y)), heading=float(heading),
        speed=state.speed,
    )


def draw_speed(rng: np.random.Generator, params: MobilityParams) -> float:
    """Скорость на всю прогулку: N(mean, std), усечённое снизу min_speed."""
    while True:
        speed = rng.normal(params.speed_mean, params.speed_std)
        if speed > params.min_speed:
            return float(speed)


def initial_walker(rng: np.random.Generator,
                   params: MobilityParams) -> WalkerState:
    x, y = rng.uniform(0.0, params.area_m, size=2)
    heading = rng.uniform(-math.pi, math.pi)
    return WalkerState(position=(float(x), float(y)), heading=float(heading),
                       speed=draw_speed(rng, params))


def walk_positions(walkers, turns: np.ndarray, n_substeps: int,
                   sample_steps: np.ndarray, params: MobilityParams):
    """Проводит всех носителей n_substeps шагами.

    turns: повороты формы (n_walkers, число поворотов), заранее взятые
    из собственных потоков носителей. Возвращает координаты формы
    (n_walkers, len(sample_steps), 2) после шагов sample_steps.
    """
    x = np.array([w.position[0] for w in walkers], dtype=float)
    y = np.array([w.position[1] for w in walkers], dtype=float)
    heading = np.array([w.heading for w in walkers], dtype=float)
    speed = np.array([w.speed for w in walkers], dtype=float)
    zero = np.zeros_like(x)
    samples = np.empty((len(walkers), len(sample_steps), 2))
    wanted = {int(step): k for k, step in enumerate(sample_steps)}
    for step in range(1, n_substeps + 1):
        if (step - 1) % params.turn_interval_steps == 0:
            turn = turns[:, (step - 1) // params.turn_interval_steps]
        else:
            turn = zero
        x, y, heading = advance(
            x, y, heading, speed, params.substep_s, turn, params.area_m)
        if step in wanted:
            samples[:, wanted[step], 0] = x
            samples[:, wanted[step], 1] = y
    return samples

"""Детерминированные подпотоки случайных чисел.

Каждый поток задаётся парой (seed, stream_id); stream_id: кортеж меток,
например ('set', 3, 'game', 7, 'ban', 1, 'onbody'). Одна и та же пара
всегда даёт одну и ту же последовательность, поэтому любую игру можно
воспроизвести отдельно от остальной кампании.
"""
import hashlib
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

Label = Union[int, str]

MOBILITY = 'mobility'
ONBODY = 'onbody'
SMALL_SCALE = 'smallscale'
ACTIVITY = 'activity'
INITIAL_POWER = 'initial_power'
PACKETS = 'packets'

SEED_MASK = (1 << 64) - 1


def _label_key(label: Label) -> int:
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        if label < 0:
            raise ValueError('Метка потока должна быть неотрицательной.')
        return int(label)
    digest = hashlib.blake2b(str(label).encode('utf-8'), digest_size=8)
    # Строковые метки не пересекаются с числовыми: старший бит взведён.
    return int.from_bytes(digest.digest(), 'little') | (1 << 63)


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: Tuple[Label, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'seed', int(self.seed) & SEED_MASK)
        object.__setattr__(self, 'stream_id', tuple(self.stream_id))

    def substream(self, *labels: Label) -> 'RngStream':
        return RngStream(self.seed, self.stream_id + labels)

    def generator(self) -> np.random.Generator:
        """Новый генератор с начала потока; владелец у него один."""
        sequence = np.random.SeedSequence(
            entropy=self.seed,
            spawn_key=tuple(_label_key(label) for label in self.stream_id),
        )
        return np.random.default_rng(sequence)

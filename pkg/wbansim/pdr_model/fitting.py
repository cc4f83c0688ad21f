"""Подбор (a_c, b_c) сжатой экспоненты по измеренным точкам PDR(SINR).

Демпфированный метод наименьших квадратов (Левенберг-Марквардт)
в логарифмических параметрах, так что a_c и b_c остаются положительными.
"""
import csv
import logging
from typing import Iterable, List, NamedTuple, Tuple

import numpy as np
from scipy import optimize

from core.exceptions import DomainError, FitError
from core.units import db_to_linear

from .model import PdrModelParams

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 500
STEP_TOLERANCE = 1e-10
MIN_SAMPLES = 4
SAMPLES_HEADER = ('sinr_db', 'pdr')


class FitResult(NamedTuple):
    params: PdrModelParams
    rmse: float


def _initial_guess(gamma: np.ndarray, pdr: np.ndarray) -> np.ndarray:
    """Линеаризация ln(-ln pdr) = -b_c ln(gamma) - b_c ln(a_c)."""
    informative = (pdr > 0.02) & (pdr < 0.98)
    if np.unique(gamma[informative]).size < 2:
        informative = np.ones_like(pdr, dtype=bool)
    x = np.log(gamma[informative])
    y = np.log(-np.log(pdr[informative]))
    slope, intercept = np.polyfit(x, y, 1)
    b_c = -slope if slope < 0 else 5.0
    a_c = np.exp(-intercept / b_c)
    return np.log([a_c, b_c])


def _model(theta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    a_c, b_c = np.exp(theta)
    with np.errstate(over='ignore', under='ignore'):
        return np.exp(-np.power(1.0 / (gamma * a_c), b_c))


def fit_compressed_exponential(
        samples: Iterable[Tuple[float, float]], modulation=None) -> FitResult:
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[0] < MIN_SAMPLES or data.shape[1] != 2:
        raise DomainError(
            f'Для подбора нужно не меньше {MIN_SAMPLES} точек (sinr_db, pdr).')
    sinr_db, pdr = data[:, 0], data[:, 1]
    if np.any(~np.isfinite(data)):
        raise DomainError('Точки должны быть конечными числами.')
    if np.any((pdr <= 0) | (pdr >= 1)):
        raise DomainError('Значения PDR должны лежать в интервале (0, 1).')
    if np.unique(sinr_db).size < 2:
        raise FitError('Нужно хотя бы два различных значения SINR.')
    gamma = db_to_linear(sinr_db)

    def residuals(theta):
        return _model(theta, gamma) - pdr

    result = optimize.least_squares(
        residuals, _initial_guess(gamma, pdr), method='lm',
        xtol=STEP_TOLERANCE, ftol=STEP_TOLERANCE, gtol=STEP_TOLERANCE,
        max_nfev=MAX_ITERATIONS,
    )
    if result.status <= 0:
        raise FitError(
            f'Подбор не сошёлся за {MAX_ITERATIONS} итераций: '
            f'{result.message} (theta={result.x.tolist()}).'
        )
    a_c, b_c = np.exp(result.x)
    rmse = float(np.sqrt(np.mean(residuals(result.x) ** 2)))
    params = PdrModelParams.from_compressed(
        float(a_c), float(b_c), modulation=modulation)
    logger.info('Подобраны a_c=%.6g b_c=%.6g (rmse=%.3g, %s итераций)',
                a_c, b_c, rmse, result.nfev)
    return FitResult(params=params, rmse=rmse)


def read_samples(path) -> List[Tuple[float, float]]:
    """Читает таблицу `sinr_db,pdr`; ошибка называет номер строки."""
    samples = []
    with open(path, newline='', encoding='utf-8') as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(
                cell.strip() for cell in header) != SAMPLES_HEADER:
            raise DomainError(
                'Строка 1: ожидается заголовок `sinr_db,pdr`.')
        for row in reader:
            if not row or not ''.join(row).strip():
                continue
            try:
                sinr_db, pdr = (float(cell) for cell in row)
            except ValueError:
                raise DomainError(
                    f'Строка {reader.line_num}: не удалось разобрать '
                    f'`{",".join(row)}`.'
                )
            samples.append((sinr_db, pdr))
    return samples

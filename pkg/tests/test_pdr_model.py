import math

import numpy as np
import pytest

from core.exceptions import ConfigurationError, DomainError, FitError
from core.units import db_to_linear
from pdr_model.fitting import fit_compressed_exponential, read_samples
from pdr_model.model import (
    PDR_FLOOR, PdrModelParams, compressed_pdr, params_for, pdr_from_sinr,
    raw_pdr, sinr_for_target_pdr,
)


def test_preset_values(bpsk, dpsk):
    assert (bpsk.a, bpsk.b) == (-30.0512, -6.3470)
    assert (dpsk.a, dpsk.b) == (-337.2164, -7.4540)
    assert params_for("bpsk") is bpsk
    with pytest.raises(ConfigurationError):
        params_for("QPSK")


@pytest.mark.parametrize("preset", ["BPSK", "DPSK"])
def test_compressed_form_equals_simplified(preset):
    params = params_for(preset)
    gamma = np.logspace(-0.3, 1.5, 400)
    simplified = raw_pdr(gamma, params)
    compressed = compressed_pdr(gamma, params)
    informative = simplified > 1e-300
    assert np.allclose(compressed[informative], simplified[informative],
                       rtol=1e-6, atol=0.0), (
        "Обе записи модели PDR должны совпадать с точностью 1e-6."
    )
    rebuilt = PdrModelParams.from_compressed(params.a_c, params.b_c)
    assert math.isclose(rebuilt.a, params.a, rel_tol=1e-9)


@pytest.mark.parametrize("a, b", [(1.0, -6.0), (-30.0, 2.0)])
def test_params_validation(a, b):
    with pytest.raises(ConfigurationError):
        PdrModelParams.from_simplified(a, b)


@pytest.mark.parametrize(
    "preset, expected", [("BPSK", 2.4367), ("DPSK", 2.953)],
)
def test_sinr_for_target(preset, expected):
    gamma = sinr_for_target_pdr(0.9, params_for(preset))
    assert math.isclose(gamma, expected, rel_tol=1e-3), (
        f"Для {preset} целевой PDR 0.9 достигается при SINR ~ {expected}."
    )


@pytest.mark.parametrize("target", [0.1, 0.5, 0.9, 0.99, 0.999])
def test_inverse_round_trip(bpsk, dpsk, target):
    for params in (bpsk, dpsk):
        gamma = sinr_for_target_pdr(target, params)
        assert math.isclose(pdr_from_sinr(gamma, params), target,
                            rel_tol=1e-9), (
            "pdr_from_sinr должен обращать sinr_for_target_pdr."
        )


@pytest.mark.parametrize("target", [0.0, 1.0, -0.5, 1.5])
def test_inverse_domain(bpsk, target):
    with pytest.raises(DomainError):
        sinr_for_target_pdr(target, bpsk)


def test_pdr_monotone_and_bounded(bpsk):
    gamma = np.logspace(-2, 3, 1000)
    pdr = pdr_from_sinr(gamma, bpsk)
    assert np.all(np.diff(pdr) >= 0), "PDR не должен убывать с ростом SINR."
    assert np.all((pdr >= PDR_FLOOR) & (pdr <= 1.0))
    with pytest.raises(DomainError):
        pdr_from_sinr(0.0, bpsk)


@pytest.mark.parametrize("preset", ["BPSK", "DPSK"])
def test_single_inflection(preset):
    gamma = np.linspace(0.3, 10.0, 2000)
    curvature = np.diff(raw_pdr(gamma, params_for(preset)), 2)
    significant = curvature[np.abs(curvature) > 1e-12 * np.abs(
        curvature).max()]
    changes = np.count_nonzero(np.diff(np.sign(significant)) != 0)
    assert changes == 1, "Кривая PDR(SINR) должна иметь одну точку перегиба."


@pytest.mark.parametrize("preset", ["BPSK", "DPSK"])
def test_single_inflection_in_db(preset):
    params = params_for(preset)
    sinr_db = np.arange(-10.0, 20.05, 0.1)
    curvature = np.diff(pdr_from_sinr(db_to_linear(sinr_db), params), 2)
    significant = np.abs(curvature) > 1e-12 * np.abs(curvature).max()
    signs = np.sign(curvature[significant])
    centers = sinr_db[1:-1][significant]
    (change,) = np.flatnonzero(np.diff(signs) != 0)
    assert signs[0] > 0 > signs[-1], (
        "В шкале дБ кривая PDR сначала выпукла, затем вогнута."
    )
    # Перегиб по ln(SINR) лежит там, где a * gamma^b = -1, то есть PDR = 1/e.
    expected_db = 10 * math.log10((-1.0 / params.a) ** (1.0 / params.b))
    assert centers[change] - 0.1 <= expected_db <= centers[change + 1] + 0.1


def test_fit_recovers_synthetic_samples(bpsk):
    sinr_db = np.linspace(0.0, 8.0, 40)
    pdr = raw_pdr(db_to_linear(sinr_db), bpsk)
    result = fit_compressed_exponential(zip(sinr_db, pdr), modulation="BPSK")
    assert result.rmse < 1e-6
    assert math.isclose(result.params.a, bpsk.a, rel_tol=1e-3)
    assert math.isclose(result.params.b, bpsk.b, rel_tol=1e-3)


def test_fit_with_noise(bpsk):
    generator = np.random.default_rng(3)
    sinr_db = np.linspace(0.0, 8.0, 60)
    pdr = raw_pdr(db_to_linear(sinr_db), bpsk)
    noisy = np.clip(pdr + generator.normal(0.0, 0.005, pdr.size),
                    1e-6, 1 - 1e-6)
    result = fit_compressed_exponential(zip(sinr_db, noisy))
    assert result.rmse <= 0.01, (
        "Шум 0.005 в измерениях не должен давать rmse больше 0.01."
    )


def test_fit_input_errors():
    with pytest.raises(DomainError):
        fit_compressed_exponential([(1.0, 0.5), (2.0, 0.6)])
    with pytest.raises(DomainError):
        fit_compressed_exponential(
            [(1.0, 0.5), (2.0, 1.0), (3.0, 0.7), (4.0, 0.8)])
    with pytest.raises(FitError):
        fit_compressed_exponential([(3.0, 0.5)] * 5)


def test_read_samples(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text("sinr_db,pdr\n1.0,0.2\n\n2.0,0.5\n", encoding="utf-8")
    assert read_samples(path) == [(1.0, 0.2), (2.0, 0.5)]


def test_read_samples_names_bad_row(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text("sinr_db,pdr\n1.0,0.2\n2.0,abc\n", encoding="utf-8")
    with pytest.raises(DomainError, match="Строка 3"):
        read_samples(path)
    path.write_text("snr,pdr\n1.0,0.2\n", encoding="utf-8")
    with pytest.raises(DomainError, match="Строка 1"):
        read_samples(path)

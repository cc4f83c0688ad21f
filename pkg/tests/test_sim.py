import dataclasses

import numpy as np
import pytest
from scipy import stats

from channel.fading import OnBodyFadingParams, sample_onbody_gain
from channel.trace import ChannelTrace
from cli.config import (
    build_campaign_config, parse_config_text, validate_config,
)
from coexistence.sampling import PER_STAGE, ActiveSet, CoexistenceParams
from controllers.policies import ControllerConfig, best_response_indices
from core.exceptions import ConfigurationError, DomainError
from core.rng import INITIAL_POWER, RngStream
from core.units import dbm_to_mw, linear_to_db
from pdr_model.model import pdr_from_sinr
from sim.campaign import (
    MIN_SERIES, Convergence, convergence_stage, game_trace, play_game,
    run_campaign,
)
from sim.config import CampaignConfig, GameRules
from sim.engine import (
    compute_sinr, compute_sinrs, initial_powers, run_game, run_stage,
)
from sim.reports import (
    GAMES_FILE, METRICS_FILE, RUN_META_FILE, render_run_meta, write_campaign,
)

NOISE_MW = 1e-10


def static_trace(onbody, inter, stages=1):
    onbody = np.asarray(onbody, dtype=float)
    inter = np.asarray(inter, dtype=float) * (1 - np.eye(len(onbody)))
    return ChannelTrace(
        onbody_gain=np.repeat(onbody[:, None], stages, axis=1),
        interbody_gain=np.repeat(inter[:, :, None], stages, axis=2),
        stage_duration_s=0.05,
    )


def make_rules(grid, weights, bpsk, packet_draws=False, **controller):
    return GameRules(
        controller=ControllerConfig(**controller), grid=grid,
        weights=weights, pdr_params=bpsk, target_pdr=0.9,
        noise_mw=NOISE_MW, packet_draws=packet_draws,
    )


@pytest.fixture
def pair_trace():
    return static_trace([1e-6, 1e-6], [[0.0, 1e-9], [10 ** -9.9, 0.0]])


def test_compute_sinr_example(pair_trace):
    sinr = compute_sinr(0, [-25.0, -10.0], ActiveSet((0, 1)), pair_trace, 0,
                        NOISE_MW)
    assert linear_to_db(sinr) == pytest.approx(14.49, abs=0.01), (
        "SINR должен считаться как p|h|^2 / (сумма помех + шум)."
    )


def test_compute_sinr_without_interferers(pair_trace):
    sinr = compute_sinr(0, [-25.0, -10.0], ActiveSet((0,)), pair_trace, 0,
                        NOISE_MW)
    assert sinr == pytest.approx(dbm_to_mw(-25.0) * 1e-6 / NOISE_MW), (
        "Неактивные BAN не должны создавать помех."
    )
    with pytest.raises(ConfigurationError):
        compute_sinr(1, [-25.0, -10.0], ActiveSet((0,)), pair_trace, 0,
                     NOISE_MW)


def test_compute_sinr_equal_received_powers():
    trace = static_trace([1e-6, 1e-6], [[0.0, 1e-6], [1e-6, 0.0]])
    sinr = compute_sinr(0, [-10.0, -10.0], ActiveSet((0, 1)), trace, 0,
                        1e-30)
    assert sinr == pytest.approx(1.0)


def test_compute_sinrs_matches_scalar(small_config):
    trace = game_trace(small_config, 0, 0)
    power = [-30.0, -12.0, -5.0, 0.0]
    active = ActiveSet((0, 2, 3))
    for stage in (0, 7, 19):
        sinrs = compute_sinrs(power, active, trace, stage, NOISE_MW)
        assert np.isnan(sinrs[1])
        for i in active:
            assert sinrs[i] == pytest.approx(
                compute_sinr(i, power, active, trace, stage, NOISE_MW),
                rel=1e-12)


def test_inactive_ban_holds_power(pair_trace, grid, weights, bpsk):
    rules = make_rules(grid, weights, bpsk)
    state = run_stage(0, [-20.0, -5.0], ActiveSet((0,)), pair_trace, rules)
    assert state.next_power_dbm[1] == -5.0, (
        "Неактивная BAN должна сохранять свою мощность."
    )
    assert np.isnan(state.sinr[1]) and np.isnan(state.pdr[1])
    assert state.observations[1] is None
    assert state.observations[0].interference_plus_noise == \
        pytest.approx(NOISE_MW)
    assert grid.contains(state.next_power_dbm[0])


def test_run_stage_is_deterministic(pair_trace, grid, weights, bpsk):
    rules = make_rules(grid, weights, bpsk)
    first = run_stage(0, [-20.0, -5.0], ActiveSet((0, 1)), pair_trace, rules)
    second = run_stage(0, [-20.0, -5.0], ActiveSet((0, 1)), pair_trace,
                       rules)
    assert np.array_equal(first.next_power_dbm, second.next_power_dbm)
    assert np.array_equal(first.sinr, second.sinr)


def test_packet_draws_need_generator(pair_trace, grid, weights, bpsk):
    rules = make_rules(grid, weights, bpsk, packet_draws=True)
    with pytest.raises(ConfigurationError):
        run_stage(0, [-20.0, -5.0], ActiveSet((0, 1)), pair_trace, rules)


def test_constant_controller_keeps_power(grid, weights, bpsk):
    trace = static_trace([1e-6, 1e-6], [[0.0, 1e-9], [1e-9, 0.0]], 30)
    rules = make_rules(grid, weights, bpsk, kind="constant",
                       constant_dbm=-10.0)
    record = run_game(trace, rules, 30, CoexistenceParams(total_bans=2),
                      RngStream(5))
    active = record.active.astype(bool)
    assert np.all(record.power_dbm[1:][active[1:]] == -10.0), (
        "Постоянный контроллер не должен менять мощность."
    )


def test_single_ban_reaches_best_response(grid, weights, bpsk):
    trace = static_trace([1e-7], [[0.0]], 10)
    rules = make_rules(grid, weights, bpsk)
    coexistence = CoexistenceParams(total_bans=1, orthogonal_channels=2)
    record = run_game(trace, rules, 10, coexistence, RngStream(3))
    expected = grid.levels[
        best_response_indices(1e-7 / NOISE_MW, grid, weights, bpsk)[0]]
    assert np.all(record.active)
    assert np.all(record.power_dbm[1:] == expected), (
        "Одиночная BAN должна выйти на argmax полезности за одну стадию."
    )


def test_low_interference_power_settles(grid, weights, bpsk):
    trace = static_trace(
        [1e-7, 2e-7, 5e-8], np.full((3, 3), 1e-14), 30)
    rules = make_rules(grid, weights, bpsk)
    coexistence = CoexistenceParams(total_bans=3, orthogonal_channels=2)
    record = run_game(trace, rules, 30, coexistence, RngStream(8))
    mean_dbm = linear_to_db(record.active_power_mw() / 3)
    assert np.all(np.diff(mean_dbm[5:]) <= 0.5)


@pytest.mark.parametrize("kind", ["sah", "sinr_balance"])
def test_target_sinr_is_stationary_for_all_bans(grid, weights, bpsk, kind):
    trace = static_trace([1e-6] * 3, np.full((3, 3), 2.45e-7))
    active = ActiveSet((0, 1, 2))
    power = np.full(3, -20.0)
    sinr = compute_sinrs(power, active, trace, 0, NOISE_MW)
    assert np.allclose(sinr, 2.0)
    rules = dataclasses.replace(
        make_rules(grid, weights, bpsk, kind=kind),
        target_pdr=float(pdr_from_sinr(sinr[0], bpsk)))
    for _ in range(20):
        state = run_stage(0, power, active, trace, rules)
        assert np.array_equal(state.next_power_dbm, power), (
            "Если SINR всех BAN равен целевому, мощности не меняются."
        )
        power = state.next_power_dbm


FADING_STAGES = 3000


def onbody_game(forgetting, rng):
    """Одиночная BAN на независимых по стадиям замираниях на теле."""
    gains = sample_onbody_gain(OnBodyFadingParams(), rng, size=FADING_STAGES)
    trace = ChannelTrace(
        onbody_gain=gains[None, :],
        interbody_gain=np.zeros((1, 1, FADING_STAGES)),
        stage_duration_s=0.05,
    )
    coexistence = CoexistenceParams(total_bans=1, orthogonal_channels=2)
    config = CampaignConfig(
        coexistence=coexistence,
        controller=ControllerConfig(gain_forgetting=forgetting))
    rules = config.game_rules(config.resolve_weights())
    record = run_game(trace, rules, FADING_STAGES, coexistence,
                      RngStream(2))
    return config, rules, record


def test_game_rules_plan_with_fade_margin():
    config = CampaignConfig()
    rules = config.game_rules(config.resolve_weights())
    assert rules.fade_margin_db == config.calibration_margin_db
    assert rules.prior_gain == config.channel.onbody.mean_gain
    assert rules.prior_gain * rules.planning_factor == pytest.approx(
        config.nominal_gain), (
        "До первых пакетов игра планирует по тому же каналу, "
        "что и калибровка d."
    )


def test_game_power_steady_under_onbody_fading(rng):
    config, rules, record = onbody_game(0.0, rng)
    power = record.power_dbm[:, 0]
    steps = np.abs(np.diff(power[20:]))
    assert steps.max() <= 2.0, (
        "Мощность игры не должна следовать за каждым замиранием."
    )
    assert np.mean(steps > 0) < 0.1
    nominal = best_response_indices(
        config.nominal_gain / config.noise_mw, rules.grid, rules.weights,
        rules.pdr_params)[0]
    assert abs(np.median(power[100:]) - rules.grid.levels[nominal]) <= 1.0
    assert -28.0 <= np.mean(power[100:]) <= -24.0


def test_game_hit_rate_under_onbody_fading(rng):
    config, rules, record = onbody_game(0.0, rng)
    onbody = config.channel.onbody
    power_mw = dbm_to_mw(record.power_dbm[20:, 0])
    needed = rules.target_sinr * rules.noise_mw / (
        power_mw * onbody.mean_gain)
    expected = stats.gamma.sf(needed, onbody.shape,
                              scale=1.0 / onbody.shape).mean()
    hits = record.pdr[20:, 0] >= config.target_pdr
    assert abs(hits.mean() - expected) < 0.02
    assert hits.mean() > 0.9, (
        "С запасом на замирания одиночная BAN должна держать PDR >= 0.9 "
        "более чем в 90% стадий."
    )


def test_last_packet_planning_chases_fading(rng):
    _, _, record = onbody_game(1.0, rng)
    steps = np.abs(np.diff(record.power_dbm[20:, 0]))
    assert steps.max() >= 5.0
    assert np.mean(steps > 0) > 0.5


def test_run_game_validation(grid, weights, bpsk):
    rules = make_rules(grid, weights, bpsk)
    trace = static_trace([1e-7, 1e-7], [[0, 1e-9], [1e-9, 0]], 5)
    with pytest.raises(ConfigurationError):
        run_game(trace, rules, 10, CoexistenceParams(total_bans=2),
                 RngStream(1))
    with pytest.raises(ConfigurationError):
        run_game(trace, rules, 5, CoexistenceParams(total_bans=3),
                 RngStream(1))


def test_run_game_replay_and_single_stage(small_config, grid, weights, bpsk):
    trace = game_trace(small_config, 1, 0)
    rules = make_rules(grid, weights, bpsk)
    stream = RngStream(99)
    first = run_game(trace, rules, 20, small_config.coexistence, stream)
    again = run_game(trace, rules, 20, small_config.coexistence, stream)
    assert first.equals(again), "Повтор игры с тем же seed должен совпадать."
    single = run_game(trace, rules, 1, small_config.coexistence, stream)
    assert single.n_stages == 1
    start = initial_powers(
        4, rules, stream.substream(INITIAL_POWER).generator())
    assert np.array_equal(single.power_dbm[0], start)


def test_activity_resampled_per_stage(grid, weights, bpsk):
    trace = static_trace(np.full(4, 1e-7), np.full((4, 4), 1e-10), 40)
    rules = make_rules(grid, weights, bpsk)
    per_stage = CoexistenceParams(total_bans=4, resample=PER_STAGE)
    record = run_game(trace, rules, 40, per_stage, RngStream(4))
    assert len({row.tobytes() for row in record.active}) > 1
    per_game = run_game(trace, rules, 40, CoexistenceParams(total_bans=4),
                        RngStream(4))
    assert len({row.tobytes() for row in per_game.active}) == 1


def test_packet_draws_recorded(small_config, grid, weights, bpsk):
    trace = game_trace(small_config, 0, 1)
    rules = make_rules(grid, weights, bpsk, packet_draws=True)
    record = run_game(trace, rules, 20, small_config.coexistence,
                      RngStream(2))
    assert record.delivered is not None
    assert not np.any(record.delivered & ~record.active), (
        "Пакеты доставляют только активные BAN."
    )
    plain = run_game(trace, make_rules(grid, weights, bpsk), 20,
                     small_config.coexistence, RngStream(2))
    assert np.array_equal(plain.power_dbm, record.power_dbm)


def test_convergence_stage():
    assert convergence_stage([-20.0] * 30) == Convergence(0, True)
    step = [-10.0] * 10 + [-20.0] * 20
    assert convergence_stage(step) == Convergence(10, True)
    alternating = [(-1) ** k * 5.0 for k in range(30)]
    assert convergence_stage(alternating) == Convergence(30, False)
    with pytest.raises(DomainError):
        convergence_stage([-20.0] * (MIN_SERIES - 1))


def test_campaign_is_deterministic(small_config):
    first = run_campaign(small_config)
    second = run_campaign(small_config, jobs=3)
    assert np.array_equal(first.pct_at_target, second.pct_at_target), (
        "Отчёт не должен зависеть от числа потоков."
    )
    assert np.array_equal(first.mean_power_dbm, second.mean_power_dbm)
    assert first.convergence == second.convergence
    assert first.weights == second.weights
    assert first.games is None
    assert len(first.pct_at_target) == small_config.stages_per_game
    assert np.all((first.pct_at_target >= 0)
                  & (first.pct_at_target <= 100))


def test_campaign_games_match_standalone(small_config_with_games):
    config = small_config_with_games
    report = run_campaign(config)
    assert len(report.games) == config.n_games
    rules = config.game_rules(report.weights)
    alone = play_game(config, rules, 1, 2)
    assert alone.equals(report.games[1 * config.games_per_set + 2]), (
        "Игра внутри кампании должна совпадать с той же игрой отдельно."
    )

    hits = sum(game.hits(config.target_pdr) for game in report.games)
    active = sum(game.active_counts() for game in report.games)
    power = sum(game.active_power_mw() for game in report.games)
    assert np.allclose(report.pct_at_target, 100.0 * hits / active)
    assert np.allclose(report.mean_power_dbm, linear_to_db(power / active))


def test_default_weight_calibration():
    d = CampaignConfig().resolve_weights().d
    assert 1e-6 <= d <= 1e-1
    fixed = CampaignConfig(auto_weight=False).resolve_weights()
    assert fixed.d == 1e-3


def test_campaign_config_validation():
    with pytest.raises(ConfigurationError):
        CampaignConfig(stages_per_game=0)
    with pytest.raises(ConfigurationError):
        CampaignConfig(modulation="QAM")
    with pytest.raises(ConfigurationError):
        CampaignConfig(controller=ControllerConfig(kind="constant",
                                                   constant_dbm=-10.5))


def test_write_campaign(small_config_with_games, tmp_path):
    report = run_campaign(small_config_with_games)
    out = write_campaign(small_config_with_games, report,
                         tmp_path / "nested" / "run")
    lines = (out / METRICS_FILE).read_text(encoding="utf-8").splitlines()
    assert lines[0] == "stage,pct_at_target,mean_power_dbm"
    assert len(lines) == small_config_with_games.stages_per_game + 1
    games = (out / GAMES_FILE).read_text(encoding="utf-8").splitlines()
    assert games[0] == "game,stage,ban,active,power_dbm,sinr_db,pdr"
    assert len(games) == 6 * 20 * 4 + 1
    assert (out / RUN_META_FILE).exists()

    again = write_campaign(small_config_with_games,
                           run_campaign(small_config_with_games),
                           tmp_path / "again")
    assert (again / METRICS_FILE).read_bytes() == \
        (out / METRICS_FILE).read_bytes(), (
            "Повторный запуск с тем же seed должен дать тот же metrics.csv."
        )


def test_run_meta_reloads(small_config):
    config = dataclasses.replace(
        small_config,
        coexistence=CoexistenceParams(total_bans=4, mode="fixed_m",
                                      fixed_m=2),
        controller=ControllerConfig(kind="sinr_balance", relax=0.5),
    )
    report = run_campaign(config)
    text = render_run_meta(config, report)
    assert "# calibrated_d = " in text
    form = validate_config(parse_config_text(text))
    assert build_campaign_config(form.cleaned_data) == config, (
        "Конфигурация из run_meta.txt должна воспроизводить запуск."
    )

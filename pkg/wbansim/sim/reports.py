"""Файлы результатов кампании: metrics.csv, games.csv и run_meta.txt."""
import csv
from pathlib import Path

from django.utils import timezone

from core.units import linear_to_db

from .campaign import (
    CONVERGENCE_BAND_DB, STEADY_STAGES, MetricsReport,
)
from .config import CampaignConfig

METRICS_FILE = 'metrics.csv'
GAMES_FILE = 'games.csv'
RUN_META_FILE = 'run_meta.txt'

METRICS_FIELDS = ('stage', 'pct_at_target', 'mean_power_dbm')
GAMES_FIELDS = ('game', 'stage', 'ban', 'active', 'power_dbm', 'sinr_db',
                'pdr')


def _number(value: float) -> str:
    return f'{value:.6f}'


def write_metrics_csv(report: MetricsReport, path) -> None:
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.DictWriter(fh, fieldnames=METRICS_FIELDS)
        writer.writeheader()
        for stage, (pct, power) in enumerate(
                zip(report.pct_at_target, report.mean_power_dbm)):
            writer.writerow({
                'stage': stage,
                'pct_at_target': _number(pct),
                'mean_power_dbm': _number(power),
            })


def write_games_csv(report: MetricsReport, path) -> None:
    """Сырые трассы игр; у неактивных BAN поля SINR и PDR пустые."""
    games = report.games or []
    with_packets = any(game.delivered is not None for game in games)
    fields = GAMES_FIELDS + (('delivered',) if with_packets else ())
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for index, game in enumerate(games):
            for stage in range(game.n_stages):
                for ban in range(game.power_dbm.shape[1]):
                    active = bool(game.active[stage, ban])
                    row = {
                        'game': index,
                        'stage': stage,
                        'ban': ban,
                        'active': int(active),
                        'power_dbm': _number(game.power_dbm[stage, ban]),
                        'sinr_db': '',
                        'pdr': '',
                    }
                    if active:
                        row['sinr_db'] = _number(
                            linear_to_db(game.sinr[stage, ban]))
                        row['pdr'] = _number(game.pdr[stage, ban])
                    if with_packets:
                        row['delivered'] = (
                            int(game.delivered[stage, ban]) if active
                            else '')
                    writer.writerow(row)


def render_run_meta(config: CampaignConfig, report: MetricsReport,
                    started=None, finished=None) -> str:
    """Конфигурация в формате файла запуска плюс итоги кампании.

    Блок конфигурации можно подать обратно в `run` без изменений.
    """
    lines = ['# wbansim run_meta']
    if started is not None:
        lines.append(f'# started = {started.isoformat()}')
    if finished is not None:
        lines.append(f'# finished = {finished.isoformat()}')
    lines.append('')
    for key, value in config.as_items():
        lines.append(f'{key} = {value}')
    lines += [
        '',
        f'# calibrated_d = {report.weights.d!r}',
        f'# convergence_rule = first stage within {CONVERGENCE_BAND_DB} dB '
        f'of the mean of the final {STEADY_STAGES} stages',
        f'# convergence_stage = {report.convergence.stage}',
        f'# converged = {report.convergence.converged}',
        f'# steady_pct_at_target = {report.steady_pct:.4f}',
        f'# steady_power_dbm = {report.steady_power_dbm:.4f}',
        f'# pdr_clamp_events = {report.clamp_events}',
    ]
    return '\n'.join(lines) + '\n'


def write_campaign(config: CampaignConfig, report: MetricsReport,
                   out_dir, started=None) -> Path:
    """Пишет все файлы кампании в out_dir, создавая каталог."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(report, out_dir / METRICS_FILE)
    if report.games is not None:
        write_games_csv(report, out_dir / GAMES_FILE)
    meta = render_run_meta(config, report, started, timezone.now())
    (out_dir / RUN_META_FILE).write_text(meta, encoding='utf-8')
    return out_dir

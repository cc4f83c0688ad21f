import csv
import dataclasses
import logging

from django.utils import timezone

from cli.commands import SimulationCommand
from coexistence.sampling import FIXED_M
from core.exceptions import ConfigurationError
from sim.campaign import run_campaign
from sim.reports import write_campaign

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ('m', 'steady_pct', 'steady_power_dbm', 'convergence_stage')


class Command(SimulationCommand):
    help = 'Кампании с фиксированным числом активных BAN для каждого m'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--m', type=int, nargs='+', dest='m_values',
            help='Значения m (по умолчанию от 2 до M)')
        parser.add_argument('--out', help='Каталог результатов')

    def run(self, m_values, out, jobs, **options):
        config = self.load_config(options)
        total = config.coexistence.total_bans
        if not m_values:
            m_values = list(range(min(2, total), total + 1))
        bad = [m for m in m_values if not 1 <= m <= total]
        if bad:
            raise ConfigurationError(
                f'Значения m {bad} вне диапазона [1, M = {total}].')
        out_dir = self.output_path(out, 'sweep-m')
        out_dir.mkdir(parents=True, exist_ok=True)

        rows = []
        for m in m_values:
            fixed = dataclasses.replace(
                config, coexistence=dataclasses.replace(
                    config.coexistence, mode=FIXED_M, fixed_m=m))
            started = timezone.now()
            report = run_campaign(fixed, jobs=jobs)
            write_campaign(fixed, report, out_dir / f'm{m}', started=started)
            logger.info('m=%s: %.1f%%, %.2f дБм', m, report.steady_pct,
                        report.steady_power_dbm)
            self.stdout.write(
                f'm={m}: {report.steady_pct:.1f}%, '
                f'{report.steady_power_dbm:.2f} дБм')
            rows.append({
                'm': m,
                'steady_pct': f'{report.steady_pct:.6f}',
                'steady_power_dbm': f'{report.steady_power_dbm:.6f}',
                'convergence_stage': report.convergence_stage,
            })
        with open(out_dir / 'summary.csv', 'w', newline='',
                  encoding='utf-8') as fh:
            writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
        self.stdout.write(self.style.SUCCESS(f'Результаты в {out_dir}'))

from django.utils import timezone

from cli.commands import SimulationCommand
from sim.campaign import run_campaign
from sim.reports import write_campaign


class Command(SimulationCommand):
    help = 'Запускает кампанию игр и пишет metrics.csv и run_meta.txt'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--out', help='Каталог результатов (создаётся при необходимости)')

    def run(self, out, jobs, **options):
        config = self.load_config(options)
        out_dir = self.output_path(out, 'run')
        started = timezone.now()
        report = run_campaign(config, jobs=jobs)
        write_campaign(config, report, out_dir, started=started)
        self.stdout.write(
            f'Доля BAN на целевом PDR: {report.steady_pct:.1f}%, '
            f'средняя мощность {report.steady_power_dbm:.2f} дБм, '
            f'сходимость на стадии {report.convergence_stage}')
        self.stdout.write(self.style.SUCCESS(f'Результаты в {out_dir}'))

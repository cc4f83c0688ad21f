import csv
import dataclasses

import numpy as np
from django.conf import settings

from cli.commands import SimulationCommand
from core.exceptions import SizeError
from core.rng import RngStream
from equilibrium.scenario import random_profile_welfare, sample_scenario
from equilibrium.search import verify_social_optimality

CSV_FIELDS = ('scenario_id', 'm', 'ne_welfare', 'opt_welfare', 'gap',
              'profiles_equal')
# Разрыв меньше этой доли |opt| считается нулевым.
ZERO_GAP = 1e-12
DEFAULT_RANDOM_PROFILES = 1000


class Command(SimulationCommand):
    help = ('Сравнивает равновесие Нэша с общественным оптимумом '
            'на случайных замороженных стадиях')

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--scenarios', type=int, default=100, help='Число сценариев')
        parser.add_argument(
            '--m', type=int, default=2, dest='m',
            help='Число активных BAN в сценарии')
        parser.add_argument(
            '--coarse-step-db', type=float, dest='coarse_step_db',
            help='Шаг прореженной сетки для перебора, дБ')
        parser.add_argument(
            '--random-profiles', type=int, default=DEFAULT_RANDOM_PROFILES,
            dest='random_profiles',
            help='Случайных профилей на сценарий для облака благосостояния')
        parser.add_argument('--out', help='Путь к CSV с результатами')

    def run(self, scenarios, m, coarse_step_db, random_profiles, out,
            **options):
        config = self.load_config(options)
        if scenarios < 0 or m < 1 or random_profiles < 0:
            raise SizeError('Нужно --scenarios >= 0, --m >= 1 '
                            'и --random-profiles >= 0.')
        grid = config.grid
        if coarse_step_db is not None:
            grid = grid.coarsen(coarse_step_db)
        config = dataclasses.replace(config, grid=grid)
        limit = settings.WBANSIM_MAX_PROFILES
        if len(grid) ** m > limit:
            raise SizeError(
                f'Полный перебор {len(grid)}^{m} профилей превышает '
                f'допустимые {limit}; задайте --coarse-step-db.')
        weights = config.resolve_weights()
        out_path = self.output_path(out, 'verify-ne.csv')
        out_path.parent.mkdir(parents=True, exist_ok=True)

        gaps, cloud, equal, stalled = [], [], 0, 0
        with open(out_path, 'w', newline='', encoding='utf-8') as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for scenario_id in range(scenarios):
                rng = RngStream(config.seed).substream(
                    'scenario', scenario_id).generator()
                scenario = sample_scenario(
                    m, rng, noise_dbm=config.noise_dbm, weights=weights,
                    pdr_params=config.pdr_params, grid=grid,
                    onbody=config.channel.onbody,
                    interbody=config.channel.interbody,
                    mobility=config.channel.mobility,
                )
                report = verify_social_optimality(scenario, limit)
                gaps.append(report.gap / abs(report.optimal_welfare))
                if random_profiles:
                    cloud.append(self.cloud_row(
                        scenario, report, random_profiles,
                        RngStream(config.seed).substream(
                            'scenario', scenario_id, 'cloud').generator()))
                equal += report.profiles_equal
                stalled += not report.converged
                writer.writerow({
                    'scenario_id': scenario_id,
                    'm': m,
                    'ne_welfare': repr(report.ne_welfare),
                    'opt_welfare': repr(report.optimal_welfare),
                    'gap': repr(report.gap),
                    'profiles_equal': int(report.profiles_equal),
                })

        summary_path = out_path.with_name(out_path.name + '.summary.txt')
        summary_path.write_text(
            self.summary(gaps, cloud, equal, stalled, m, grid),
            encoding='utf-8')
        self.stdout.write(self.style.SUCCESS(
            f'Проверено сценариев: {scenarios}; результаты в {out_path}'))

    @staticmethod
    def cloud_row(scenario, report, n_samples, rng):
        """(max, медиана, число выше оптимума) облака относительно NE."""
        welfare = random_profile_welfare(scenario, n_samples, rng)
        scale = abs(report.optimal_welfare)
        above = welfare > report.optimal_welfare + ZERO_GAP * scale
        return ((float(welfare.max()) - report.ne_welfare) / scale,
                (float(np.median(welfare)) - report.ne_welfare) / scale,
                int(above.sum()))

    @staticmethod
    def summary(gaps, cloud, equal, stalled, m, grid):
        lines = [f'scenarios = {len(gaps)}', f'm = {m}',
                 f'grid_levels = {len(grid)}']
        if gaps:
            gaps = np.asarray(gaps)
            lines += [
                f'max_relative_gap = {float(gaps.max())!r}',
                f'median_relative_gap = {float(np.median(gaps))!r}',
                f'fraction_zero_gap = '
                f'{float(np.mean(gaps <= ZERO_GAP)):.4f}',
                f'fraction_profiles_equal = {equal / len(gaps):.4f}',
                f'not_converged = {stalled}',
            ]
        if cloud:
            best, median, above = np.asarray(cloud).T
            # Положительные значения: случайный профиль лучше NE.
            lines += [
                f'cloud_max_relative_to_ne = {float(best.max())!r}',
                f'cloud_median_relative_to_ne = '
                f'{float(np.median(median))!r}',
                f'cloud_above_optimum = {int(above.sum())}',
            ]
        return '\n'.join(lines) + '\n'

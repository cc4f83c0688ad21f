import csv

from cli.commands import SimulationCommand
from pdr_model.fitting import fit_compressed_exponential, read_samples

FIELDS = ('a_c', 'b_c', 'a', 'b', 'rmse')


class Command(SimulationCommand):
    help = 'Подбирает параметры модели PDR по таблице `sinr_db,pdr`'
    uses_config = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('samples', help='Таблица измерений sinr_db,pdr')
        parser.add_argument('--out', help='Куда записать параметры')
        parser.add_argument(
            '--modulation', help='Подпись модуляции для журнала')

    def run(self, samples, out, modulation, **options):
        result = fit_compressed_exponential(
            read_samples(samples), modulation=modulation)
        out_path = self.output_path(out, 'pdr_fit.csv')
        out_path.parent.mkdir(parents=True, exist_ok=True)
        params = result.params
        with open(out_path, 'w', newline='', encoding='utf-8') as fh:
            writer = csv.DictWriter(fh, fieldnames=FIELDS)
            writer.writeheader()
            writer.writerow({
                'a_c': repr(params.a_c),
                'b_c': repr(params.b_c),
                'a': repr(params.a),
                'b': repr(params.b),
                'rmse': repr(result.rmse),
            })
        self.stdout.write(
            f'a_c={params.a_c:.6g} b_c={params.b_c:.6g} '
            f'a={params.a:.6g} b={params.b:.6g} rmse={result.rmse:.3g}')
        self.stdout.write(
            self.style.SUCCESS(f'Параметры записаны в {out_path}'))

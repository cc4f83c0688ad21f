from channel.trace import write_trace_csv
from cli.commands import SimulationCommand
from core.exceptions import ConfigurationError
from sim.campaign import game_trace


class Command(SimulationCommand):
    help = 'Пишет трассу каналов одной игры кампании в CSV'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--set', type=int, default=0, dest='set_index',
            help='Номер набора каналов')
        parser.add_argument(
            '--game', type=int, default=0, dest='game_index',
            help='Номер игры в наборе')
        parser.add_argument('--out', help='Путь к CSV трассы')

    def run(self, set_index, game_index, out, **options):
        config = self.load_config(options)
        if not 0 <= set_index < config.n_channel_sets:
            raise ConfigurationError(
                f'Набор {set_index} вне [0, {config.n_channel_sets}).')
        if not 0 <= game_index < config.games_per_set:
            raise ConfigurationError(
                f'Игра {game_index} вне [0, {config.games_per_set}).')
        trace = game_trace(config, set_index, game_index)
        out_path = self.output_path(
            out, f'trace_set{set_index}_game{game_index}.csv')
        out_path.parent.mkdir(parents=True, exist_ok=True)
        write_trace_csv(trace, out_path)
        self.stdout.write(self.style.SUCCESS(f'Трасса записана в {out_path}'))

"""Общая часть команд управления: флаги конфигурации и коды выхода."""
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import WbanSimError

from .config import load_run_config

logger = logging.getLogger(__name__)

USER_ERROR = 2
ENVIRONMENT_ERROR = 3


class SimulationCommand(BaseCommand):
    """Команда, которая превращает ошибки симулятора в коды выхода.

    Ошибки конфигурации и предметной области дают код 2,
    ошибки ввода-вывода дают код 3.
    """

    uses_config = True

    def add_arguments(self, parser):
        if self.uses_config:
            parser.add_argument(
                'config', nargs='?', default=None,
                help='Файл конфигурации запуска (см. команду init)')
            parser.add_argument('--seed', type=int, help='Переопределяет seed')
            parser.add_argument('--bans', type=int, help='Число BAN M')
            parser.add_argument(
                '--channels', type=int, help='Число каналов N_c')
            group = parser.add_mutually_exclusive_group()
            group.add_argument(
                '--fixed-m', type=int, dest='fixed_m',
                help='Фиксированное число активных BAN')
            group.add_argument(
                '--stochastic-m', action='store_true', dest='stochastic_m',
                help='Случайное число активных BAN')
        parser.add_argument(
            '--jobs', type=int, default=settings.WBANSIM_JOBS,
            help='Число рабочих потоков')

    def load_config(self, options):
        overrides = {
            'seed': options.get('seed'),
            'total_bans': options.get('bans'),
            'orthogonal_channels': options.get('channels'),
        }
        if options.get('fixed_m') is not None:
            overrides['m_mode'] = 'fixed_m'
            overrides['fixed_m'] = options['fixed_m']
        elif options.get('stochastic_m'):
            overrides['m_mode'] = 'stochastic'
        return load_run_config(options.get('config'), overrides)

    def output_path(self, value, default_name):
        if value:
            return Path(value)
        return Path(settings.WBANSIM_OUTPUT_DIR) / default_name

    def handle(self, *args, **options):
        if options['jobs'] < 1:
            raise CommandError('Число потоков --jobs должно быть >= 1.',
                               returncode=USER_ERROR)
        try:
            self.run(**options)
        except WbanSimError as error:
            raise CommandError(str(error), returncode=USER_ERROR)
        except OSError as error:
            raise CommandError(
                f'Ошибка ввода-вывода: {error}', returncode=ENVIRONMENT_ERROR)

    def run(self, **options):
        raise NotImplementedError

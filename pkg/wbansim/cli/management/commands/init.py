from pathlib import Path

from django.core.management.base import CommandError

from cli.commands import USER_ERROR, SimulationCommand
from cli.config import render_template

DEFAULT_NAME = 'wbansim.env'


class Command(SimulationCommand):
    help = 'Создаёт шаблон конфигурации запуска со значениями по умолчанию'
    uses_config = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            'path', nargs='?', default=DEFAULT_NAME,
            help='Куда записать шаблон')
        parser.add_argument(
            '--force', action='store_true',
            help='Перезаписать существующий файл')

    def run(self, path, force, **options):
        path = Path(path)
        if path.exists() and not force:
            raise CommandError(
                f'Файл {path} уже существует; используйте --force.',
                returncode=USER_ERROR)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_template(), encoding='utf-8')
        self.stdout.write(self.style.SUCCESS(f'Шаблон записан в {path}'))

import os
from pathlib import Path

from dotenv import load_dotenv, find_dotenv

load_dotenv(find_dotenv())

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Для локальной разработки
SECRET_KEY = os.environ.get('SECRET_KEY', 'wbansim-default-secret-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'


# Application definition

INSTALLED_APPS = [
    'core.apps.CoreConfig',
    'pdr_model.apps.PdrModelConfig',
    'channel.apps.ChannelConfig',
    'coexistence.apps.CoexistenceConfig',
    'controllers.apps.ControllersConfig',
    'equilibrium.apps.EquilibriumConfig',
    'sim.apps.SimConfig',
    'cli.apps.CliConfig',
]

# Симулятор не хранит данных в БД: результаты пишутся в CSV.
DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'ru-RU'

TIME_ZONE = 'Europe/Moscow'

USE_I18N = True

USE_TZ = True


# Logging

WBANSIM_LOG_LEVEL = os.environ.get('WBANSIM_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': WBANSIM_LOG_LEVEL,
            'propagate': False,
        }
        for app in (
            'core', 'pdr_model', 'channel', 'coexistence',
            'controllers', 'equilibrium', 'sim', 'cli',
        )
    },
}


# Simulation

WBANSIM_JOBS = int(os.environ.get('WBANSIM_JOBS', '1'))

# Верхняя граница числа профилей при полном переборе.
WBANSIM_MAX_PROFILES = int(os.environ.get('WBANSIM_MAX_PROFILES', 10**8))

WBANSIM_OUTPUT_DIR = Path(os.environ.get('WBANSIM_OUTPUT_DIR', 'results'))

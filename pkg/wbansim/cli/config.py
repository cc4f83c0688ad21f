"""Файл конфигурации запуска: разбор, проверка, шаблон.

Формат: плоский `ключ = значение` в синтаксисе dotenv; `#` начинает
комментарий. Приоритет: значения по умолчанию < файл < флаги команды.
"""
import io
import logging
from typing import Dict, Optional

from dotenv.parser import parse_stream

from channel.fading import OnBodyFadingParams
from channel.mobility import MobilityParams
from channel.trace import ChannelParams
from coexistence.sampling import CoexistenceParams
from controllers.policies import ControllerConfig
from controllers.utility import UtilityWeights
from core.exceptions import ConfigurationError
from sim.config import CampaignConfig

from .forms import AUTO, RunConfigForm

logger = logging.getLogger(__name__)

DOTTED_PREFIXES = ('grid', 'weights', 'onbody', 'mobility')
DEFAULT_SOURCE = 'значение по умолчанию'
OVERRIDE_SOURCE = 'параметр командной строки'


def field_for_key(key: str) -> str:
    return key.replace('.', '_')


def key_for_field(name: str) -> str:
    prefix, _, rest = name.partition('_')
    if prefix in DOTTED_PREFIXES and rest:
        return f'{prefix}.{rest}'
    return name


def _initial_value(field) -> str:
    if field.initial is None:
        return ''
    return str(field.initial)


def _line_number(binding) -> int:
    # Отметка dotenv стоит до пустых строк перед записью.
    text = binding.original.string
    skipped = text[:len(text) - len(text.lstrip())]
    return binding.original.line + skipped.count('\n')


def parse_config_text(text: str) -> Dict[str, tuple]:
    """Ключи файла -> (значение, номер строки)."""
    fields = RunConfigForm.base_fields
    values = {}
    for binding in parse_stream(io.StringIO(text)):
        line = _line_number(binding)
        if binding.error or (binding.key is not None
                             and binding.value is None):
            raise ConfigurationError(
                f'Строка {line}: ожидается `ключ = значение`.')
        if binding.key is None:
            continue
        name = field_for_key(binding.key)
        if name not in fields or key_for_field(name) != binding.key:
            raise ConfigurationError(
                f'Строка {line}: неизвестный ключ `{binding.key}`.')
        if name in values:
            raise ConfigurationError(
                f'Строка {line}: ключ `{binding.key}` уже задан '
                f'в строке {values[name][1]}.')
        values[name] = (binding.value, line)
    return values


def _error_message(form: RunConfigForm, sources: Dict[str, str]) -> str:
    lines = []
    for name, errors in form.errors.items():
        text = ' '.join(errors)
        if name == '__all__':
            lines.append(text)
        else:
            source = sources.get(name, DEFAULT_SOURCE)
            lines.append(f'{source}: `{key_for_field(name)}`: {text}')
    return '\n'.join(lines)


def validate_config(file_values: Dict[str, tuple],
                    overrides: Optional[Dict[str, object]] = None
                    ) -> RunConfigForm:
    fields = RunConfigForm.base_fields
    data = {name: _initial_value(field) for name, field in fields.items()}
    sources = {}
    for name, (value, line) in file_values.items():
        data[name] = value
        sources[name] = f'Строка {line}'
    for name, value in (overrides or {}).items():
        if value is None:
            continue
        data[name] = str(value)
        sources[name] = OVERRIDE_SOURCE
    form = RunConfigForm(data=data)
    if not form.is_valid():
        raise ConfigurationError(_error_message(form, sources))
    return form


def build_campaign_config(cleaned: dict) -> CampaignConfig:
    weights_d = cleaned['weights_d']
    weights = UtilityWeights(
        w=cleaned['weights_w'], v=cleaned['weights_v'],
        d=UtilityWeights.d if weights_d == AUTO else weights_d,
    )
    mobility = MobilityParams(
        area_m=cleaned['mobility_area_m'],
        speed_mean=cleaned['mobility_speed_mean'],
        speed_std=cleaned['mobility_speed_std'],
        turn_std_deg=cleaned['mobility_turn_std_deg'],
    )
    channel = ChannelParams(
        onbody=OnBodyFadingParams(correlation=cleaned['onbody_correlation']),
        mobility=mobility,
    )
    coexistence = CoexistenceParams(
        total_bans=cleaned['total_bans'],
        orthogonal_channels=cleaned['orthogonal_channels'],
        mode=cleaned['m_mode'],
        fixed_m=cleaned['fixed_m'],
        resample=cleaned['activity_resample'],
    )
    controller = ControllerConfig(
        kind=cleaned['controller'], constant_dbm=cleaned['constant_dbm'],
        relax=cleaned['relax'], gain_forgetting=cleaned['gain_forgetting'],
    )
    return CampaignConfig(
        n_channel_sets=cleaned['n_channel_sets'],
        games_per_set=cleaned['games_per_set'],
        stages_per_game=cleaned['stages_per_game'],
        stage_duration_s=cleaned['stage_duration_s'],
        coexistence=coexistence,
        modulation=cleaned['modulation'],
        controller=controller,
        grid=cleaned['grid'],
        weights=weights,
        auto_weight=weights_d == AUTO,
        calibration_margin_db=cleaned['calibration_margin_db'],
        noise_dbm=cleaned['noise_dbm'],
        target_pdr=cleaned['target_pdr'],
        channel=channel,
        packet_draws=cleaned['packet_draws'],
        record_games=cleaned['record_games'],
        seed=cleaned['seed'],
    )


def load_run_config(path=None, overrides=None) -> CampaignConfig:
    """Конфигурация кампании из файла (или значений по умолчанию)."""
    file_values = {}
    if path is not None:
        with open(path, encoding='utf-8') as fh:
            file_values = parse_config_text(fh.read())
        logger.debug('Прочитано %s ключей из %s', len(file_values), path)
    form = validate_config(file_values, overrides)
    return build_campaign_config(form.cleaned_data)


def render_template() -> str:
    """Шаблон со всеми ключами и их значениями по умолчанию."""
    lines = ['# Конфигурация запуска wbansim', '']
    for name, field in RunConfigForm.base_fields.items():
        lines.append(f'# {field.help_text}')
        lines.append(f'{key_for_field(name)} = {_initial_value(field)}')
    return '\n'.join(lines) + '\n'

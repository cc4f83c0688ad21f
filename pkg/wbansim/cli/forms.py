from django import forms

from coexistence.sampling import (
    FIXED_M, PER_GAME, PER_STAGE, STOCHASTIC,
)
from controllers.policies import ControllerKind
from core.exceptions import ConfigurationError
from core.grid import make_power_grid
from core.units import DBM_SANITY_MAX, DBM_SANITY_MIN
from pdr_model.model import MODULATIONS

AUTO = 'auto'


class RunConfigForm(forms.Form):
    """Проверка файла конфигурации запуска.

    Имена полей совпадают с ключами файла, точка в ключе заменена
    подчёркиванием (weights.w -> weights_w).
    """

    seed = forms.IntegerField(
        min_value=0, initial=0,
        help_text='Начальное значение всех потоков случайных чисел')
    n_channel_sets = forms.IntegerField(
        min_value=1, initial=20, help_text='Число наборов каналов')
    games_per_set = forms.IntegerField(
        min_value=1, initial=50,
        help_text='Игр на каждом наборе (свои замирания, общая геометрия)')
    stages_per_game = forms.IntegerField(
        min_value=1, initial=100, help_text='Стадий в одной игре')
    stage_duration_s = forms.FloatField(
        min_value=0.001, initial=0.05,
        help_text='Длительность стадии (суперкадра), с')
    total_bans = forms.IntegerField(
        min_value=1, initial=8, help_text='Число BAN M')
    orthogonal_channels = forms.IntegerField(
        initial=4, help_text='Число ортогональных каналов N_c (>= 2)')
    m_mode = forms.ChoiceField(
        choices=[(STOCHASTIC, STOCHASTIC), (FIXED_M, FIXED_M)],
        initial=STOCHASTIC,
        help_text='Случайное или фиксированное число активных BAN')
    fixed_m = forms.IntegerField(
        min_value=1, required=False,
        help_text='Число активных BAN в режиме fixed_m')
    activity_resample = forms.ChoiceField(
        choices=[(PER_GAME, PER_GAME), (PER_STAGE, PER_STAGE)],
        initial=PER_GAME,
        help_text='Как часто заново выбирать активные BAN')
    modulation = forms.ChoiceField(
        choices=[(name, name) for name in MODULATIONS], initial='BPSK',
        help_text='Модуляция, задающая модель PDR')
    controller = forms.ChoiceField(
        choices=[(kind.value, kind.value) for kind in ControllerKind],
        initial=ControllerKind.GAME.value,
        help_text='Правило выбора мощности: game, sah, sinr_balance '
                  'или constant')
    constant_dbm = forms.FloatField(
        required=False,
        help_text='Мощность для controller = constant, дБм')
    relax = forms.FloatField(
        initial=0.2, help_text='Шаг SINR-balancing, доля от 0 до 1')
    gain_forgetting = forms.FloatField(
        min_value=0.0, max_value=1.0, initial=0.0,
        help_text='Забывание в оценке канала игрой: 0 - среднее '
                  'по всем пакетам, 1 - только последний пакет')
    grid_min_dbm = forms.FloatField(
        min_value=DBM_SANITY_MIN, max_value=DBM_SANITY_MAX, initial=-30.0,
        help_text='Минимальная мощность сетки, дБм')
    grid_max_dbm = forms.FloatField(
        min_value=DBM_SANITY_MIN, max_value=DBM_SANITY_MAX, initial=0.0,
        help_text='Максимальная мощность сетки, дБм')
    grid_step_db = forms.FloatField(
        initial=1.0, help_text='Шаг сетки мощностей, дБ')
    weights_w = forms.FloatField(
        min_value=1.0, initial=1.0, help_text='Показатель w при мощности')
    weights_v = forms.FloatField(
        initial=4.0, help_text='Показатель v при PDR')
    weights_d = forms.CharField(
        initial=AUTO,
        help_text='Вес d: auto (калибровка) или положительное число')
    calibration_margin_db = forms.FloatField(
        min_value=0.0, initial=10.0,
        help_text='Запас на замирания при калибровке d и выборе '
                  'мощности игрой, дБ')
    noise_dbm = forms.FloatField(
        min_value=-200.0, max_value=0.0, initial=-100.0,
        help_text='Мощность шума на хабе, дБм')
    target_pdr = forms.FloatField(
        initial=0.9, help_text='Целевой PDR')
    onbody_correlation = forms.FloatField(
        min_value=0.0, initial=0.0,
        help_text='Корреляция замираний на теле между стадиями')
    mobility_area_m = forms.FloatField(
        initial=6.0, help_text='Сторона площадки, м')
    mobility_speed_mean = forms.FloatField(
        initial=3.0, help_text='Средняя скорость ходьбы, м/с')
    mobility_speed_std = forms.FloatField(
        min_value=0.0, initial=0.2,
        help_text='Стандартное отклонение скорости, м/с')
    mobility_turn_std_deg = forms.FloatField(
        min_value=0.0, initial=1.0,
        help_text='Стандартное отклонение поворота за 10 мс, градусы')
    packet_draws = forms.BooleanField(
        required=False, initial=False,
        help_text='Разыгрывать доставку пакетов (не входит в метрики)')
    record_games = forms.BooleanField(
        required=False, initial=False,
        help_text='Сохранять сырые трассы игр в games.csv')

    def clean_orthogonal_channels(self):
        value = self.cleaned_data['orthogonal_channels']
        if value < 2:
            raise forms.ValidationError(
                'Нужно N_c >= 2: вероятность перекрытия 2/N_c '
                'не может превышать 1.')
        return value

    def clean_relax(self):
        value = self.cleaned_data['relax']
        if not 0 < value <= 1:
            raise forms.ValidationError('relax должен лежать в (0, 1].')
        return value

    def clean_weights_v(self):
        value = self.cleaned_data['weights_v']
        if not value > 0:
            raise forms.ValidationError('Показатель v должен быть > 0.')
        return value

    def clean_weights_d(self):
        value = self.cleaned_data['weights_d'].strip().lower()
        if value == AUTO:
            return AUTO
        try:
            d = float(value)
        except ValueError:
            raise forms.ValidationError(
                'Вес d: ожидается auto или положительное число.')
        if not d > 0:
            raise forms.ValidationError('Вес d должен быть > 0.')
        return d

    def clean_target_pdr(self):
        value = self.cleaned_data['target_pdr']
        if not 0 < value < 1:
            raise forms.ValidationError('Целевой PDR должен лежать в (0, 1).')
        return value

    def clean_onbody_correlation(self):
        value = self.cleaned_data['onbody_correlation']
        if not value < 1:
            raise forms.ValidationError('Корреляция должна быть < 1.')
        return value

    def clean(self):
        cleaned_data = super().clean()
        bounds = [cleaned_data.get(name) for name in
                  ('grid_min_dbm', 'grid_max_dbm', 'grid_step_db')]
        grid = None
        if None not in bounds:
            try:
                grid = make_power_grid(*bounds)
            except ConfigurationError as error:
                self.add_error('grid_step_db', str(error))
            else:
                cleaned_data['grid'] = grid
        total = cleaned_data.get('total_bans')
        fixed_m = cleaned_data.get('fixed_m')
        if cleaned_data.get('m_mode') == FIXED_M and total is not None:
            if fixed_m is None or not 1 <= fixed_m <= total:
                self.add_error(
                    'fixed_m',
                    f'В режиме fixed_m нужно 1 <= m <= M = {total}.')
        if cleaned_data.get('controller') == ControllerKind.CONSTANT.value:
            level = cleaned_data.get('constant_dbm')
            if level is None:
                self.add_error(
                    'constant_dbm',
                    'Для controller = constant нужна мощность constant_dbm.')
            elif grid is not None and not grid.contains(level):
                self.add_error(
                    'constant_dbm',
                    f'Мощность {level} дБм не лежит на сетке '
                    f'[{grid.min}, {grid.max}] дБм.')
        speed = cleaned_data.get('mobility_speed_mean')
        if speed is not None and not speed > 0.5:
            self.add_error('mobility_speed_mean',
                           'Средняя скорость должна быть > 0.5 м/с.')
        area = cleaned_data.get('mobility_area_m')
        if area is not None and not area > 0:
            self.add_error('mobility_area_m',
                           'Сторона площадки должна быть > 0.')
        return cleaned_data

from django.apps import AppConfig


class PdrModelConfig(AppConfig):
    name = 'pdr_model'
    verbose_name = 'Модель PDR от SINR'

from django.apps import AppConfig


class ChannelConfig(AppConfig):
    name = 'channel'
    verbose_name = 'Модели каналов на теле и между телами'

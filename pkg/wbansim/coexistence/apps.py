from django.apps import AppConfig


class CoexistenceConfig(AppConfig):
    name = 'coexistence'
    verbose_name = 'Сосуществование BAN при несинхронном TDMA'

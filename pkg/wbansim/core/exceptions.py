class WbanSimError(Exception):
    """Базовое исключение симулятора."""


class DomainError(WbanSimError, ValueError):
    """Аргумент вне области определения функции."""


class ConfigurationError(WbanSimError):
    """Недопустимая конфигурация модели или кампании."""


class FitError(WbanSimError):
    """Подбор параметров модели PDR не удался."""


class CalibrationError(WbanSimError):
    """Не найден вес d, обеспечивающий целевой PDR."""


class SizeError(WbanSimError):
    """Полный перебор превышает допустимый объём работы."""

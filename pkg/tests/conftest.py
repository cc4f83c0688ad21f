from typing import Iterable

import numpy as np
import pytest
from django.apps import apps

SIM_APPS = (
    "core", "pdr_model", "channel", "coexistence", "controllers",
    "equilibrium", "sim", "cli",
)


class SafeImportFromContextManager:
    def __init__(
            self,
            import_path: str,
            import_names: Iterable[str],
            import_of: str = "",
    ):
        self._import_path: str = import_path
        self._import_names: Iterable[str] = import_names
        self._import_of = f"{import_of} " if import_of else ""

    def __enter__(self):
        pass

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is ImportError:
            disp_imp_names = "`, ".join(self._import_names)
            raise AssertionError(
                f"Убедитесь, что в файле `{self._import_path}` нет ошибок. "
                f"При импорте из него {self._import_of}"
                f"`{disp_imp_names}` возникла ошибка:\n"
                f"{exc_type.__name__}: {exc_value}"
            )


registered_apps = set(app.name for app in apps.get_app_configs())
for need_app_name in SIM_APPS:
    if need_app_name not in registered_apps:
        raise AssertionError(
            f"Убедитесь, что зарегистрировано приложение {need_app_name}"
        )

with SafeImportFromContextManager(
        "sim/campaign.py", ["run_campaign"], import_of="кампании"
):
    from sim.campaign import run_campaign  # noqa:F401

pytest_plugins = [
    "fixtures.models",
    "fixtures.scenarios",
    "fixtures.campaigns",
]


@pytest.fixture(autouse=True)
def results_dir(settings, tmp_path):
    settings.WBANSIM_OUTPUT_DIR = tmp_path / "results"
    return settings.WBANSIM_OUTPUT_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def count_peaks(values) -> int:
    """Число строгих локальных максимумов ряда без учёта плато."""
    steps = np.sign(np.diff(np.asarray(values, dtype=float)))
    steps = steps[steps != 0]
    return int(np.count_nonzero((steps[:-1] > 0) & (steps[1:] < 0)))

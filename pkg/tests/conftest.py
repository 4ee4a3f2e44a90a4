import pytest

from risingbandits import verify


@pytest.fixture(scope="session")
def concave_battery():
    """Shared 1000-instance battery; built once because three suites reuse it."""
    return verify.concave_battery()

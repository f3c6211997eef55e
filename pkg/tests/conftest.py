import warnings

import pytest


@pytest.fixture(autouse=True)
def _quiet_special_point_warning():
    # the z1 ~ 0 significance warning is expected noise in tests that sit
    # exactly at the special amplitude
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="z1 within")
        yield

import math

import pytest

from psispec import psi_map


@pytest.fixture(params=["identity", "log", "exp", "power", "sin", "tan", "quadratic"])
def any_map(request):
    return psi_map.make_map(request.param)


@pytest.fixture
def log_map():
    return psi_map.log(1.0, math.e)

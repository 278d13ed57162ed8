import math

import numpy as np
import pytest
import scipy.special as sc
from numpy.testing import assert_allclose

from fockops.special import i0e, log_i0


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.5, 1.0, 10.0, 29.99, 30.0, 30.01, 100.0, 1e4, 1e8])
def test_i0e_matches_reference(x):
    assert i0e(x) == pytest.approx(sc.i0e(x), rel=5e-15)


def test_i0e_vectorized_across_branch():
    x = np.geomspace(1e-6, 1e6, 500)
    assert_allclose(i0e(x), sc.i0e(x), rtol=5e-15)


def test_i0e_preserves_shape():
    x = np.linspace(0, 50, 12).reshape(3, 4)
    assert i0e(x).shape == (3, 4)


def test_i0e_large_argument_asymptotic():
    x = 1e6
    assert i0e(x) * math.sqrt(2 * math.pi * x) == pytest.approx(1 + 1 / (8 * x), rel=1e-12)


def test_log_i0_no_overflow():
    assert log_i0(1000.0) == pytest.approx(1000.0 + math.log(sc.i0e(1000.0)), rel=1e-15)
    assert log_i0(0.0) == 0.0


@pytest.mark.parametrize("x", [0.3, 12.0, 45.0])
def test_i0e_is_even(x):
    assert i0e(-x) == i0e(x)

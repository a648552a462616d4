import math
from fractions import Fraction

import numpy as np
import pytest

from ncsurf.maps import profile_builtin
from ncsurf.rep import rep_spin, rep_surface
from ncsurf.spectra import (
    BOUNDED,
    LOG_DIVERGENT,
    POWER_DIVERGENT,
    ModeSequence,
    Tridiag,
    cn_sequence,
    crystal_matrix,
    eigenvalues,
    exponent_estimate,
    tail_partial_sums,
)


def test_eigenvalues_of_known_matrix():
    # the path graph: 2 cos(pi j/(n+1))
    n = 30
    t = Tridiag(np.zeros(n), np.ones(n - 1))
    expected = np.sort(2 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))
    assert np.max(np.abs(eigenvalues(t) - expected)) < 1e-12


def test_eigenvalues_match_dense_oracle(rng):
    n = 40
    d = np.array([rng.uniform(-3, 3) for _ in range(n)])
    e = np.array([rng.uniform(-1, 1) for _ in range(n - 1)])
    t = Tridiag(d, e)
    assert np.max(np.abs(eigenvalues(t) - np.linalg.eigvalsh(t.dense()))) < 1e-11


def test_tridiag_shape_checked():
    with pytest.raises(ValueError):
        Tridiag(np.zeros(3), np.zeros(3))


@pytest.mark.parametrize("k", [Fraction(1, 2), 3, Fraction(15, 2), 20])
def test_crystal_spectrum(k):
    rep = rep_spin(k, {"alpha_sq": 1, "eps": 0.5})
    js = np.array([float(Fraction(t, 2)) for t in range(-int(2 * k), int(2 * k) + 1, 2)])
    assert np.max(np.abs(eigenvalues(crystal_matrix(rep)) - math.sqrt(5) * 0.5 * js)) < 1e-10


def test_crystal_needs_unitary_rep():
    with pytest.raises(ValueError):
        crystal_matrix(rep_spin(2, {"alpha_sq": -1, "eps": 1}))


def test_crystal_on_surface_rep():
    s = profile_builtin("sphere-family", {"alpha_sq": 1, "R_sq": 12, "eps": 1})
    vals = eigenvalues(crystal_matrix(rep_surface(s)))
    assert np.max(np.abs(vals - math.sqrt(5) * np.arange(-3, 4))) < 1e-10


def test_recursion_satisfied():
    seq = cn_sequence(2, 0.3, 0.5, 1.0, 2000)
    assert seq.recursion_defect() < 1e-12
    assert seq.n[0] == 2 and seq.values()[0] == 1


def test_scale_free_fit_on_synthetic_sequence():
    n = np.arange(1, 20001)
    a = complex(-0.5, 0.3)
    c = 3.0 * (1j ** n) * n.astype(float) ** a
    seq = ModeSequence(0, 0.0, 1.0, 1.0, n, c, np.zeros(len(n)))
    fit = exponent_estimate(seq)
    assert abs(fit.a - a) < 1e-9
    assert abs(fit.drift.imag - math.pi / 2) < 1e-9


def test_fitted_exponent_matches_transfer_matrix_asymptotics():
    # gamma_n ~ eps n / 8, so c_{n+1} + c_{n-1} ~ -(8 i mu / (eps n)) c_n: a = -1/2 +- 4 mu / eps
    seq = cn_sequence(0, 0.7, 1.0, 1.0, 100000)
    fit = exponent_estimate(seq)
    assert fit.a.real == pytest.approx(-0.5 + 4 * 0.7, abs=0.01)
    assert abs(fit.a.imag) < 0.01


def test_tail_classes():
    n = np.arange(1, 100001)
    for a, expected in [(-1.0, BOUNDED), (-0.5, LOG_DIVERGENT), (0.0, POWER_DIVERGENT)]:
        seq = ModeSequence(0, 0.0, 1.0, 1.0, n, n.astype(float) ** a + 0j, np.zeros(len(n)))
        assert tail_partial_sums(seq).classification == expected


def test_imaginary_lambda_tail_is_not_bounded():
    seq = cn_sequence(0, 0.2j, 1.0, 1.0, 100000)
    assert tail_partial_sums(seq).classification == LOG_DIVERGENT


def test_bad_arguments():
    with pytest.raises(ValueError):
        cn_sequence(3, 0.1, 1.0, 1.0, 3)
    with pytest.raises(ValueError):
        cn_sequence(0, 0.1, 1.0, -1.0, 10)

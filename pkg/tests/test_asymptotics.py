#!/usr/bin/env python3
"""
Large-label checks: asymptotic formulas against exact values
"""

import math
import os
import sys
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_legendre

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from asymptotics import (
    exact_series,
    mean_square_ratio,
    minkowskian_decay_fit,
    phase_mismatch,
    pr_original_estimate,
    pr_theorem_estimate,
    rms_window_ratios,
    rotation_asymptotic,
    rotation_exact,
    rotation_matrix,
    rotation_rep_oracle,
    rotation_sample,
    section_norm_asymptote,
    section_norm_exact,
    section_norm_quadrature,
    series_compare,
    wigner_mean_square,
)
from errors import BadInput, CapExceeded, DegenerateAngle, FlatUnsupported, NotEuclidean
from recoupling import scale_labels, sixj_exact
from regge import relabel, tetrahedral_relabelings

REGULAR = (2, 2, 2, 2, 2, 2)
MINKOWSKIAN = (10, 6, 6, 10, 6, 6)
ANGLES = [math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3]


def test_estimate_preconditions():
    with pytest.raises(FlatUnsupported):
        pr_theorem_estimate((3, 5, 4, 3, 5, 4), 1)
    with pytest.raises(NotEuclidean):
        pr_theorem_estimate(MINKOWSKIAN, 1)
    with pytest.raises(NotEuclidean):
        pr_original_estimate(MINKOWSKIAN, 1)


def test_estimates_reject_nonpositive_scale():
    for estimate in (pr_theorem_estimate, pr_original_estimate, wigner_mean_square, phase_mismatch):
        for k in (0, -3):
            with pytest.raises(BadInput):
                estimate(REGULAR, k)


def test_original_estimate_uses_shifted_edges():
    edge = 21
    vol = edge ** 3 / (6 * math.sqrt(2))
    angle = math.pi - math.acos(1 / 3)
    expected = math.sqrt(2 / (3 * math.pi * vol)) * math.cos(6 * edge * angle / 2 + math.pi / 4)
    assert pr_original_estimate(REGULAR, 10) == pytest.approx(expected, rel=1e-9, abs=1e-15)


def test_series_rows():
    samples = series_compare(REGULAR, 1, 5)
    assert [s.k for s in samples] == [1, 2, 3, 4, 5]
    assert samples[0].exact == pytest.approx(1 / 6, rel=1e-15)
    for sample in samples:
        assert sample.exact == sixj_exact(scale_labels(REGULAR, sample.k)).to_float()
        assert sample.abs_err_theorem == pytest.approx(abs(sample.exact - sample.pr_theorem))


def test_series_minkowskian_has_no_estimates():
    for sample in series_compare(MINKOWSKIAN, 1, 3):
        assert sample.pr_theorem is None
        assert sample.pr_original is None
        assert sample.abs_err_theorem is None


def test_series_bad_range():
    with pytest.raises(BadInput):
        series_compare(REGULAR, 5, 4)
    with pytest.raises(BadInput):
        series_compare(REGULAR, 0, 4)


def test_series_worker_pool_is_deterministic():
    assert series_compare(REGULAR, 1, 8, workers=2) == series_compare(REGULAR, 1, 8, workers=1)
    assert exact_series(REGULAR, [3, 1, 2], workers=2) == exact_series(REGULAR, [1, 2, 3], workers=1)


def test_rms_ratio_on_regular_labels():
    ratios = rms_window_ratios(series_compare(REGULAR, 30, 100), width=20)
    assert len(ratios) == 52
    for ratio in ratios:
        assert 0.95 <= ratio <= 1.05


def test_mean_square_heuristic():
    assert wigner_mean_square(REGULAR, 10) == pytest.approx(wigner_mean_square(REGULAR, 1) / 1000)
    assert 0.90 <= mean_square_ratio(REGULAR, 40, 100) <= 1.10


def test_minkowskian_decay():
    fit = minkowskian_decay_fit(MINKOWSKIAN, 2, 16)
    assert fit.slope < 0
    assert fit.r_squared >= 0.9
    assert 0.0 <= fit.power <= 5.0
    assert fit.exponential_wins


def test_shifted_estimate_converges_to_unshifted():
    scaled = [abs(pr_theorem_estimate(REGULAR, k) - pr_original_estimate(REGULAR, k)) * k ** 1.5 for k in range(10, 101)]
    assert max(scaled[:31]) > max(scaled[-31:])
    assert phase_mismatch(REGULAR, 50) == pytest.approx(0.0, abs=1e-9)


def test_estimate_invariant_under_relabelings():
    labels = (4, 6, 8, 10, 6, 8)
    reference = pr_theorem_estimate(labels, 7)
    for perm in tetrahedral_relabelings():
        assert pr_theorem_estimate(relabel(labels, perm), 7) == pytest.approx(reference, rel=1e-12)


def test_phase_mismatch_wraps():
    value = phase_mismatch((4, 6, 8, 10, 6, 8), 20)
    assert -math.pi < value <= math.pi


@pytest.mark.parametrize("beta", ANGLES)
def test_rotation_asymptotic_accuracy(beta):
    k = 50
    envelope = math.sqrt(2 / (k * math.pi * math.sin(beta)))
    assert abs(rotation_exact(k, beta) - rotation_asymptotic(k, beta)) <= 0.05 * envelope


@pytest.mark.parametrize("beta", [0.3, 1.0, 2.0, 2.8, math.pi / 2])
def test_rotation_oracle(beta):
    for k in range(0, 21):
        assert rotation_exact(k, beta) == pytest.approx(rotation_rep_oracle(k, beta), abs=1e-9)
        assert rotation_exact(k, beta) == pytest.approx(eval_legendre(k, math.cos(beta)), abs=1e-12)


def test_rotation_sample():
    sample = rotation_sample(10, 1.0)
    assert sample.exact == rotation_exact(10, 1.0)
    assert sample.asymptotic == rotation_asymptotic(10, 1.0)
    assert sample.oracle == pytest.approx(sample.exact, abs=1e-9)
    assert abs(sample.exact) <= 1.0
    assert rotation_sample(50, 1.0).oracle is None


def test_rotation_matrix_is_orthogonal():
    matrix = rotation_matrix(5, 0.7)
    assert np.allclose(matrix @ matrix.T, np.eye(11), atol=1e-12)


def test_rotation_edge_cases():
    assert rotation_exact(0, 1.0) == 1.0
    assert rotation_exact(3, 0.0) == pytest.approx(1.0)
    with pytest.raises(DegenerateAngle):
        rotation_asymptotic(10, 0.0)
    with pytest.raises(DegenerateAngle):
        rotation_asymptotic(10, math.pi)
    with pytest.raises(CapExceeded):
        rotation_rep_oracle(31, 1.0)


def test_rotation_phase_offset():
    displayed = rotation_asymptotic(50, 1.0, phase_offset=math.pi / 4)
    assert displayed == pytest.approx(
        math.sqrt(2 / (50 * math.pi * math.sin(1.0))) * math.cos(101 * 1.0 / 2 + math.pi / 4)
    )


def test_section_norm_exact():
    assert section_norm_exact(1) == Fraction(1, 3)
    assert section_norm_exact(2) == Fraction(2, 15)
    with pytest.raises(BadInput):
        section_norm_exact(0)


@pytest.mark.parametrize("k", [1, 2, 5, 10, 50, 100])
def test_section_norm_quadrature(k):
    exact = float(section_norm_exact(k))
    assert section_norm_quadrature(k) == pytest.approx(exact, rel=1e-8)
    assert section_norm_quadrature(k, half_range=True) == pytest.approx(exact, rel=1e-8)


def test_section_norm_asymptote():
    ratio = float(section_norm_exact(200)) / section_norm_asymptote(200)
    assert ratio == pytest.approx(1.0, rel=0.01)
    with pytest.raises(CapExceeded):
        section_norm_quadrature(501)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

"""
Large-label behaviour: the tetrahedral asymptotic formula, its shifted-edge
variant, the mean-square heuristic, the zero-weight rotation matrix element
and the invariant-section norm.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from multiprocessing import Pool
from typing import List, Optional

import numpy as np
from scipy import integrate
from scipy.special import comb

import config
from errors import BadInput, CapExceeded, DegenerateAngle, FaceViolation, FlatUnsupported, NotEuclidean
from geometry import EdgeLengths, TetClass, classify, exterior_dihedral_angles, volume
from recoupling import LabelSextuple, scale_labels, sixj_exact

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AsymptoticSample:
    k: int
    exact: float
    pr_theorem: Optional[float]
    pr_original: Optional[float]
    abs_err_theorem: Optional[float]
    abs_err_original: Optional[float]


@dataclass(frozen=True)
class RotationSample:
    k: int
    beta: float
    exact: float
    asymptotic: float
    oracle: Optional[float] = None


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    rss_exponential: float
    power: float
    rss_power: float
    samples: int

    @property
    def exponential_wins(self):
        return self.rss_exponential < self.rss_power


def _euclidean_geometry(lengths):
    tet_class = classify(lengths)
    if tet_class is TetClass.FLAT:
        raise FlatUnsupported(f"No asymptotic formula covers the flat tetrahedron {lengths.values}")
    if tet_class is TetClass.MINKOWSKIAN:
        raise NotEuclidean(f"Tetrahedron {lengths.values} is Minkowskian")
    return volume(lengths), exterior_dihedral_angles(lengths)


def _require_scale(k):
    if k < 1:
        raise BadInput(f"Scale k must be at least 1, got {k}")


def _phase(labels, k, angles):
    return float(sum((k * l + 1) * theta / 2 for l, theta in zip(labels, angles))) + math.pi / 4


def pr_theorem_estimate(labels, k):
    _require_scale(k)
    labels = LabelSextuple(*labels)
    vol, angles = _euclidean_geometry(EdgeLengths.from_labels(labels))
    return math.sqrt(2 / (3 * math.pi * vol * k ** 3)) * math.cos(_phase(labels, k, angles))


def _shifted_lengths(labels, k):
    try:
        return EdgeLengths.from_labels(labels).scaled(k).shifted(1)
    except FaceViolation as exc:
        raise NotEuclidean(f"Shifted tetrahedron for {labels} at k={k} has an invalid face") from exc


def pr_original_estimate(labels, k):
    _require_scale(k)
    labels = LabelSextuple(*labels)
    vol, angles = _euclidean_geometry(_shifted_lengths(labels, k))
    return math.sqrt(2 / (3 * math.pi * vol)) * math.cos(_phase(labels, k, angles))


def wigner_mean_square(labels, k):
    _require_scale(k)
    vol, _ = _euclidean_geometry(EdgeLengths.from_labels(labels))
    return 1 / (3 * math.pi * vol * k ** 3)


def phase_mismatch(labels, k):
    """Sum of (k l + 1)(theta'_l - theta_l), wrapped into (-pi, pi]"""
    _require_scale(k)
    labels = LabelSextuple(*labels)
    _, angles = _euclidean_geometry(EdgeLengths.from_labels(labels))
    _, shifted = _euclidean_geometry(_shifted_lengths(labels, k))
    raw = float(sum((k * l + 1) * (t1 - t0) for l, t0, t1 in zip(labels, angles, shifted)))
    wrapped = math.remainder(raw, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _exact_at(labels, k):
    return k, sixj_exact(scale_labels(labels, k))


def exact_series(labels, ks, workers=None):
    """Exact 6j values at each scale, fanned out over a process pool when workers > 1"""
    labels = LabelSextuple(*labels)
    ks = list(ks)
    if workers is None:
        workers = config.WORKERS
    if workers > 1 and len(ks) > 1:
        with Pool(workers) as pool:
            pairs = pool.map(partial(_exact_at, labels), ks)
    else:
        pairs = [_exact_at(labels, k) for k in ks]
    return dict(pairs)


def _optional(estimate, labels, k):
    try:
        return estimate(labels, k)
    except NotEuclidean:
        return None


def series_compare(labels, k_min, k_max, workers=None, exact_values=None) -> List[AsymptoticSample]:
    if k_min < 1 or k_max < k_min:
        raise BadInput(f"Invalid scale range [{k_min}, {k_max}]")
    labels = LabelSextuple(*labels)
    ks = range(k_min, k_max + 1)
    known = dict(exact_values or {})
    missing = [k for k in ks if k not in known]
    if missing:
        known.update(exact_series(labels, missing, workers))

    samples = []
    for k in ks:
        exact = known[k].to_float()
        theorem = _optional(pr_theorem_estimate, labels, k)
        original = _optional(pr_original_estimate, labels, k)
        samples.append(
            AsymptoticSample(
                k=k,
                exact=exact,
                pr_theorem=theorem,
                pr_original=original,
                abs_err_theorem=None if theorem is None else abs(exact - theorem),
                abs_err_original=None if original is None else abs(exact - original),
            )
        )
    logger.info(f"Compared {len(samples)} scales for {labels}")
    return samples


def rms_window_ratios(samples, width=20):
    """RMS(exact) / RMS(pr_theorem) over each run of ``width`` consecutive samples"""
    usable = [s for s in samples if s.pr_theorem is not None]
    ratios = []
    for start in range(len(usable) - width + 1):
        window = usable[start:start + width]
        exact = np.array([s.exact for s in window])
        estimate = np.array([s.pr_theorem for s in window])
        ratios.append(float(np.sqrt(np.mean(exact ** 2)) / np.sqrt(np.mean(estimate ** 2))))
    return ratios


def mean_square_ratio(labels, k_min, k_max, exact_values=None, workers=None):
    """Mean over k of exact^2 * 3 pi V k^3; the mean-square heuristic predicts 1"""
    labels = LabelSextuple(*labels)
    vol, _ = _euclidean_geometry(EdgeLengths.from_labels(labels))
    ks = range(k_min, k_max + 1)
    known = dict(exact_values or {})
    known.update(exact_series(labels, [k for k in ks if k not in known], workers))
    terms = [float(known[k].radicand) * 3 * math.pi * vol * k ** 3 for k in ks]
    return float(np.mean(terms))


def minkowskian_decay_fit(labels, k_min, k_max, max_power=5.0, workers=None):
    """Least-squares fits of log|6j| against k (exponential) and log k (power law)"""
    values = exact_series(labels, range(k_min, k_max + 1), workers)
    ks, logs = [], []
    for k, value in sorted(values.items()):
        if value.is_zero:
            # accidental zeros carry no decay information
            continue
        ks.append(k)
        logs.append(math.log(abs(value.to_float())))
    if len(ks) < 3:
        raise BadInput(f"Too few nonzero values to fit decay for {labels}")
    k_arr = np.array(ks, dtype=float)
    y = np.array(logs)

    slope, intercept = np.polyfit(k_arr, y, 1)
    residual = y - (slope * k_arr + intercept)
    rss_exp = float(np.sum(residual ** 2))
    tss = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - rss_exp / tss if tss > 0 else 1.0

    log_k = np.log(k_arr)
    power = float(np.clip(-np.polyfit(log_k, y, 1)[0], 0.0, max_power))
    offset = float(np.mean(y + power * log_k))
    rss_pow = float(np.sum((y - offset + power * log_k) ** 2))

    return DecayFit(float(slope), float(intercept), r_squared, rss_exp, power, rss_pow, len(ks))


def rotation_exact(k, beta):
    """Zero-weight diagonal element of rotation by beta in the (2k+1)-dimensional irrep"""
    if k < 0:
        raise BadInput(f"k must be a natural number, got {k}")
    x = math.cos(beta)
    previous, current = 1.0, x
    if k == 0:
        return previous
    for n in range(1, k):
        previous, current = current, ((2 * n + 1) * x * current - n * previous) / (n + 1)
    return current


def rotation_matrix(k, beta):
    """Matrix of the rotation on degree-2k binary forms in the orthonormal weight basis"""
    cap = config.ENGINE["rotation_oracle_cap"]
    if k > cap:
        raise CapExceeded(f"Representation oracle is capped at k={cap}, got {k}")
    n = 2 * k
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    norms = np.array([comb(n, m, exact=True) for m in range(n + 1)], dtype=float)
    matrix = np.zeros((n + 1, n + 1))
    for m in range(n + 1):
        # image of Z^(n-m) W^m under Z -> cZ + sW, W -> -sZ + cW, as coefficients of W^l
        first = np.array([comb(n - m, j, exact=True) * c ** (n - m - j) * s ** j for j in range(n - m + 1)])
        second = np.array([comb(m, j, exact=True) * (-s) ** (m - j) * c ** j for j in range(m + 1)])
        matrix[:, m] = np.convolve(first, second) * np.sqrt(norms[m] / norms)
    return matrix


def rotation_rep_oracle(k, beta):
    return float(rotation_matrix(k, beta)[k, k])


def rotation_asymptotic(k, beta, phase_offset=-math.pi / 4):
    if k < 1:
        raise BadInput(f"k must be at least 1, got {k}")
    if not 0 < beta < math.pi:
        raise DegenerateAngle(f"Rotation angle must lie strictly between 0 and pi, got {beta}")
    return math.sqrt(2 / (math.pi * k * math.sin(beta))) * math.cos((2 * k + 1) * beta / 2 + phase_offset)


def rotation_sample(k, beta):
    """Exact, asymptotic and, below the oracle cap, representation-matrix values at one angle"""
    oracle = rotation_rep_oracle(k, beta) if k <= config.ENGINE["rotation_oracle_cap"] else None
    return RotationSample(k, beta, rotation_exact(k, beta), rotation_asymptotic(k, beta), oracle)


def section_norm_exact(k):
    if k < 1:
        raise BadInput(f"k must be at least 1, got {k}")
    return Fraction(2 * k * math.factorial(k) ** 2, math.factorial(2 * k + 1))


def section_norm_quadrature(k, half_range=False):
    cap = config.ENGINE["quadrature_cap"]
    if k > cap:
        raise CapExceeded(f"Quadrature is capped at k={cap}, got {k}")
    if k < 1:
        raise BadInput(f"k must be at least 1, got {k}")
    options = dict(
        epsabs=0.0,
        epsrel=config.TOLERANCES["quadrature_relative"],
        limit=config.ENGINE["quadrature_limit"],
    )
    # the 4^-k factor is applied after integrating (1 - z^2)^k
    if half_range:
        integral, _ = integrate.quad(lambda z: (1 - z * z) ** k, 0.0, 1.0, **options)
        integral *= 2
    else:
        integral, _ = integrate.quad(lambda z: (1 - z * z) ** k, -1.0, 1.0, points=[0.0], **options)
    return math.ldexp(k * integral, -2 * k)


def section_norm_asymptote(k):
    return math.ldexp(math.sqrt(math.pi * k), -2 * k)

"""
Metric tetrahedra from six edge lengths.

Vertices are V0 = 0, V1 = A, V2 = A + C, V3 = A + E, so that
a = V0V1, b = V0V2, c = V1V2, d = V2V3, e = V1V3, f = V0V3 and the faces
(a,b,c), (c,d,e), (e,f,a), (f,d,b) are opposite V3, V0, V2, V1.
"""

import logging
import math
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple, Optional, Tuple

import numpy as np
import sympy

import config
from errors import BadInput, FaceViolation, NotEuclidean, StepLeavesEuclideanRegion
from recoupling import signed_sqrt_to_float

logger = logging.getLogger(__name__)

FACE_VERTICES = {
    ("a", "b", "c"): (0, 1, 2),
    ("c", "d", "e"): (1, 2, 3),
    ("e", "f", "a"): (0, 1, 3),
    ("f", "d", "b"): (0, 2, 3),
}

EDGE_FACES = {
    edge: tuple(face for face in config.FACES if edge in face) for edge in config.EDGE_NAMES
}


class TetClass(str, Enum):
    EUCLIDEAN = "euclidean"
    FLAT = "flat"
    MINKOWSKIAN = "minkowskian"


def _coerce(value):
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return float(value)


@dataclass(frozen=True)
class EdgeLengths:
    a: object
    b: object
    c: object
    d: object
    e: object
    f: object

    def __post_init__(self):
        for field in fields(self):
            value = _coerce(getattr(self, field.name))
            if value < 0 or value != value:
                raise BadInput(f"Edge {field.name} must be a nonnegative length, got {value}")
            object.__setattr__(self, field.name, value)
        for face in config.FACES:
            x, y, z = (getattr(self, name) for name in face)
            slack = 0 if self.exact else 1e-12 * (x + y + z)
            if x > y + z + slack or y > z + x + slack or z > x + y + slack:
                raise FaceViolation(f"Face {''.join(face)} = ({x}, {y}, {z}) violates the triangle inequality")

    @classmethod
    def from_labels(cls, labels):
        return cls(*(Fraction(int(x)) for x in labels))

    @classmethod
    def parse(cls, text):
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 6:
            raise BadInput(f"Expected six comma-separated lengths, got {text!r}")
        try:
            return cls(*(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise BadInput(f"Lengths must be nonnegative rationals: {text!r}") from exc

    @property
    def values(self):
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    @property
    def exact(self):
        return all(isinstance(x, Fraction) for x in self.values)

    def as_array(self):
        return np.array([float(x) for x in self.values])

    def norm(self):
        return float(np.linalg.norm(self.as_array()))

    def scaled(self, k):
        return EdgeLengths(*(k * x for x in self.values))

    def shifted(self, delta):
        return EdgeLengths(*(x + delta for x in self.values))


class HadwigerMeasures(NamedTuple):
    mu0: float
    mu1: float
    mu2: float
    mu3: float


@dataclass(frozen=True)
class TetMetric:
    lengths: EdgeLengths
    tet_class: TetClass
    volume: Optional[float]
    exterior_angles: Optional[dict]
    embedding: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]
    hadwiger: Optional[HadwigerMeasures]


def gram_matrix(lengths):
    """Gram matrix of the edge vectors A, C, E (exact for rational lengths)"""
    a, b, c, d, e, f = (x * x for x in lengths.values)
    ac = (b - a - c) / 2
    ce = (c + e - d) / 2
    ae = (f - a - e) / 2
    return ((a, ac, ae), (ac, c, ce), (ae, ce, e))


def gram_determinant(gram):
    (p, q, r), (_, s, t), (_, _, u) = gram
    return p * (s * u - t * t) - q * (q * u - t * r) + r * (q * t - s * r)


def classify(lengths, tolerance=None):
    gram = gram_matrix(lengths)
    det = gram_determinant(gram)
    if lengths.exact:
        if det > 0:
            return TetClass.EUCLIDEAN
        return TetClass.FLAT if det == 0 else TetClass.MINKOWSKIAN
    if tolerance is None:
        tolerance = config.TOLERANCES["flat_relative"]
    scale = max(abs(x) for row in gram for x in row)
    if abs(det) <= tolerance * scale ** 3:
        return TetClass.FLAT
    return TetClass.EUCLIDEAN if det > 0 else TetClass.MINKOWSKIAN


def _require_euclidean(lengths, operation):
    tet_class = classify(lengths)
    if tet_class is not TetClass.EUCLIDEAN:
        raise NotEuclidean(f"{operation} needs a Euclidean tetrahedron, got {tet_class.value} for {lengths.values}")


def embed(lengths):
    _require_euclidean(lengths, "embed")
    gram = np.array(gram_matrix(lengths), dtype=float)
    try:
        factor = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NotEuclidean(f"Gram matrix of {lengths.values} is not positive definite") from exc
    return factor[0], factor[1], factor[2]


def vertices(lengths):
    A, C, E = embed(lengths)
    return np.array([np.zeros(3), A, A + C, A + E])


def volume(lengths):
    tet_class = classify(lengths)
    if tet_class is TetClass.MINKOWSKIAN:
        raise NotEuclidean(f"Volume is undefined for the Minkowskian tetrahedron {lengths.values}")
    if tet_class is TetClass.FLAT:
        return 0.0
    det = gram_determinant(gram_matrix(lengths))
    if isinstance(det, Fraction):
        return signed_sqrt_to_float(1, det) / 6
    return math.sqrt(det) / 6


def _outward_normals(points):
    centroid = points.mean(axis=0)
    normals = {}
    for face, (i, j, k) in FACE_VERTICES.items():
        normal = np.cross(points[j] - points[i], points[k] - points[i])
        face_centre = (points[i] + points[j] + points[k]) / 3
        if np.dot(normal, face_centre - centroid) < 0:
            normal = -normal
        normals[face] = normal / np.linalg.norm(normal)
    return normals


def exterior_dihedral_angles(lengths):
    """Angles between outward face normals along each edge, ordered a..f"""
    normals = _outward_normals(vertices(lengths))
    angles = []
    for edge in config.EDGE_NAMES:
        first, second = (normals[face] for face in EDGE_FACES[edge])
        angles.append(math.atan2(np.linalg.norm(np.cross(first, second)), float(np.dot(first, second))))
    return np.array(angles)


def interior_dihedral_angles(lengths):
    return math.pi - exterior_dihedral_angles(lengths)


def face_areas(lengths):
    """Heron areas of the four faces, from the exact squared form where possible"""
    areas = []
    for face in config.FACES:
        x, y, z = (getattr(lengths, name) ** 2 for name in face)
        sixteen_sq = 2 * (x * y + y * z + z * x) - (x * x + y * y + z * z)
        if isinstance(sixteen_sq, Fraction):
            areas.append(signed_sqrt_to_float(1, max(sixteen_sq, Fraction(0))) / 4)
        else:
            areas.append(math.sqrt(max(sixteen_sq, 0.0)) / 4)
    return areas


def hadwiger_measures(lengths):
    _require_euclidean(lengths, "hadwiger_measures")
    angles = exterior_dihedral_angles(lengths)
    mu1 = float(np.dot(lengths.as_array(), angles))
    mu2 = sum(face_areas(lengths)) / 2
    return HadwigerMeasures(1.0, mu1, mu2, volume(lengths))


def cayley_menger_det(lengths):
    squares = [x * x for x in lengths.values]
    a, b, c, d, e, f = squares
    # squared distances between V0..V3
    dist = [
        [0, a, b, f],
        [a, 0, c, e],
        [b, c, 0, d],
        [f, e, d, 0],
    ]
    rows = [[0, 1, 1, 1, 1]] + [[1] + row for row in dist]
    if lengths.exact:
        matrix = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sympy.Integer(x) for x in row] for row in rows])
        det = matrix.det(method="bareiss")
        return Fraction(int(det.p), int(det.q))
    return float(np.linalg.det(np.array(rows, dtype=float)))


def schlafli_residual(lengths, direction, step=None):
    """Central-difference residual of sum(l_i dtheta_i) along ``direction``"""
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (6,):
        raise BadInput("Direction must have six components")
    _require_euclidean(lengths, "schlafli_residual")
    base = lengths.as_array()
    norm = float(np.linalg.norm(base))
    det = float(gram_determinant(gram_matrix(lengths)))
    if det / norm ** 6 < config.TOLERANCES["schlafli_min_normalized_det"]:
        raise NotEuclidean(f"Tetrahedron {lengths.values} is too close to flat for a finite-difference check")
    if not np.any(direction):
        return 0.0
    if step is None:
        step = config.TOLERANCES["schlafli_step"]
    delta = step * norm

    def angles_at(point):
        try:
            moved = EdgeLengths(*point)
        except FaceViolation as exc:
            raise StepLeavesEuclideanRegion(f"Step of size {delta} breaks a face") from exc
        if classify(moved) is not TetClass.EUCLIDEAN:
            raise StepLeavesEuclideanRegion(f"Step of size {delta} leaves the Euclidean region")
        return exterior_dihedral_angles(moved)

    forward = angles_at(base + delta * direction)
    backward = angles_at(base - delta * direction)
    return float(np.dot(base, (forward - backward) / (2 * delta)))


def tet_metric(lengths):
    tet_class = classify(lengths)
    if tet_class is TetClass.EUCLIDEAN:
        angles = exterior_dihedral_angles(lengths)
        return TetMetric(
            lengths=lengths,
            tet_class=tet_class,
            volume=volume(lengths),
            exterior_angles=dict(zip(config.EDGE_NAMES, angles.tolist())),
            embedding=embed(lengths),
            hadwiger=hadwiger_measures(lengths),
        )
    return TetMetric(
        lengths=lengths,
        tet_class=tet_class,
        volume=0.0 if tet_class is TetClass.FLAT else None,
        exterior_angles=None,
        embedding=None,
        hadwiger=None,
    )

"""
Regge symmetries of the 6j-symbol.

A relabeling is a tuple ``p`` of slot indices acting by
``new[i] = labels[p[i]]``. Regge involutions fix one opposite pair and
reflect the other four labels about their mean. The involutions alone
generate a group of order 24 that contains the four relabelings fixing
every opposite pair as a set. Together with the 24 relabelings they
generate a group of 144 linear maps on label space.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

import config
from errors import BadInput, HalfIntegerResult, Inadmissible, NotEuclidean
from geometry import EdgeLengths, TetClass, classify, exterior_dihedral_angles, hadwiger_measures, volume
from recoupling import ExactValue, LabelSextuple, is_admissible_sextuple, sixj_exact

logger = logging.getLogger(__name__)

SLOT = {name: index for index, name in enumerate(config.EDGE_NAMES)}
FACE_SLOTS = tuple(tuple(SLOT[name] for name in face) for face in config.FACES)
PAIRS = {"".join(pair): (SLOT[pair[0]], SLOT[pair[1]]) for pair in config.OPPOSITE_PAIRS}
FACE_SETS = [frozenset(face) for face in FACE_SLOTS]


def pair_slots(pair):
    """Accept "ad", "a,d", ("a", "d") or (0, 3) and return the two slot indices"""
    if isinstance(pair, str):
        key = "".join(ch for ch in pair.lower() if ch.isalpha())
    else:
        items = tuple(pair)
        if len(items) == 2 and all(isinstance(x, int) for x in items):
            key = "".join(config.EDGE_NAMES[x] for x in sorted(items) if 0 <= x < 6)
        else:
            key = "".join(str(x) for x in items)
    if key not in PAIRS:
        key = key[::-1]
    if key not in PAIRS:
        raise BadInput(f"{pair!r} is not an opposite pair; expected one of {sorted(PAIRS)}")
    return PAIRS[key]


def regge_transform(labels, pair):
    labels = tuple(int(x) for x in labels)
    if len(labels) != 6:
        raise BadInput(f"Expected six labels, got {labels}")
    fixed = pair_slots(pair)
    moving = [i for i in range(6) if i not in fixed]
    total = sum(labels[i] for i in moving)
    if total % 2:
        raise HalfIntegerResult(f"Labels {labels} give a half-integer Regge image for pair {pair!r}")
    s = total // 2
    return LabelSextuple(*(x if i in fixed else s - x for i, x in enumerate(labels)))


def relabel(labels, permutation):
    return LabelSextuple(*(labels[j] for j in permutation))


def _face_index(slots):
    return FACE_SETS.index(frozenset(slots))


@lru_cache(maxsize=None)
def tetrahedral_relabelings():
    """The slot permutations that carry the face set onto itself"""
    faces = set(FACE_SETS)
    found = []
    for perm in itertools.permutations(range(6)):
        if {frozenset(perm[i] for i in face) for face in FACE_SLOTS} == faces:
            found.append(perm)
    return tuple(found)


def orientation_preserving(permutation):
    """True when the induced permutation of the four vertices is even.

    Faces and their opposite vertices are in bijection, so the face
    permutation has the same parity.
    """
    image = [_face_index(permutation[i] for i in face) for face in FACE_SLOTS]
    swaps = 0
    seen = [False] * 4
    for start in range(4):
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = image[node]
            length += 1
        if length:
            swaps += length - 1
    return swaps % 2 == 0


def canonical_form(labels, proper_only=False):
    relabelings = tetrahedral_relabelings()
    if proper_only:
        relabelings = [p for p in relabelings if orientation_preserving(p)]
    return min(relabel(labels, p) for p in relabelings)


def _permutation_matrix(permutation):
    matrix = np.zeros((6, 6))
    for i, j in enumerate(permutation):
        matrix[i, j] = 1.0
    return matrix


def _involution_matrix(pair):
    fixed = pair_slots(pair)
    moving = [i for i in range(6) if i not in fixed]
    matrix = np.zeros((6, 6))
    for i in fixed:
        matrix[i, i] = 1.0
    for i in moving:
        for j in moving:
            matrix[i, j] = 0.5
        matrix[i, i] -= 1.0
    return matrix


def _key(matrix):
    # entries are multiples of 1/4
    return tuple(np.rint(4 * matrix).astype(int).ravel().tolist())


@dataclass(frozen=True)
class ReggeElement:
    """relabeling applied after the Regge word ``regge_part`` (pair names in application order).

    ``regge_part`` is one of the six coset representatives from
    ``regge_coset_words``, so every group element has exactly one factoring.
    """

    relabeling: Tuple[int, ...]
    regge_part: Tuple[str, ...]
    matrix: np.ndarray = field(compare=False, repr=False)

    def apply(self, labels):
        image = tuple(labels)
        for pair in self.regge_part:
            image = regge_transform(image, pair)
        return relabel(image, self.relabeling)


@lru_cache(maxsize=None)
def regge_subgroup():
    """Shortest words in the three involutions reaching each element of the group they generate (24 elements)"""
    identity = np.eye(6)
    words = {_key(identity): ((), identity)}
    frontier = [((), identity)]
    while frontier:
        grown = []
        for word, matrix in frontier:
            for pair in PAIRS:
                product = _involution_matrix(pair) @ matrix
                key = _key(product)
                if key not in words:
                    words[key] = (word + (pair,), product)
                    grown.append(words[key])
        frontier = grown
    return tuple(words.values())


@lru_cache(maxsize=None)
def regge_relabelings():
    """Relabelings that are themselves products of Regge involutions"""
    keys = {_key(matrix) for _, matrix in regge_subgroup()}
    return tuple(p for p in tetrahedral_relabelings() if _key(_permutation_matrix(p)) in keys)


@lru_cache(maxsize=None)
def regge_coset_words():
    """One shortest word per coset of ``regge_relabelings()`` in ``regge_subgroup()``"""
    inner = [_permutation_matrix(p) for p in regge_relabelings()]
    covered = set()
    chosen = []
    for word, matrix in regge_subgroup():
        if _key(matrix) in covered:
            continue
        chosen.append((word, matrix))
        covered.update(_key(p @ matrix) for p in inner)
    return tuple(chosen)


def _closure(generators):
    elements = {_key(np.eye(6)): np.eye(6)}
    frontier = list(elements.values())
    while frontier:
        grown = []
        for matrix in frontier:
            for generator in generators:
                product = generator @ matrix
                key = _key(product)
                if key not in elements:
                    elements[key] = product
                    grown.append(product)
        frontier = grown
    return elements


@lru_cache(maxsize=None)
def symmetry_group():
    """Closure of the relabelings and the Regge involutions, each factored as relabeling after Regge word"""
    relabelings = tetrahedral_relabelings()
    generators = [_permutation_matrix(p) for p in relabelings] + [_involution_matrix(pair) for pair in PAIRS]
    closure = _closure(generators)

    factored = {}
    for perm in relabelings:
        for word, matrix in regge_coset_words():
            product = _permutation_matrix(perm) @ matrix
            factored.setdefault(_key(product), ReggeElement(perm, word, product))
    missing = set(closure) - set(factored)
    if missing:
        raise RuntimeError(f"{len(missing)} group elements do not factor as relabeling after Regge word")
    group = tuple(factored[key] for key in sorted(closure))
    logger.info(f"Symmetry group closed with {len(group)} elements")
    return group


def orbit_images(labels):
    labels = LabelSextuple(*labels)
    return [element.apply(labels) for element in symmetry_group()]


@dataclass(frozen=True)
class ClassGeometry:
    labels: LabelSextuple
    tet_class: TetClass
    volume: Optional[float] = None
    mu1: Optional[float] = None
    mu2: Optional[float] = None
    total_length: int = 0
    angle_multiset: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class OrbitReport:
    labels: LabelSextuple
    classes: List[LabelSextuple]
    mirror_classes: List[LabelSextuple]
    geometry: Dict[LabelSextuple, ClassGeometry]
    sixj: ExactValue

    @property
    def all_euclidean(self):
        return all(g.tet_class is TetClass.EUCLIDEAN for g in self.geometry.values())


def class_geometry(labels):
    lengths = EdgeLengths.from_labels(labels)
    tet_class = classify(lengths)
    if tet_class is not TetClass.EUCLIDEAN:
        return ClassGeometry(labels, tet_class, total_length=sum(labels))
    measures = hadwiger_measures(lengths)
    return ClassGeometry(
        labels=labels,
        tet_class=tet_class,
        volume=volume(lengths),
        mu1=measures.mu1,
        mu2=measures.mu2,
        total_length=sum(labels),
        angle_multiset=tuple(sorted(exterior_dihedral_angles(lengths).tolist())),
    )


def orbit_congruence_classes(labels):
    labels = LabelSextuple(*labels)
    if not is_admissible_sextuple(labels):
        raise Inadmissible(f"Sextuple {labels} is not admissible")
    images = orbit_images(labels)
    classes = sorted({canonical_form(image, proper_only=True) for image in images})
    mirror_classes = sorted({canonical_form(image) for image in images})
    logger.info(f"Orbit of {labels}: {len(classes)} classes, {len(mirror_classes)} up to reflection")
    return OrbitReport(
        labels=labels,
        classes=classes,
        mirror_classes=mirror_classes,
        geometry={cls: class_geometry(cls) for cls in classes},
        sixj=sixj_exact(labels),
    )


@dataclass(frozen=True)
class InvarianceRow:
    labels: LabelSextuple
    volume: float
    mu1: float
    mu2: float
    total_length: int
    sixj: ExactValue


@dataclass(frozen=True)
class InvarianceReport:
    rows: List[InvarianceRow]
    volume_constant: bool
    mu1_constant: bool
    length_constant: bool
    sixj_constant: bool
    mu2_constant: bool

    @property
    def holds(self):
        return self.volume_constant and self.mu1_constant and self.length_constant and self.sixj_constant


def _agree(values, tolerance):
    values = np.asarray(values, dtype=float)
    spread = float(values.max() - values.min())
    return spread <= tolerance * float(np.max(np.abs(values)))


def invariance_report(labels, tolerance=None):
    if tolerance is None:
        tolerance = config.TOLERANCES["regge_invariance"]
    labels = LabelSextuple(*labels)
    if classify(EdgeLengths.from_labels(labels)) is not TetClass.EUCLIDEAN:
        raise NotEuclidean(f"Invariance report needs Euclidean labels, got {labels}")
    report = orbit_congruence_classes(labels)
    rows = []
    for cls in report.classes:
        geometry = report.geometry[cls]
        if geometry.tet_class is not TetClass.EUCLIDEAN:
            raise NotEuclidean(f"Orbit class {cls} of {labels} is {geometry.tet_class.value}")
        rows.append(InvarianceRow(cls, geometry.volume, geometry.mu1, geometry.mu2, geometry.total_length, sixj_exact(cls)))

    exact_values = {(row.sixj.sign, row.sixj.radicand) for row in rows}
    return InvarianceReport(
        rows=rows,
        volume_constant=_agree([row.volume for row in rows], tolerance),
        mu1_constant=_agree([row.mu1 for row in rows], tolerance),
        length_constant=len({row.total_length for row in rows}) == 1,
        sixj_constant=len(exact_values) == 1,
        mu2_constant=_agree([row.mu2 for row in rows], tolerance),
    )


def angle_transport_residuals(labels, pair):
    """Per-edge differences between the image angles and the reflected original angles"""
    labels = LabelSextuple(*labels)
    image = regge_transform(labels, pair)
    angles = {}
    for name, sextuple in (("original", labels), ("image", image)):
        lengths = EdgeLengths.from_labels(sextuple)
        if classify(lengths) is not TetClass.EUCLIDEAN:
            raise NotEuclidean(f"The {name} sextuple {sextuple} is not Euclidean")
        angles[name] = exterior_dihedral_angles(lengths)

    fixed = pair_slots(pair)
    theta = angles["original"]
    sigma = sum(theta[i] for i in range(6) if i not in fixed) / 2
    expected = [theta[i] if i in fixed else sigma - theta[i] for i in range(6)]
    return {name: float(angles["image"][i] - expected[i]) for i, name in enumerate(config.EDGE_NAMES)}


def angle_transport_check(labels, pair, tolerance=None):
    if tolerance is None:
        tolerance = config.TOLERANCES["angle_transport"]
    residuals = angle_transport_residuals(labels, pair)
    failed = {edge: r for edge, r in residuals.items() if abs(r) > tolerance}
    if failed:
        logger.warning(f"Angle transport failed for {tuple(labels)} pair {pair!r}: {failed}")
        return False
    return True

"""
Exact theta symbols, tetrahedral nets and normalized 6j-symbols.

Values follow the spin-network calculus at loop value -2. The closed forms
below are checked against the permutation-sum evaluation in ``penrose``.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional, Tuple

import config
from errors import BadInput, Inadmissible

logger = logging.getLogger(__name__)


class LabelSextuple(NamedTuple):
    """Edge labels of a tetrahedron; faces are (a,b,c), (c,d,e), (e,f,a), (f,d,b)"""

    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    @classmethod
    def parse(cls, text):
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 6:
            raise BadInput(f"Expected six comma-separated labels, got {text!r}")
        try:
            values = [int(p) for p in parts]
        except ValueError as exc:
            raise BadInput(f"Labels must be natural numbers: {text!r}") from exc
        if any(v < 0 for v in values):
            raise BadInput(f"Labels must be natural numbers: {text!r}")
        return cls(*values)

    def faces(self):
        a, b, c, d, e, f = self
        return ((a, b, c), (c, d, e), (e, f, a), (f, d, b))

    def __str__(self):
        return ",".join(str(x) for x in self)


@dataclass(frozen=True)
class ExactValue:
    """A 6j-symbol stored as sign * sqrt(radicand), with its exact ingredients"""

    sign: int
    radicand: Fraction
    tet: Optional[Fraction] = field(default=None, compare=False)
    thetas: Optional[Tuple[Fraction, Fraction, Fraction, Fraction]] = field(default=None, compare=False)

    @property
    def is_zero(self):
        return self.sign == 0

    def to_float(self, bits=None):
        return signed_sqrt_to_float(self.sign, self.radicand, bits)

    def __float__(self):
        return self.to_float()


ZERO = ExactValue(0, Fraction(0), Fraction(0), (Fraction(0),) * 4)


def signed_sqrt_to_float(sign, radicand, bits=None):
    """Render sign * sqrt(radicand) through an integer square root of the scaled radicand"""
    if sign == 0 or radicand == 0:
        return 0.0
    if bits is None:
        bits = config.ENGINE["float_bits"]
    radicand = Fraction(radicand)
    p, q = radicand.numerator, radicand.denominator
    shift = max(0, bits - (p.bit_length() - q.bit_length()) // 2 + 2)
    root = math.isqrt((p << (2 * shift)) // q)
    return sign * (root / (1 << shift))


@lru_cache(maxsize=None)
def factorial(n):
    return math.factorial(n)


def is_admissible_triple(a, b, c):
    if min(a, b, c) < 0:
        return False
    return a <= b + c and b <= c + a and c <= a + b and (a + b + c) % 2 == 0


def is_admissible_sextuple(labels):
    return all(is_admissible_triple(*face) for face in LabelSextuple(*labels).faces())


def scale_labels(labels, k):
    if k < 1:
        raise BadInput(f"Scale factor must be a positive natural number, got {k}")
    return LabelSextuple(*(k * x for x in labels))


def theta_exact(a, b, c):
    if not is_admissible_triple(a, b, c):
        raise Inadmissible(f"Theta triple ({a},{b},{c}) is not admissible")
    i = (b + c - a) // 2
    j = (a + c - b) // 2
    k = (a + b - c) // 2
    n = i + j + k
    numerator = factorial(n + 1) * factorial(i) * factorial(j) * factorial(k)
    value = Fraction(numerator, factorial(a) * factorial(b) * factorial(c))
    return -value if n % 2 else value


def tet_exact(labels):
    labels = LabelSextuple(*labels)
    if not is_admissible_sextuple(labels):
        raise Inadmissible(f"Sextuple {labels} is not admissible")
    a, b, c, d, e, f = labels
    if sum(labels) > config.EXACT_LABEL_SUM_CAP:
        logger.warning(
            f"Label sum {sum(labels)} exceeds the exact-arithmetic cap {config.EXACT_LABEL_SUM_CAP}; evaluating anyway"
        )

    # face half-sums and the three four-cycle half-sums
    lows = [sum(face) // 2 for face in labels.faces()]
    highs = [(b + c + e + f) // 2, (a + c + d + f) // 2, (a + b + d + e) // 2]
    s_min, s_max = max(lows), min(highs)

    inner = 1
    for lo in lows:
        for hi in highs:
            inner *= factorial(hi - lo)
    edges = 1
    for x in labels:
        edges *= factorial(x)

    # common denominator of every term in the alternating sum
    common = 1
    for lo in lows:
        common *= factorial(s_max - lo)
    for hi in highs:
        common *= factorial(hi - s_min)

    denominator = 1
    for lo in lows:
        denominator *= factorial(s_min - lo)
    for hi in highs:
        denominator *= factorial(hi - s_min)
    term = factorial(s_min + 1) * (common // denominator)

    total = 0
    for s in range(s_min, s_max + 1):
        total += -term if s % 2 else term
        if s == s_max:
            break
        # ratio of consecutive terms; the division is exact
        up = (s + 2)
        for hi in highs:
            up *= hi - s
        down = 1
        for lo in lows:
            down *= s + 1 - lo
        term = term * up // down

    return Fraction(inner * total, edges * common)


def sixj_exact(labels):
    labels = LabelSextuple(*labels)
    if not is_admissible_sextuple(labels):
        return ZERO
    tet = tet_exact(labels)
    thetas = tuple(theta_exact(*face) for face in labels.faces())
    product = abs(thetas[0] * thetas[1] * thetas[2] * thetas[3])
    radicand = tet * tet / product
    sign = (tet > 0) - (tet < 0)
    return ExactValue(sign, radicand, tet, thetas)


def triangular_range(x, y, cap):
    return range(abs(x - y), min(x + y, cap) + 1, 2)


def admissible_sextuples(max_label) -> Iterator[LabelSextuple]:
    """Every admissible sextuple with all labels <= max_label, in lexicographic order"""
    for a in range(max_label + 1):
        for b in range(max_label + 1):
            for c in triangular_range(a, b, max_label):
                for d in range(max_label + 1):
                    for e in triangular_range(c, d, max_label):
                        lo = max(abs(e - a), abs(d - b))
                        hi = min(e + a, d + b, max_label)
                        for f in range(lo, hi + 1):
                            if (e + f + a) % 2 == 0 and (f + d + b) % 2 == 0:
                                yield LabelSextuple(a, b, c, d, e, f)


def random_admissible_sextuple(rng, max_label, min_label=0):
    """Draw uniformly among admissible sextuples in [min_label, max_label] by rejection"""
    while True:
        labels = LabelSextuple(*(rng.randint(min_label, max_label) for _ in range(6)))
        if is_admissible_sextuple(labels):
            return labels

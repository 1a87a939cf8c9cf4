"""
Append-only JSONL store of exact 6j values.

Records are keyed by the canonical sextuple under all 24 relabelings, so
symmetric queries share one line. Readers skip torn trailing lines left by
an interrupted writer.
"""

import json
import logging
import math
import os
import random
from fractions import Fraction

import config
from errors import CacheMismatch
from recoupling import ExactValue, LabelSextuple, sixj_exact
from regge import canonical_form

logger = logging.getLogger(__name__)


def record_for(labels, value):
    return {
        "labels": list(labels),
        "sign": value.sign,
        "radicand_num": str(value.radicand.numerator),
        "radicand_den": str(value.radicand.denominator),
    }


def value_from_record(record):
    sign, num, den = int(record["sign"]), int(record["radicand_num"]), int(record["radicand_den"])
    if sign not in (-1, 0, 1) or den <= 0 or num < 0:
        raise ValueError(f"Malformed exact value: sign={sign} radicand={num}/{den}")
    return ExactValue(sign, Fraction(num, den))


class SixjCache:
    def __init__(self, path, spot_check_fraction=None, seed=0):
        self.path = path
        self.spot_check_fraction = (
            config.ENGINE["cache_spot_check_fraction"] if spot_check_fraction is None else spot_check_fraction
        )
        self.seed = seed
        self.entries = {}
        self.hits = set()
        self.load()

    def load(self):
        if not os.path.exists(self.path):
            return
        skipped = 0
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    key = canonical_form(LabelSextuple(*record["labels"]))
                    self.entries[key] = value_from_record(record)
                except (ValueError, KeyError, TypeError) as exc:
                    skipped += 1
                    logger.warning(f"Skipping unreadable cache line {line_number} in {self.path}: {exc}")
        logger.info(f"Loaded {len(self.entries)} cache records from {self.path} ({skipped} skipped)")

    def get(self, labels):
        key = canonical_form(LabelSextuple(*labels))
        value = self.entries.get(key)
        if value is not None:
            self.hits.add(key)
        return value

    def put(self, labels, value):
        key = canonical_form(LabelSextuple(*labels))
        if key in self.entries:
            return
        self.entries[key] = value
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        prefix = "\n" if self._torn_tail() else ""
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(prefix + json.dumps(record_for(key, value), sort_keys=True) + "\n")
            handle.flush()

    def _torn_tail(self):
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return False
        with open(self.path, "rb") as handle:
            handle.seek(-1, os.SEEK_END)
            return handle.read(1) != b"\n"

    def get_or_compute(self, labels):
        value = self.get(labels)
        if value is None:
            value = sixj_exact(labels)
            self.put(labels, value)
        return value

    def spot_check(self, keys=None):
        """Recompute a seeded random share of the entries and raise CacheMismatch on any difference"""
        pool = sorted(self.hits if keys is None else keys)
        if not pool or self.spot_check_fraction <= 0:
            return 0
        count = min(len(pool), max(1, math.ceil(self.spot_check_fraction * len(pool))))
        sample = random.Random(self.seed).sample(pool, count)
        for key in sample:
            fresh = sixj_exact(key)
            cached = self.entries[key]
            if (fresh.sign, fresh.radicand) != (cached.sign, cached.radicand):
                raise CacheMismatch(
                    f"Cached value for {key} is {cached.sign}*sqrt({cached.radicand}), recomputed {fresh.sign}*sqrt({fresh.radicand})"
                )
        logger.info(f"Spot-checked {count} of {len(pool)} cache hits")
        return count

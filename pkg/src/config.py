import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

load_dotenv()

DEFAULTS_FILE = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"

# Engine caps (standardized environment variables)
ORACLE_CAP = int(os.getenv("SIXJ_ORACLE_CAP", "6"))  # per-label cap for the permutation-sum oracle
EXACT_LABEL_SUM_CAP = int(os.getenv("SIXJ_EXACT_CAP", "2400"))  # sum of six labels
CACHE_PATH = os.getenv("SIXJ_CACHE", "")  # empty disables the result cache
WORKERS = int(os.getenv("SIXJ_WORKERS", "1"))
LOG_LEVEL = os.getenv("SIXJ_LOG_LEVEL", "INFO")

# Tolerance Configuration
TOLERANCES = {
    "flat_relative": 1e-10,
    "schlafli_step": 1e-5,
    "schlafli_min_normalized_det": 1e-6,
    "angle_transport": 1e-9,
    "regge_invariance": 1e-9,
    "quadrature_relative": 1e-12,
}

# Engine Configuration
ENGINE = {
    "float_bits": 160,
    "rotation_oracle_cap": 30,
    "quadrature_cap": 500,
    "quadrature_limit": 200,
    "cache_spot_check_fraction": 0.05,
}

EDGE_NAMES = ("a", "b", "c", "d", "e", "f")
OPPOSITE_PAIRS = (("a", "d"), ("b", "e"), ("c", "f"))
FACES = (("a", "b", "c"), ("c", "d", "e"), ("e", "f", "a"), ("f", "d", "b"))


def merge_overrides(overrides):
    """Merge a {"tolerances": {...}, "engine": {...}} mapping into the module dicts"""
    if not overrides:
        return
    for section, target in (("tolerances", TOLERANCES), ("engine", ENGINE)):
        values = overrides.get(section) or {}
        for key, value in values.items():
            if key not in target:
                raise KeyError(f"Unknown {section} key: {key}")
            target[key] = type(target[key])(value)


def load_yaml_overrides(path):
    with open(path, "r", encoding="utf-8") as handle:
        merge_overrides(yaml.safe_load(handle) or {})


def apply_tolerance_flag(flag):
    """Apply one KEY=VALUE override; KEY may live in TOLERANCES or ENGINE"""
    key, sep, value = flag.partition("=")
    if not sep:
        raise ValueError(f"Expected KEY=VALUE, got {flag!r}")
    key = key.strip()
    if key in TOLERANCES:
        TOLERANCES[key] = float(value)
    elif key in ENGINE:
        ENGINE[key] = type(ENGINE[key])(float(value))
    else:
        raise KeyError(f"Unknown tolerance key: {key}")


if DEFAULTS_FILE.exists():
    load_yaml_overrides(DEFAULTS_FILE)

if os.getenv("SIXJ_CONFIG"):
    load_yaml_overrides(os.getenv("SIXJ_CONFIG"))

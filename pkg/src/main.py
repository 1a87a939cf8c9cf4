import argparse
import contextlib
import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import yaml

import config
from asymptotics import (
    exact_series,
    rotation_sample,
    section_norm_asymptote,
    section_norm_exact,
    section_norm_quadrature,
    series_compare,
)
from cache import SixjCache
from errors import (
    BadInput,
    CacheMismatch,
    CapExceeded,
    DegenerateAngle,
    FaceViolation,
    HalfIntegerResult,
    Inadmissible,
    NotEuclidean,
)
from geometry import EdgeLengths, cayley_menger_det, tet_metric
from penrose import mercedes_net, penrose_evaluate, theta_net
from plotscript import write_plot_script
from recoupling import LabelSextuple, is_admissible_sextuple, scale_labels, sixj_exact, tet_exact, theta_exact
from regge import PAIRS, angle_transport_check, invariance_report, orbit_congruence_classes

# Configure logging
logging.basicConfig(level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO))
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_IO = 3
EXIT_GEOMETRY = 4

SERIES_COLUMNS = ("k", "exact", "pr_theorem", "pr_original", "abs_err_theorem", "abs_err_original")


def parse_labels(text):
    """Comma-separated natural numbers (three for a theta net, six for a tetrahedron)"""
    try:
        values = tuple(int(part) for part in str(text).split(","))
    except ValueError as exc:
        raise BadInput(f"Labels must be comma-separated natural numbers: {text!r}") from exc
    if any(v < 0 for v in values):
        raise BadInput(f"Labels must be natural numbers: {text!r}")
    return values


def format_float(value):
    return "" if value is None else format(value, ".17g")


@dataclass
class RunConfig:
    command: str
    labels: Optional[str] = None
    k_min: int = 1
    k_max: int = 1
    k: Optional[int] = None
    beta: Optional[float] = None
    oracle_cap: int = config.ORACLE_CAP
    out: Optional[str] = None
    cache: Optional[str] = None
    fmt: str = "csv"
    workers: int = config.WORKERS
    csv_path: Optional[str] = None
    tolerances: List[str] = field(default_factory=list)

    @classmethod
    def from_args(cls, args):
        # flags win over the SIXJ_* environment read by config
        return cls(
            command=args.command,
            labels=args.labels,
            k_min=args.k_min,
            k_max=args.k_max,
            k=args.k,
            beta=args.beta,
            oracle_cap=args.oracle_cap if args.oracle_cap is not None else config.ORACLE_CAP,
            out=args.out,
            cache=args.cache if args.cache is not None else (config.CACHE_PATH or None),
            fmt=args.format,
            workers=args.workers if args.workers is not None else config.WORKERS,
            csv_path=getattr(args, "csv_path", None),
            tolerances=list(args.tolerance or []),
        )

    def validate(self):
        if self.k_min > self.k_max:
            raise BadInput(f"--k-min {self.k_min} exceeds --k-max {self.k_max}")
        if self.k_min < 1:
            raise BadInput(f"--k-min must be at least 1, got {self.k_min}")
        if self.oracle_cap < 1:
            raise BadInput(f"--oracle-cap must be positive, got {self.oracle_cap}")
        if self.workers < 1:
            raise BadInput(f"--workers must be positive, got {self.workers}")

    def sextuple(self):
        if not self.labels:
            raise BadInput(f"{self.command} needs --labels A,B,C,D,E,F")
        return LabelSextuple.parse(self.labels)

    def require(self, name):
        value = getattr(self, name)
        if value is None:
            raise BadInput(f"{self.command} needs --{name.replace('_', '-')}")
        return value


def emit(record, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(record) + "\n")


@contextlib.contextmanager
def open_output(path):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def cmd_exact(cfg):
    labels = cfg.sextuple()
    if cfg.cache:
        cache = SixjCache(cfg.cache)
        value = cache.get_or_compute(labels)
        cache.spot_check()
    else:
        value = sixj_exact(labels)
    emit(
        {
            "labels": list(labels),
            "admissible": is_admissible_sextuple(labels),
            "sign": value.sign,
            "radicand_num": str(value.radicand.numerator),
            "radicand_den": str(value.radicand.denominator),
            "value": value.to_float(),
        }
    )
    return EXIT_OK


def cmd_oracle(cfg):
    if not cfg.labels:
        raise BadInput("oracle needs --labels with three or six entries")
    labels = parse_labels(cfg.labels)
    if len(labels) == 3:
        net = theta_net(*labels)
    elif len(labels) == 6:
        net = mercedes_net(labels)
    else:
        raise BadInput(f"oracle takes three or six labels, got {len(labels)}")
    value = penrose_evaluate(net, cap=cfg.oracle_cap)
    closed_form = theta_exact(*labels) if len(labels) == 3 else tet_exact(labels)
    emit(
        {
            "net": net.name,
            "labels": list(labels),
            "penrose_num": str(value.numerator),
            "penrose_den": str(value.denominator),
            "closed_form_num": str(closed_form.numerator),
            "closed_form_den": str(closed_form.denominator),
            "match": value == closed_form,
        }
    )
    return EXIT_OK


def _series_exact_values(cfg, labels):
    ks = range(cfg.k_min, cfg.k_max + 1)
    if not cfg.cache:
        return exact_series(labels, ks, cfg.workers)
    cache = SixjCache(cfg.cache)
    known = {}
    for k in ks:
        value = cache.get(scale_labels(labels, k))
        if value is not None:
            known[k] = value
    missing = [k for k in ks if k not in known]
    logger.info(f"Cache hits {len(known)}, computing {len(missing)} scales")
    fresh = exact_series(labels, missing, cfg.workers)
    for k in missing:
        cache.put(scale_labels(labels, k), fresh[k])
    cache.spot_check()
    known.update(fresh)
    return known


def write_series(samples, handle, fmt):
    if fmt == "jsonl":
        for sample in samples:
            handle.write(json.dumps(asdict(sample)) + "\n")
        return
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SERIES_COLUMNS)
    for sample in samples:
        writer.writerow([sample.k] + [format_float(getattr(sample, name)) for name in SERIES_COLUMNS[1:]])


def read_series_csv(path):
    """Parse a series CSV back into dict rows; empty fields become None"""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = []
        for row in csv.DictReader(handle):
            rows.append({key: (int(value) if key == "k" else (float(value) if value else None)) for key, value in row.items()})
    return rows


def cmd_series(cfg):
    labels = cfg.sextuple()
    exact_values = _series_exact_values(cfg, labels)
    samples = series_compare(labels, cfg.k_min, cfg.k_max, cfg.workers, exact_values)
    with open_output(cfg.out) as handle:
        write_series(samples, handle, cfg.fmt)
    if cfg.out:
        logger.info(f"Wrote {len(samples)} rows to {cfg.out}")
    return EXIT_OK


def cmd_geom(cfg):
    if not cfg.labels:
        raise BadInput("geom needs --labels with six nonnegative rationals")
    lengths = EdgeLengths.parse(cfg.labels)
    metric = tet_metric(lengths)
    cm = cayley_menger_det(lengths)
    record = {
        "lengths": [str(x) for x in lengths.values],
        "classification": metric.tet_class.value,
        "cayley_menger_num": str(cm.numerator),
        "cayley_menger_den": str(cm.denominator),
        "volume": metric.volume,
        "exterior_angles": metric.exterior_angles,
        "hadwiger": metric.hadwiger._asdict() if metric.hadwiger else None,
    }
    emit(record)
    return EXIT_OK


def cmd_regge(cfg):
    labels = cfg.sextuple()
    report = orbit_congruence_classes(labels)
    for cls in report.classes:
        geometry = report.geometry[cls]
        emit(
            {
                "class": list(cls),
                "classification": geometry.tet_class.value,
                "volume": geometry.volume,
                "mu1": geometry.mu1,
                "mu2": geometry.mu2,
                "total_length": geometry.total_length,
                "angles": list(geometry.angle_multiset) if geometry.angle_multiset else None,
            }
        )

    summary = {
        "summary": True,
        "labels": list(labels),
        "classes": len(report.classes),
        "mirror_classes": len(report.mirror_classes),
        "sixj_sign": report.sixj.sign,
        "sixj_radicand_num": str(report.sixj.radicand.numerator),
        "sixj_radicand_den": str(report.sixj.radicand.denominator),
        "invariance": None,
        "angle_transport": None,
    }
    if report.all_euclidean:
        invariance = invariance_report(labels)
        summary["invariance"] = {
            "volume": invariance.volume_constant,
            "mu1": invariance.mu1_constant,
            "total_length": invariance.length_constant,
            "sixj": invariance.sixj_constant,
            "mu2": invariance.mu2_constant,
            "holds": invariance.holds,
        }
        summary["angle_transport"] = {pair: angle_transport_check(labels, pair) for pair in PAIRS}
    else:
        logger.info(f"Orbit of {labels} is not entirely Euclidean; skipping geometric invariance")
    emit(summary)
    return EXIT_OK


def cmd_wigner(cfg):
    emit(asdict(rotation_sample(cfg.require("k"), cfg.require("beta"))))
    return EXIT_OK


def cmd_norm_demo(cfg):
    k = cfg.require("k")
    exact = section_norm_exact(k)
    quadrature = None
    if k <= config.ENGINE["quadrature_cap"]:
        quadrature = section_norm_quadrature(k)
    asymptote = section_norm_asymptote(k)
    emit(
        {
            "k": k,
            "exact_num": str(exact.numerator),
            "exact_den": str(exact.denominator),
            "exact": float(exact),
            "quadrature": quadrature,
            "asymptote": asymptote,
            "ratio": float(exact * 4 ** k) / math.sqrt(math.pi * k),
        }
    )
    return EXIT_OK


def cmd_plotscript(cfg):
    csv_path = cfg.require("csv_path")
    labels = cfg.sextuple()
    out = cfg.out or str(csv_path).rsplit(".", 1)[0] + "_plot.py"
    write_plot_script(csv_path, labels, out)
    emit({"script": out})
    return EXIT_OK


COMMANDS = {
    "exact": cmd_exact,
    "oracle": cmd_oracle,
    "series": cmd_series,
    "geom": cmd_geom,
    "regge": cmd_regge,
    "wigner": cmd_wigner,
    "norm-demo": cmd_norm_demo,
    "plotscript": cmd_plotscript,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--labels", help="comma-separated labels or edge lengths")
    common.add_argument("--k-min", type=int, default=1)
    common.add_argument("--k-max", type=int, default=1)
    common.add_argument("--k", type=int)
    common.add_argument("--beta", type=float)
    common.add_argument("--out", help="output path (standard output when omitted)")
    common.add_argument("--cache", help="JSONL cache of exact values (default $SIXJ_CACHE)")
    common.add_argument("--oracle-cap", type=int, help="per-label cap for the permutation-sum oracle")
    common.add_argument("--workers", type=int, help="process pool size for series runs")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--tolerance", action="append", metavar="KEY=VALUE", help="override a tolerance or engine setting")
    common.add_argument("--config", help="YAML file merged over the defaults")

    parser = argparse.ArgumentParser(prog="sixj", description="Exact SU(2) 6j-symbols and their asymptotics")
    subcommands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subcommands.add_parser(name, parents=[common])
        if name == "plotscript":
            sub.add_argument("csv_path", help="series CSV to plot")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            config.load_yaml_overrides(args.config)
        cfg = RunConfig.from_args(args)
        for override in cfg.tolerances:
            config.apply_tolerance_flag(override)
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (FaceViolation, NotEuclidean) as exc:
        logger.error(f"Geometric precondition failed: {exc}")
        return EXIT_GEOMETRY
    except (OSError, CacheMismatch) as exc:
        logger.error(f"I/O failure: {exc}")
        return EXIT_IO
    except (BadInput, Inadmissible, CapExceeded, DegenerateAngle, HalfIntegerResult, KeyError, ValueError, yaml.YAMLError) as exc:
        logger.error(f"Bad input: {exc}")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

import logging
from pathlib import Path

from errors import NotEuclidean
from geometry import EdgeLengths, volume
from recoupling import LabelSextuple

logger = logging.getLogger(__name__)

PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Exact 6j values for labels {labels} against the envelope +-sqrt(2/(3 pi V k^3))."""

import csv
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = {csv_path!r}
OUTPUT_PATH = {output_path!r}
VOLUME = {volume}

ks, exact, estimate = [], [], []
with open(CSV_PATH, newline="") as handle:
    for row in csv.DictReader(handle):
        ks.append(int(row["k"]))
        exact.append(float(row["exact"]))
        estimate.append(float(row["pr_theorem"]) if row["pr_theorem"] else float("nan"))

envelope = [math.sqrt(2 / (3 * math.pi * VOLUME * k ** 3)) for k in ks]

fig, ax = plt.subplots(figsize=(8, 5))
ax.plot(ks, envelope, color="grey", linewidth=1, label="envelope")
ax.plot(ks, [-x for x in envelope], color="grey", linewidth=1)
ax.plot(ks, estimate, color="tab:blue", linewidth=0.8, label="asymptotic")
ax.scatter(ks, exact, s=8, color="black", zorder=3, label="exact")
ax.set_xlabel("k")
ax.set_ylabel("6j-symbol")
ax.set_title("labels {labels}")
ax.legend()
fig.tight_layout()
fig.savefig(OUTPUT_PATH, dpi=150)
'''


def render_plot_script(csv_path, labels):
    labels = LabelSextuple(*labels)
    csv_path = str(csv_path)
    output_path = str(Path(csv_path).with_suffix(".png"))
    vol = volume(EdgeLengths.from_labels(labels))
    if vol <= 0:
        raise NotEuclidean(f"Labels {labels} span no volume; the envelope is undefined")
    return PLOT_TEMPLATE.format(
        labels=str(labels),
        csv_path=csv_path,
        output_path=output_path,
        volume=format(vol, ".17g"),
    )


def write_plot_script(csv_path, labels, out_path):
    script = render_plot_script(csv_path, labels)
    with open(out_path, "w", encoding="utf-8") as handle:
        handle.write(script)
    logger.info(f"Wrote plot script to {out_path}")
    return out_path

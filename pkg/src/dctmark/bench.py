"""Benchmark grid: visible quality per intensity, invisible quality, attack matrix."""
import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .attacks import default_suite, run_attack_matrix, attack
from .errors import ImageError
from .hvs import EdgeConfig, FactorConfig
from .imagecore import load_image
from .invisible import AlphaConfig, embed_invisible, extract_watermark
from .metrics import psnr
from .visible import PlacementSpec, embed_visible

INTENSITIES = (3, 10, 20)
COLUMNS = ("image", "operation", "params", "psnr_db", "match_fraction", "verdict")
IMAGE_SUFFIXES = (".png", ".bmp", ".jpg", ".jpeg")


@dataclass(frozen=True)
class BenchRow:
    image: str
    operation: str
    params: str
    psnr_db: float | None = None
    match_fraction: float | None = None
    verdict: str = ""

    def cells(self):
        def num(x, fmt):
            if x is None:
                return ""
            return "inf" if x == float("inf") else format(x, fmt)

        return (self.image, self.operation, self.params, num(self.psnr_db, ".2f"),
                num(self.match_fraction, ".4f"), self.verdict)


def resolve_images(entries, image_dir=None):
    """Map each entry (a path, or a bare name looked up in ``image_dir``) to a file."""
    found = {}
    for entry in entries:
        path = Path(entry)
        if path.is_file():
            found[path.stem] = path
            continue
        base = Path(image_dir) if image_dir else Path(".")
        for suffix in IMAGE_SUFFIXES:
            candidate = base / f"{entry}{suffix}"
            if candidate.is_file():
                found[entry] = candidate
                break
        else:
            raise ImageError(base / entry, "missing benchmark image")
    return found


def bench_image(
    name,
    cover,
    logo,
    mark,
    passphrase,
    factors=FactorConfig(),
    alphas=AlphaConfig(),
    edge=EdgeConfig(),
    suite=None,
    intensities=INTENSITIES,
    anchor="middle-center",
):
    rows = []
    for level in intensities:
        spec = PlacementSpec(anchor, logo.shape[1], logo.shape[0], level)
        marked = embed_visible(cover, logo, spec, factors, edge)
        rows.append(BenchRow(name, "visible", f"intensity={level} anchor={anchor}",
                             psnr(cover, marked)))

    marked = embed_invisible(cover, mark, passphrase, alphas)
    clean = extract_watermark(marked, cover, mark, passphrase, alphas)
    rows.append(BenchRow(name, "invisible",
                         f"alpha_dc={alphas.alpha_dc:g} alpha_ac={alphas.alpha_ac:g}",
                         psnr(cover, marked), clean.match_fraction, clean.verdict))

    suite = default_suite() if suite is None else suite
    for spec, res in zip(suite, run_attack_matrix(marked, cover, mark, passphrase, suite,
                                                  cfg=alphas)):
        rows.append(BenchRow(name, "attack", res.attack, psnr(cover, attack(marked, spec)),
                             res.match_fraction, res.verdict))
    return rows


def run_bench(paths, logo, mark, passphrase, **kw):
    rows = []
    for name, path in paths.items():
        rows.extend(bench_image(name, load_image(path), logo, mark, passphrase, **kw))
    return rows


def format_table(rows):
    cells = [COLUMNS] + [r.cells() for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(COLUMNS))]
    return "\n".join("  ".join(c[i].ljust(widths[i]) for i in range(len(c))).rstrip()
                     for c in cells)


def write_report(rows, path, columns=COLUMNS):
    """CSV, or JSON lines when the suffix is ``.jsonl``/``.json``."""
    path = Path(path)
    if path.suffix in (".jsonl", ".json"):
        with path.open("w") as fh:
            for row in rows:
                record = dict(zip(columns, row.cells() if hasattr(row, "cells") else row))
                fh.write(json.dumps(record) + "\n")
        return
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row.cells() if hasattr(row, "cells") else row)

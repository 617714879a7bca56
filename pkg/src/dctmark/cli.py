"""Command line interface.

Exit codes: 0 success (or authentic), 1 not authentic, 2 usage or I/O error.
"""
import logging
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .attacks import AttackSpec, KINDS, attack as apply_attack, default_suite, run_attack_matrix
from .config import load_run_config, load_suite
from .errors import WatermarkError
from .hvs import EdgeConfig, FactorConfig, SOBEL_THRESHOLD, EDGE_FRACTION
from .imagecore import load_image, save_image
from .invisible import AUTH_THRESHOLD, AlphaConfig, binarize, embed_invisible, extract_watermark
from .metrics import quality
from .samples import binary_mark, color_logo
from .visible import ANCHORS, PlacementSpec, embed_visible

log = logging.getLogger(__name__)

EXIT_OK, EXIT_NOT_AUTHENTIC, EXIT_ERROR = 0, 1, 2

_path_in = click.Path(dir_okay=False, path_type=Path)
_path_out = click.Path(dir_okay=False, writable=False, path_type=Path)


def factor_options(fn):
    defaults = FactorConfig()
    for name in ("beta_max", "beta_min", "alpha_max", "alpha_min"):
        fn = click.option(f"--{name.replace('_', '-')}", type=float,
                          default=getattr(defaults, name), show_default=True)(fn)
    fn = click.option("--edge-fraction", type=float, default=EDGE_FRACTION, show_default=True,
                      help="Share of strong-gradient pixels that makes an edge block.")(fn)
    fn = click.option("--sobel-threshold", type=float, default=SOBEL_THRESHOLD,
                      show_default=True)(fn)
    return fn


def alpha_options(fn):
    defaults = AlphaConfig()
    fn = click.option("--alpha-ac", type=float, default=defaults.alpha_ac, show_default=True)(fn)
    fn = click.option("--alpha-dc", type=float, default=defaults.alpha_dc, show_default=True)(fn)
    return fn


def _factors(kw):
    return FactorConfig(kw["alpha_min"], kw["alpha_max"], kw["beta_min"], kw["beta_max"])


def _edge(kw):
    return EdgeConfig(kw["sobel_threshold"], kw["edge_fraction"])


def _alphas(kw):
    return AlphaConfig(kw["alpha_dc"], kw["alpha_ac"])


def _load_mark(path):
    return binarize(load_image(path))


def _report(rows, path, columns=None):
    if path is None:
        return
    if columns is None:
        bench_mod.write_report(rows, path)
    else:
        bench_mod.write_report(rows, path, columns)
    log.info("wrote report %s", path)


class ConfigGroup(click.Group):
    """Group that pre-fills subcommand defaults from ``--config``."""

    def invoke(self, ctx):
        path = ctx.params.get("config")
        if path is not None:
            values = load_run_config(path)
            ctx.default_map = {}
            for name, cmd in self.commands.items():
                names = {p.name for p in cmd.params}
                ctx.default_map[name] = {
                    k.replace("-", "_"): v for k, v in values.items()
                    if k.replace("-", "_") in names
                }
        return super().invoke(ctx)


@click.group(cls=ConfigGroup)
@click.option("--config", type=_path_in, default=None,
              help="key = value file with defaults for any option; flags win.")
@click.option("-v", "--verbose", is_flag=True)
def cli(config, verbose):
    """Block-DCT visible and invisible image watermarking."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@cli.command("embed-visible")
@click.option("--cover", type=_path_in, required=True)
@click.option("--watermark", type=_path_in, required=True)
@click.option("--anchor", type=click.Choice(ANCHORS, case_sensitive=False),
              default="middle-center", show_default=True)
@click.option("--width", type=int, default=None, help="Target watermark width.")
@click.option("--height", type=int, default=None, help="Target watermark height.")
@click.option("--intensity", type=click.IntRange(1, 100), default=10, show_default=True)
@factor_options
@click.option("--out", type=_path_out, required=True)
@click.option("--report", type=_path_out, default=None)
def embed_visible_cmd(cover, watermark, anchor, width, height, intensity, out, report, **kw):
    """Fuse a visible logo into a cover image."""
    cover_img = load_image(cover)
    spec = PlacementSpec(anchor, width, height, intensity)
    marked = embed_visible(cover_img, load_image(watermark), spec, _factors(kw), _edge(kw))
    save_image(marked, out)
    q = quality(cover_img, marked)
    click.echo(f"wrote {out}  PSNR {q.psnr_text()} dB  MSE {q.mse:.4f}")
    _report([bench_mod.BenchRow(cover.stem, "visible", f"intensity={intensity} anchor={anchor}",
                                q.psnr_db)], report)
    return EXIT_OK


@cli.command("embed-invisible")
@click.option("--cover", type=_path_in, required=True)
@click.option("--watermark", type=_path_in, required=True,
              help="Binary watermark image (binarized at 128).")
@click.option("--key", required=True, help="Passphrase of 6-56 characters.")
@alpha_options
@click.option("--out", type=_path_out, required=True)
@click.option("--report", type=_path_out, default=None)
def embed_invisible_cmd(cover, watermark, key, out, report, **kw):
    """Embed a key-encrypted binary watermark invisibly."""
    cover_img = load_image(cover)
    marked = embed_invisible(cover_img, _load_mark(watermark), key, _alphas(kw))
    save_image(marked, out)
    q = quality(cover_img, marked)
    click.echo(f"wrote {out}  PSNR {q.psnr_text()} dB  MSE {q.mse:.4f}")
    _report([bench_mod.BenchRow(cover.stem, "invisible",
                                f"alpha_dc={kw['alpha_dc']:g} alpha_ac={kw['alpha_ac']:g}",
                                q.psnr_db)], report)
    return EXIT_OK


@cli.command("authenticate")
@click.option("--suspect", type=_path_in, required=True)
@click.option("--original", type=_path_in, required=True)
@click.option("--watermark", type=_path_in, required=True)
@click.option("--key", required=True)
@alpha_options
@click.option("--threshold", type=float, default=AUTH_THRESHOLD, show_default=True)
@click.option("--report", type=_path_out, default=None)
def authenticate_cmd(suspect, original, watermark, key, threshold, report, **kw):
    """Non-blind extraction and authentication of an invisible watermark."""
    decision = extract_watermark(load_image(suspect), load_image(original),
                                 _load_mark(watermark), key, _alphas(kw), threshold=threshold)
    click.echo(f"match_fraction {decision.match_fraction:.4f}")
    click.echo(f"reliable_count {decision.reliable_count}")
    click.echo(f"verdict {decision.verdict}")
    _report([bench_mod.BenchRow(suspect.stem, "authenticate", f"threshold={threshold:g}",
                                None, decision.match_fraction, decision.verdict)], report)
    return EXIT_OK if decision.authentic else EXIT_NOT_AUTHENTIC


@cli.command("metrics")
@click.option("--a", "a_path", type=_path_in, required=True)
@click.option("--b", "b_path", type=_path_in, required=True)
@click.option("--bit-depth", type=int, default=8, show_default=True)
@click.option("--report", type=_path_out, default=None)
def metrics_cmd(a_path, b_path, bit_depth, report):
    """MSE and PSNR between two images."""
    q = quality(load_image(a_path), load_image(b_path), bit_depth)
    click.echo(f"MSE {q.mse:g}, PSNR {q.psnr_text()}")
    _report([(a_path.name, b_path.name, f"{q.mse:g}", q.psnr_text())], report,
            ("a", "b", "mse", "psnr_db"))
    return EXIT_OK


@cli.command("attack")
@click.option("--in", "in_path", type=_path_in, required=True)
@click.option("--out", type=_path_out, required=True)
@click.option("--kind", type=click.Choice([k for k in KINDS if k != "composite"]),
              required=True)
@click.option("--quality", type=int, default=75, show_default=True)
@click.option("--levels", type=int, default=16, show_default=True)
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--fraction", type=float, default=0.25, show_default=True)
@click.option("--corner", default="top-left", show_default=True)
@click.option("--window", type=int, default=3, show_default=True)
@click.option("--displacement", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def attack_cmd(in_path, out, kind, **params):
    """Apply a single attack to an image."""
    spec = AttackSpec(kind, **params)
    save_image(apply_attack(load_image(in_path), spec), out)
    click.echo(f"wrote {out}  ({spec.label})")
    return EXIT_OK


@cli.command("attack-matrix")
@click.option("--watermarked", type=_path_in, required=True)
@click.option("--original", type=_path_in, required=True)
@click.option("--watermark", type=_path_in, required=True)
@click.option("--key", required=True)
@click.option("--suite", type=_path_in, default=None,
              help="Suite file; the built-in robustness suite when omitted.")
@alpha_options
@click.option("--csv", "csv_path", type=_path_out, default=Path("attack_matrix.csv"),
              show_default=True)
def attack_matrix_cmd(watermarked, original, watermark, key, suite, csv_path, **kw):
    """Attack a watermarked image with every suite entry and authenticate each result."""
    specs = load_suite(suite) if suite else default_suite()
    results = run_attack_matrix(load_image(watermarked), load_image(original),
                                _load_mark(watermark), key, specs, cfg=_alphas(kw))
    rows = [bench_mod.BenchRow(watermarked.stem, "attack", r.attack, None, r.match_fraction,
                               r.verdict) for r in results]
    click.echo(bench_mod.format_table(rows))
    bench_mod.write_report(rows, csv_path)
    return EXIT_OK


@cli.command("bench")
@click.option("--images", required=True,
              help="Comma-separated image paths or names found in --image-dir.")
@click.option("--image-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--logo", type=_path_in, default=None,
              help="Visible watermark; a built-in 100x100 logo when omitted.")
@click.option("--mark", type=_path_in, default=None,
              help="Binary watermark; a built-in text banner when omitted.")
@click.option("--key", default="benchmark-key", show_default=True)
@click.option("--intensities", default="3,10,20", show_default=True)
@click.option("--anchor", type=click.Choice(ANCHORS, case_sensitive=False),
              default="middle-center", show_default=True)
@click.option("--suite", type=_path_in, default=None)
@factor_options
@alpha_options
@click.option("--out", type=_path_out, default=Path("bench_report.csv"), show_default=True)
def bench_cmd(images, image_dir, logo, mark, key, intensities, anchor, suite, out, **kw):
    """Run the visible/invisible/attack grid over a set of benchmark images."""
    paths = bench_mod.resolve_images([s.strip() for s in images.split(",") if s.strip()],
                                     image_dir)
    rows = bench_mod.run_bench(
        paths,
        load_image(logo) if logo else color_logo(),
        _load_mark(mark) if mark else binary_mark(),
        key,
        factors=_factors(kw),
        alphas=_alphas(kw),
        edge=_edge(kw),
        suite=load_suite(suite) if suite else None,
        intensities=tuple(int(s) for s in intensities.split(",")),
        anchor=anchor,
    )
    click.echo(bench_mod.format_table(rows))
    bench_mod.write_report(rows, out)
    click.echo(f"wrote {out}")
    return EXIT_OK


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name="dctmark", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_ERROR
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_ERROR
    except (WatermarkError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_ERROR
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

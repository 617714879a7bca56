import os
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from dctmark.bench import resolve_images
from dctmark.imagecore import load_image
from dctmark.samples import binary_mark

BENCH_NAMES = ("lena", "f16", "mandril", "pepper")

# Bundled scikit-image photos standing in for the classic test set when the
# originals are not available locally.
STAND_INS = {
    "lena": "astronaut",  # 512x512 portrait
    "f16": "rocket",  # vehicle against open sky
    "mandril": "chelsea",  # animal fur texture
    "pepper": "coffee",  # saturated food colors
}


def _stand_in(name):
    from skimage import data

    arr = getattr(data, STAND_INS[name])()
    im = Image.fromarray(arr).convert("RGB").resize((512, 512), Image.LANCZOS)
    return np.asarray(im, dtype=np.uint8).copy()


def load_benchmarks():
    """``{name: uint8 RGB}``, from ``$DCTMARK_BENCH_DIR`` if it holds all four."""
    root = os.environ.get("DCTMARK_BENCH_DIR")
    if root and Path(root).is_dir():
        paths = resolve_images(BENCH_NAMES, root)
        return {name: load_image(path) for name, path in paths.items()}
    return {name: _stand_in(name) for name in BENCH_NAMES}


def logo_100():
    from skimage import data

    im = Image.fromarray(data.logo())
    bg = Image.new("RGBA", im.size, (255, 255, 255, 255))
    im = Image.alpha_composite(bg, im).convert("RGB").resize((100, 100), Image.LANCZOS)
    return np.asarray(im, dtype=np.uint8).copy()


@pytest.fixture(scope="session")
def benchmarks():
    return load_benchmarks()


@pytest.fixture(scope="session")
def logo():
    return logo_100()


@pytest.fixture(scope="session")
def mark():
    return binary_mark()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

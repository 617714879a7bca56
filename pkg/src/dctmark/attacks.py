"""Robustness attacks (Stirmark-style approximations) and the attack matrix.

Every attack keeps the image dimensions so the non-blind extractor can
compare the result block-for-block with the original cover.
"""
import io
from dataclasses import dataclass, field, replace

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import ConfigError
from .imagecore import channels, to_gray, to_uint8
from .invisible import extract_watermark

KINDS = ("jpeg", "gray-quantize", "blur", "crop", "median", "jitter", "composite")
CORNERS = ("top-left", "top-right", "bottom-left", "bottom-right")


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    quality: int = 75
    levels: int = 16
    radius: float = 1.0
    fraction: float = 0.25
    corner: str = "top-left"
    window: int = 3
    displacement: int = 1
    seed: int = 0
    steps: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown attack kind {self.kind!r}; choose from {KINDS}")
        if self.kind == "jpeg" and not 1 <= self.quality <= 100:
            raise ConfigError(f"jpeg quality must be 1-100, got {self.quality}")
        if self.kind == "gray-quantize" and not (
            2 <= self.levels <= 256 and 256 % self.levels == 0
        ):
            raise ConfigError(f"levels must divide 256, got {self.levels}")
        if self.kind == "blur" and self.radius <= 0:
            raise ConfigError(f"blur radius must be positive, got {self.radius}")
        if self.kind == "crop":
            if not 0 < self.fraction < 1:
                raise ConfigError(f"crop fraction must be in (0, 1), got {self.fraction}")
            if self.corner not in CORNERS:
                raise ConfigError(f"crop corner must be one of {CORNERS}")
        if self.kind == "median" and (self.window < 1 or self.window % 2 == 0):
            raise ConfigError(f"median window must be odd and positive, got {self.window}")
        if self.kind == "jitter" and self.displacement < 0:
            raise ConfigError(f"jitter displacement must be >= 0, got {self.displacement}")
        if self.kind != "composite" and self.steps:
            raise ConfigError("only composite attacks take steps")

    @property
    def label(self):
        if self.kind == "composite":
            return " + ".join(s.label for s in self.steps) or "identity"
        detail = {
            "jpeg": f"q={self.quality}",
            "gray-quantize": f"levels={self.levels}",
            "blur": f"r={self.radius:g} sigma={blur_sigma(self.radius):g}",
            "crop": f"{self.fraction:g} {self.corner}",
            "median": f"{self.window}x{self.window}",
            "jitter": f"d={self.displacement} seed={self.seed}",
        }[self.kind]
        return f"{self.kind} {detail}"


def _per_channel(img, fn):
    if channels(img) == 1:
        return fn(img.astype(np.float64))
    return np.stack([fn(img[..., k].astype(np.float64)) for k in range(3)], axis=-1)


def jpeg(img, quality):
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, format="JPEG", quality=int(quality))
    buf.seek(0)
    with Image.open(buf) as im:
        return np.asarray(im.convert(img.ndim == 2 and "L" or "RGB"), dtype=np.uint8).copy()


def gray_quantize(img, levels):
    step = 256 // levels
    gray = to_gray(img).astype(np.int32)
    q = (gray // step * step + step // 2).astype(np.uint8)
    if channels(img) == 3:
        return np.repeat(q[..., None], 3, axis=-1)
    return q


def blur_sigma(radius):
    """Gaussian sigma for a kernel of half-width ``radius`` (OpenCV's default rule)."""
    return 0.3 * (radius - 1) + 0.8


def blur(img, radius):
    """Gaussian blur with a ``(2r+1) x (2r+1)`` kernel."""
    half = max(1, int(round(radius)))
    sigma = blur_sigma(radius)
    return to_uint8(
        _per_channel(
            img, lambda p: ndimage.gaussian_filter(p, sigma=sigma, radius=half, mode="nearest")
        )
    )


def crop(img, fraction, corner="top-left"):
    h, w = img.shape[:2]
    side = np.sqrt(fraction)
    ch, cw = int(round(h * side)), int(round(w * side))
    rows = slice(0, ch) if corner.startswith("top") else slice(h - ch, h)
    cols = slice(0, cw) if corner.endswith("left") else slice(w - cw, w)
    out = img.copy()
    out[rows, cols] = 128
    return out


def median(img, window):
    return to_uint8(
        _per_channel(img, lambda p: ndimage.median_filter(p, size=window, mode="nearest"))
    )


def jitter(img, displacement, seed):
    """Resample every pixel from a random point within ``displacement`` pixels.

    Displacements are uniform over the disk of that radius and sampled
    bilinearly, with edge replication at the borders.
    """
    h, w = img.shape[:2]
    rng = np.random.default_rng(seed)
    angle = rng.uniform(0.0, 2 * np.pi, size=(h, w))
    length = displacement * np.sqrt(rng.uniform(0.0, 1.0, size=(h, w)))
    rows = np.arange(h)[:, None] + length * np.sin(angle)
    cols = np.arange(w)[None, :] + length * np.cos(angle)
    return to_uint8(
        _per_channel(
            img, lambda p: ndimage.map_coordinates(p, [rows, cols], order=1, mode="nearest")
        )
    )


def attack(img, spec):
    img = np.asarray(img, dtype=np.uint8)
    kind = spec.kind
    if kind == "jpeg":
        return jpeg(img, spec.quality)
    if kind == "gray-quantize":
        return gray_quantize(img, spec.levels)
    if kind == "blur":
        return blur(img, spec.radius)
    if kind == "crop":
        return crop(img, spec.fraction, spec.corner)
    if kind == "median":
        return median(img, spec.window)
    if kind == "jitter":
        return jitter(img, spec.displacement, spec.seed)
    out = img.copy()
    for step in spec.steps:
        out = attack(out, step)
    return out


def composite(*steps):
    return AttackSpec("composite", steps=tuple(steps))


def default_suite(seed=0):
    """The robustness matrix rows, with the parameters used for each."""
    return [
        AttackSpec("jpeg", quality=75),
        AttackSpec("gray-quantize", levels=16),
        composite(AttackSpec("gray-quantize", levels=256), AttackSpec("jpeg", quality=75)),
        composite(AttackSpec("blur", radius=1.0), AttackSpec("jpeg", quality=75)),
        AttackSpec("crop", fraction=0.25),
        AttackSpec("median", window=3),
        AttackSpec("jitter", displacement=1, seed=seed),
    ]


@dataclass(frozen=True)
class AttackResult:
    attack: str
    match_fraction: float
    reliable_count: int
    verdict: str

    @property
    def survived(self):
        return self.verdict == "authentic"


def run_attack_matrix(watermarked, original, bits, passphrase, suite, **extract_kw):
    rows = []
    for spec in suite:
        attacked = attack(watermarked, spec)
        decision = extract_watermark(attacked, original, bits, passphrase, **extract_kw)
        rows.append(
            AttackResult(spec.label, decision.match_fraction, decision.reliable_count,
                         decision.verdict)
        )
    return rows


def with_seed(spec, seed):
    """Copy of ``spec`` (recursively for composites) with jitter seeds replaced."""
    if spec.kind == "composite":
        return replace(spec, steps=tuple(with_seed(s, seed) for s in spec.steps))
    if spec.kind == "jitter":
        return replace(spec, seed=seed)
    return spec

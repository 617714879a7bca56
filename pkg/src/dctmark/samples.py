"""Synthetic default watermarks used when the caller supplies none."""
import numpy as np
from PIL import Image, ImageDraw


def color_logo(size=100):
    """A 100x100 colored ring-and-bar logo on white."""
    im = Image.new("RGB", (size, size), (255, 255, 255))
    draw = ImageDraw.Draw(im)
    s = size
    draw.ellipse([s * 0.08, s * 0.08, s * 0.92, s * 0.92], fill=(0, 87, 63))
    draw.ellipse([s * 0.22, s * 0.22, s * 0.78, s * 0.78], fill=(255, 255, 255))
    draw.rectangle([s * 0.44, s * 0.15, s * 0.56, s * 0.85], fill=(200, 30, 40))
    draw.rectangle([s * 0.15, s * 0.44, s * 0.85, s * 0.56], fill=(20, 60, 200))
    return np.asarray(im, dtype=np.uint8).copy()


def binary_mark(width=128, height=64, text="dctmark"):
    """A 0/1 text banner."""
    im = Image.new("L", (width, height), 0)
    draw = ImageDraw.Draw(im)
    draw.rectangle([1, 1, width - 2, height - 2], outline=255, width=3)
    box = draw.textbbox((0, 0), text)
    tw, th = box[2] - box[0], box[3] - box[1]
    draw.text(((width - tw) / 2 - box[0], (height - th) / 2 - box[1]), text, fill=255)
    return (np.asarray(im) >= 128).astype(np.uint8)

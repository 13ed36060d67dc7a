import pathlib

import numpy as np
import pytest

from lscstego.media import Image

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_image(rng, width, height, maxval=255):
    pixels = rng.integers(0, maxval + 1, size=width * height)
    return Image(width=width, height=height, maxval=maxval,
                 pixels=tuple(int(p) for p in pixels))


def natural_cover(rng, width, height, even_bias=0.3):
    """Synthetic cover with natural-looking statistics: a smooth ramp
    plus noise, with the LSBs biased toward even values so that the
    pair histogram shows the skew of an untouched photo."""
    yy, xx = np.mgrid[0:height, 0:width]
    base = 60 + 120 * (xx + yy) / (width + height)
    noise = rng.normal(0, 25, size=(height, width))
    vals = np.clip(base + noise, 0, 255).astype(np.int64)
    drop = rng.random(size=(height, width)) < even_bias
    vals[drop] &= ~1
    return Image(width=width, height=height, maxval=255,
                 pixels=tuple(int(v) for v in vals.ravel()))

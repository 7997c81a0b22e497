"""Minimal PGM/PPM raster I/O (the only raster formats used on disk).

Maps are written as 8-bit binary graymaps (P5, maxval 255) by rounding
v * 255 of a [0, 1] map; images as binary pixmaps (P6). Reading returns
float64 arrays scaled back to [0, 1]. Quantization happens only at this
boundary; the pipeline itself stays in double precision.
"""

import numpy as np

from .validation import as_map, as_rgb_image


def _quantize(values):
    return np.clip(np.rint(values * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path, m):
    """Write a [0, 1] map as binary PGM; values outside [0, 1] are clipped."""
    m = as_map(m)
    h, w = m.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(_quantize(m).tobytes())


def write_ppm(path, rgb):
    """Write an H x W x 3 [0, 1] image as binary PPM."""
    rgb = as_rgb_image(rgb)
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(_quantize(rgb).tobytes())


def _read_tokens(fh, count):
    """Read whitespace-separated header tokens, skipping # comments."""
    tokens = []
    while len(tokens) < count:
        line = fh.readline()
        if not line:
            raise ValueError("unexpected end of file in netpbm header")
        stripped = line.split(b"#", 1)[0]
        tokens.extend(stripped.split())
    return tokens[:count]


def _read_netpbm(path, magics):
    with open(path, "rb") as fh:
        magic = fh.read(2)
        if magic not in magics:
            raise ValueError(f"{path}: unsupported netpbm magic {magic!r}")
        w, h, maxval = (int(t) for t in _read_tokens(fh, 3))
        if not (1 <= maxval <= 255):
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        channels = 3 if magic in (b"P6", b"P3") else 1
        n = w * h * channels
        if magic in (b"P5", b"P6"):
            raw = fh.read(n)
            if len(raw) != n:
                raise ValueError(f"{path}: truncated pixel data")
            data = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
        else:
            text = fh.read().split()
            if len(text) < n:
                raise ValueError(f"{path}: truncated pixel data")
            data = np.array([int(t) for t in text[:n]], dtype=np.float64)
    data /= maxval
    if channels == 3:
        return data.reshape(h, w, 3)
    return data.reshape(h, w)


def read_pgm(path):
    """Read a P5/P2 graymap as a [0, 1] float map."""
    return _read_netpbm(path, (b"P5", b"P2"))


def read_ppm(path):
    """Read a P6/P3 pixmap as an H x W x 3 [0, 1] float image."""
    return _read_netpbm(path, (b"P6", b"P3"))

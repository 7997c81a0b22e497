"""Reader/writer for the DRF binary feature interchange file.

Layout (little-endian):

    magic "DRF1"                      4 bytes
    backbone code                     u32   (0=vgg16, 1=vgg19, 2=mobilenetv2, 3=toy)
    image_height, image_width         u32, u32
    layer_count                       u32
    per layer:
        layer_id                      u32
        group_id                      u8
        H, W, C                       u32, u32, u32
        payload                       H*W*C float32, row-major, channels fastest

Payloads are stored in single precision and promoted to float64 on read.
"""

import io
import struct

import numpy as np

from .features import (
    BACKBONE_CODES,
    BACKBONE_FROM_CODE,
    FeatureStack,
    FeatureTensor,
    layer_selection,
)

MAGIC = b"DRF1"

_HEADER = struct.Struct("<4sIIII")
_LAYER = struct.Struct("<IBIII")


class DrfError(ValueError):
    """Raised on malformed DRF content."""


def write_drf(stack, destination):
    """Write a validated FeatureStack; returns the number of bytes written.

    ``destination`` is a path or a writable binary stream.
    """
    stack.validate()
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "wb") as fh:
            return _write(stack, fh)
    return _write(stack, destination)


def _write(stack, fh):
    n = fh.write(
        _HEADER.pack(
            MAGIC,
            BACKBONE_CODES[stack.backbone],
            stack.image_height,
            stack.image_width,
            len(stack.tensors),
        )
    )
    for t in stack.tensors:
        n += fh.write(_LAYER.pack(t.layer_id, t.group_id, t.height, t.width, t.channels))
        payload = np.ascontiguousarray(t.data, dtype="<f4")
        n += fh.write(payload.tobytes())
    return n


def read_drf(source):
    """Parse a DRF stream or file into a validated FeatureStack."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            return _read(fh)
    return _read(source)


def _read_exact(fh, n, what):
    buf = fh.read(n)
    if len(buf) != n:
        raise DrfError(f"truncated file while reading {what}")
    return buf


def _read(fh):
    magic, code, img_h, img_w, layer_count = _HEADER.unpack(
        _read_exact(fh, _HEADER.size, "header")
    )
    if magic != MAGIC:
        raise DrfError(f"bad magic {magic!r}")
    if code not in BACKBONE_FROM_CODE:
        raise DrfError(f"unknown backbone code {code}")
    backbone = BACKBONE_FROM_CODE[code]

    table = layer_selection(backbone)
    if layer_count != len(table.all_layers):
        raise DrfError(
            f"layer_count {layer_count} does not match the {backbone} "
            f"table ({len(table.all_layers)} layers)"
        )

    tensors = []
    for i in range(layer_count):
        layer_id, group_id, h, w, c = _LAYER.unpack(
            _read_exact(fh, _LAYER.size, f"layer record {i}")
        )
        if min(h, w, c) < 1:
            raise DrfError(f"layer {layer_id} has empty dimensions {h}x{w}x{c}")
        payload = _read_exact(fh, h * w * c * 4, f"layer {layer_id} payload")
        data = np.frombuffer(payload, dtype="<f4").reshape(h, w, c)
        if not np.all(np.isfinite(data)):
            raise DrfError(f"layer {layer_id} payload contains non-finite values")
        expected_group = table.group_of(layer_id) if layer_id in table.all_layers else None
        if expected_group is None or expected_group != group_id:
            raise DrfError(
                f"layer {layer_id} with group {group_id} inconsistent with "
                f"the {backbone} table"
            )
        tensors.append(FeatureTensor(layer_id, group_id, data.astype(np.float64)))

    stack = FeatureStack(backbone, img_h, img_w, tensors)
    stack.validate()
    return stack


def drf_bytes(stack):
    """Serialize a stack to bytes (convenience for tests and pipes)."""
    buf = io.BytesIO()
    write_drf(stack, buf)
    return buf.getvalue()

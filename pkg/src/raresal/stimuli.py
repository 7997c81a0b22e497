"""Synthetic pop-out scenes: a grid of bars with one odd singleton.

Each scene is a rows x cols grid of identical anti-aliased bars on a
mid-gray background, except for a single target element that differs in
hue (color), angle (orientation), or scale (size). Color singletons are
isoluminant: hues live on a circle of fixed chroma in the opponent color
plane around the background gray, so a hue rotation changes chromaticity
only and the chromatic difference grows monotonically with the rotation
angle. Orientation and size scenes use a fixed blue bar whose luminance
contrast feeds the edge channels.

Ground-truth masks mark each element's site as a disc around its center,
so the masks are identical across hue/orientation sweeps and partition
the image exactly. Everything is deterministic given (spec, seed); the
seed drives only the target cell (when not pinned) and small per-element
position jitter.
"""

from dataclasses import dataclass, replace

import numpy as np

from .metrics import SingletonGroundTruth

SUPERSAMPLE = 4

DELTA_RANGES = {
    "color": (0.0, 180.0),
    "orientation": (0.0, 90.0),
    "size": (0.25, 4.0),
}

BACKGROUND_GRAY = 0.5
BASE_HUE_DEG = 0.0  # distractor sits on the red-green opponent axis
CHROMA = 0.45
JITTER = 2.0
DITHER = 0.02  # uniform per-pixel dither; smooths histogram populations

# orthonormal zero-sum chroma directions (red-green, blue-yellow)
_U = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
_V = np.array([1.0, 1.0, -2.0]) / np.sqrt(6.0)

BAR_COLOR = np.array([0.1, 0.1, 0.9])  # orientation/size scenes


@dataclass(frozen=True)
class StimulusSpec:
    kind: str
    delta: float
    grid: tuple = (5, 8)
    element_size: int = 24
    target_cell: tuple = None
    seed: int = 0
    height: int = 240
    width: int = 320

    def validate(self):
        if self.kind not in DELTA_RANGES:
            raise ValueError(f"kind must be one of {sorted(DELTA_RANGES)}")
        lo, hi = DELTA_RANGES[self.kind]
        if not lo <= self.delta <= hi:
            raise ValueError(
                f"{self.kind} delta {self.delta} outside [{lo}, {hi}]"
            )
        rows, cols = self.grid
        if rows < 1 or cols < 1:
            raise ValueError("grid must have at least one cell")
        if self.element_size < 4:
            raise ValueError("element_size must be >= 4")
        if self.target_cell is not None:
            r, c = self.target_cell
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"target_cell {self.target_cell} off the grid")
        cell = min(self.height // rows, self.width // cols)
        if 2 * _site_radius(self.element_size, self._max_ratio()) >= cell:
            raise ValueError(
                "element too large for the grid: element sites must fit "
                "inside their cells"
            )
        return self

    def _max_ratio(self):
        return self.delta if self.kind == "size" and self.delta > 1 else 1.0


@dataclass
class Stimulus:
    image: np.ndarray
    ground_truth: SingletonGroundTruth
    spec: StimulusSpec
    target_cell: tuple = None


def _site_radius(element_size, ratio=1.0):
    """Radius of the disc covering a jittered bar of this size at any angle."""
    length = element_size * ratio
    width = _bar_width(element_size) * ratio
    return float(np.hypot(length / 2.0, width / 2.0)) + JITTER + 1.0


def _bar_width(element_size):
    return max(2.0, element_size / 3.0)


def isoluminant_color(hue_degrees, chroma=CHROMA):
    """RGB on the isoluminant hue circle around the background gray."""
    theta = np.deg2rad(hue_degrees)
    rgb = BACKGROUND_GRAY + chroma * (np.cos(theta) * _U + np.sin(theta) * _V)
    if rgb.min() < 0.0 or rgb.max() > 1.0:
        raise ValueError(f"chroma {chroma} leaves the RGB cube")
    return rgb


def _bar_coverage(cell_h, cell_w, cy, cx, length, width, angle_degrees):
    """Anti-aliased coverage of a rotated capsule bar inside one cell patch.

    Rounded ends keep the end-edge normals spread over all directions, so
    bar terminators do not imitate the edge signature of a rotated bar.
    """
    ss = SUPERSAMPLE
    ys = (np.arange(cell_h * ss) + 0.5) / ss
    xs = (np.arange(cell_w * ss) + 0.5) / ss
    yy = ys[:, None] - cy
    xx = xs[None, :] - cx
    theta = np.deg2rad(angle_degrees)
    # bar long axis is vertical at angle 0
    along = np.cos(theta) * yy + np.sin(theta) * xx
    across = -np.sin(theta) * yy + np.cos(theta) * xx
    half = max(0.0, (length - width) / 2.0)
    dist = np.hypot(np.maximum(np.abs(along) - half, 0.0), across)
    inside = dist <= width / 2.0
    cov = inside.astype(np.float64)
    return cov.reshape(cell_h, ss, cell_w, ss).mean(axis=(1, 3))


def generate(spec):
    """Render one pop-out scene with its ground-truth masks."""
    spec.validate()
    rows, cols = spec.grid
    rng = np.random.default_rng(spec.seed)
    if spec.target_cell is not None:
        target_cell = tuple(spec.target_cell)
    else:
        target_cell = (int(rng.integers(rows)), int(rng.integers(cols)))
    # rng draws do not depend on kind/delta, so sweeps share geometry
    jitter = rng.uniform(-JITTER, JITTER, size=(rows, cols, 2))
    dither = rng.uniform(-DITHER, DITHER, size=(spec.height, spec.width, 3))

    image = np.full((spec.height, spec.width, 3), BACKGROUND_GRAY)
    target_mask = np.zeros((spec.height, spec.width), dtype=bool)
    distractor_mask = np.zeros_like(target_mask)

    if spec.kind == "color":
        base_color = isoluminant_color(BASE_HUE_DEG)
        target_color = isoluminant_color(BASE_HUE_DEG + spec.delta)
    else:
        base_color = target_color = BAR_COLOR
    base_angle = 0.0
    base_len = float(spec.element_size)
    base_wid = _bar_width(spec.element_size)

    yy = np.arange(spec.height)[:, None]
    xx = np.arange(spec.width)[None, :]

    for r in range(rows):
        for c in range(cols):
            is_target = (r, c) == target_cell
            color, angle, length, width = base_color, base_angle, base_len, base_wid
            if is_target:
                if spec.kind == "color":
                    color = target_color
                elif spec.kind == "orientation":
                    angle = spec.delta
                else:
                    length = base_len * spec.delta
                    width = base_wid * spec.delta

            y0 = int(round(r * spec.height / rows))
            y1 = int(round((r + 1) * spec.height / rows))
            x0 = int(round(c * spec.width / cols))
            x1 = int(round((c + 1) * spec.width / cols))
            ch, cw = y1 - y0, x1 - x0
            cy = ch / 2.0 + jitter[r, c, 0]
            cx = cw / 2.0 + jitter[r, c, 1]
            cov = _bar_coverage(ch, cw, cy, cx, length, width, angle)
            patch = image[y0:y1, x0:x1]
            patch += cov[:, :, None] * (color[None, None, :] - patch)

            radius = _site_radius(spec.element_size, length / base_len)
            disc = ((yy - (y0 + cy)) ** 2 + (xx - (x0 + cx)) ** 2) <= radius**2
            if is_target:
                target_mask |= disc
            else:
                distractor_mask |= disc

    image = np.clip(image + dither, 0.0, 1.0)
    background_mask = ~(target_mask | distractor_mask)
    gt = SingletonGroundTruth(target_mask, distractor_mask, background_mask)
    return Stimulus(image=image, ground_truth=gt, spec=spec, target_cell=target_cell)


def sweep(kind, deltas, base_spec):
    """Generate one stimulus per delta with everything else held fixed."""
    if len(deltas) == 0:
        raise ValueError("deltas must be nonempty")
    return [generate(replace(base_spec, kind=kind, delta=float(d))) for d in deltas]


def write_stimulus(stim, out_dir, stem):
    """Write image (PPM), masks (PGM) and a key=value sidecar; returns paths."""
    import os

    from .netpbm import write_pgm, write_ppm

    os.makedirs(out_dir, exist_ok=True)
    spec = stim.spec
    paths = {}
    paths["image"] = os.path.join(out_dir, f"{stem}.ppm")
    write_ppm(paths["image"], stim.image)
    for name, mask in (
        ("target", stim.ground_truth.target_mask),
        ("distractor", stim.ground_truth.distractor_mask),
        ("background", stim.ground_truth.background_mask),
    ):
        paths[name] = os.path.join(out_dir, f"{stem}_{name}.pgm")
        write_pgm(paths[name], mask.astype(np.float64))
    paths["spec"] = os.path.join(out_dir, f"{stem}.spec")
    rows, cols = spec.grid
    tr, tc = stim.target_cell
    with open(paths["spec"], "w", encoding="ascii") as fh:
        fh.write(f"kind={spec.kind}\n")
        fh.write(f"delta={spec.delta:g}\n")
        fh.write(f"grid={rows}x{cols}\n")
        fh.write(f"element_size={spec.element_size}\n")
        fh.write(f"target_cell={tr},{tc}\n")
        fh.write(f"seed={spec.seed}\n")
        fh.write(f"height={spec.height}\n")
        fh.write(f"width={spec.width}\n")
    return paths

"""Batch command line: predict saliency, evaluate predictions, generate scenes.

    raresal run  --features <dir|file.drf> [--out DIR] [pipeline flags]
    raresal run  --images <dir|file.ppm> --backbone toy [--out DIR] [...]
    raresal eval --pred DIR --gt DIR --metrics cc,kl,... --out report.csv
    raresal gen  --kind color --deltas 30,90,180 --out DIR [...]

Exit codes: 0 success, 1 partial failure, 2 usage error.
"""

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import drf, metrics, netpbm, stimuli
from .fusion import (
    DEFAULT_GROUP_WEIGHTS,
    DEFAULT_THRESHOLDS,
    FusionConfig,
    export_decomposition,
    multi_threshold_saliency,
)
from .postprocess import PostprocessConfig, finalize
from .toy import extract_toy_features

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _floats(text):
    return tuple(float(t) for t in text.split(",") if t != "")

def _ints_pair(text, sep):
    a, b = text.split(sep)
    return (int(a), int(b))


def _collect(path, suffix):
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(suffix))
        return [os.path.join(path, n) for n in names]
    return [path]


def _stem(path):
    return os.path.splitext(os.path.basename(path))[0]


def _build_configs(args):
    weights = (
        DEFAULT_GROUP_WEIGHTS if args.group_weights is None else args.group_weights
    )
    fcfg = FusionConfig(
        thresholds=args.thresholds,
        group_weights=weights,
        use_face=args.face,
        face_rarity=args.face_rarity,
        border_margin=args.border_margin,
        n_bins=args.n_bins,
    ).validate()
    pcfg = PostprocessConfig(
        sigma_fraction=args.sigma_fraction, square=not args.no_square
    ).validate()
    return fcfg, pcfg


def _run_one(job):
    """Process one input file; returns (path, error-or-None)."""
    path, is_image, fcfg, pcfg, out_dir, decompose = job
    try:
        if is_image:
            stack = extract_toy_features(netpbm.read_ppm(path))
        else:
            stack = drf.read_drf(path)
        raw = multi_threshold_saliency(stack, fcfg)
        sal = finalize(raw, pcfg, image_width=raw.shape[1])
        netpbm.write_pgm(os.path.join(out_dir, f"{_stem(path)}_sal.pgm"), sal)
        if decompose:
            export_decomposition(
                stack, fcfg, os.path.join(out_dir, f"{_stem(path)}_decomposition")
            )
        return path, None
    except Exception as exc:  # reported per file, run continues
        return path, f"{type(exc).__name__}: {exc}"


def cmd_run(args):
    if bool(args.features) == bool(args.images):
        print("run: exactly one of --features/--images is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        fcfg, pcfg = _build_configs(args)
    except ValueError as exc:
        print(f"run: {exc}", file=sys.stderr)
        return EXIT_USAGE

    source = args.features or args.images
    if not os.path.exists(source):
        print(f"run: input not found: {source}", file=sys.stderr)
        return EXIT_USAGE
    if args.images and args.backbone != "toy":
        print("run: only the toy backbone consumes images directly", file=sys.stderr)
        return EXIT_USAGE

    inputs = _collect(source, ".ppm" if args.images else ".drf")
    if not inputs:
        print(f"run: no inputs under {source}", file=sys.stderr)
        return EXIT_USAGE
    os.makedirs(args.out, exist_ok=True)

    jobs = [
        (p, bool(args.images), fcfg, pcfg, args.out, args.decompose) for p in inputs
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]

    failures = 0
    for path, err in results:
        if err is not None:
            failures += 1
            print(f"run: {path}: {err}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


_DENSITY_METRICS = ("cc", "kl", "sim")
_FIXATION_METRICS = ("nss", "aucj", "aucb")
_MASK_METRICS = ("gsi", "msrt", "msrb", "nfix")


def _read_fixations(path):
    pts = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            r, c = line.split(",")
            pts.append((int(r), int(c)))
    return pts


def _gt_paths(gt_dir, stem):
    return {
        "density": os.path.join(gt_dir, f"{stem}_density.pgm"),
        "fixations": os.path.join(gt_dir, f"{stem}_fixations.csv"),
        "target": os.path.join(gt_dir, f"{stem}_target.pgm"),
        "distractor": os.path.join(gt_dir, f"{stem}_distractor.pgm"),
        "background": os.path.join(gt_dir, f"{stem}_background.pgm"),
    }


def _load_masks(paths, shape):
    target = netpbm.read_pgm(paths["target"]) > 0.5
    distractor = netpbm.read_pgm(paths["distractor"]) > 0.5
    if os.path.exists(paths["background"]):
        background = netpbm.read_pgm(paths["background"]) > 0.5
    else:
        background = ~(target | distractor)
    return metrics.SingletonGroundTruth(target, distractor, background)


def _eval_image(pred, wanted, gt, args):
    """One row of metric values; undefined metrics become nan."""
    row = {}
    found_budget = f"found{args.budget}"
    for name in wanted:
        try:
            if name == "cc":
                row[name] = metrics.cc(pred, gt["density"])
            elif name == "kl":
                row[name] = metrics.kl_div(pred, gt["density"])
            elif name == "sim":
                row[name] = metrics.sim(pred, gt["density"])
            elif name == "nss":
                row[name] = metrics.nss(pred, gt["fixations"])
            elif name == "aucj":
                row[name] = metrics.auc_judd(pred, gt["fixations"])
            elif name == "aucb":
                row[name] = metrics.auc_borji(
                    pred, gt["fixations"], n_splits=args.splits, seed=args.seed
                )
            elif name == "gsi":
                row[name] = metrics.gsi(pred, gt["masks"])
            elif name == "msrt":
                row[name] = metrics.msr(pred, gt["masks"])[0]
            elif name == "msrb":
                row[name] = metrics.msr(pred, gt["masks"])[1]
            elif name in ("nfix", found_budget):
                if "_nfix" not in gt:
                    gt["_nfix"] = metrics.fixation_search(
                        pred,
                        gt["masks"].target_mask,
                        max_fix=args.max_fix,
                        ior_radius=args.ior_radius,
                    )
                n = gt["_nfix"]
                if name == "nfix":
                    row[name] = float("nan") if n is None else float(n)
                else:
                    row[name] = 100.0 if n is not None and n <= args.budget else 0.0
        except ValueError as exc:
            print(f"eval: warning: {name}: {exc}", file=sys.stderr)
            row[name] = float("nan")
    return row


def cmd_eval(args):
    wanted = [t.strip() for t in args.metrics.split(",") if t.strip()]
    found_budget = f"found{args.budget}"
    known = set(_DENSITY_METRICS + _FIXATION_METRICS + _MASK_METRICS) | {found_budget}
    unknown = [t for t in wanted if t not in known]
    if unknown:
        print(f"eval: unknown metrics {unknown}; known: {sorted(known)}", file=sys.stderr)
        return EXIT_USAGE

    preds = {}
    for p in _collect(args.pred, ".pgm"):
        stem = _stem(p)
        preds[stem[:-4] if stem.endswith("_sal") else stem] = p
    if not preds:
        print(f"eval: no predictions under {args.pred}", file=sys.stderr)
        return EXIT_PARTIAL

    rows = []
    failures = 0
    for stem in sorted(preds):
        try:
            pred = netpbm.read_pgm(preds[stem])
            paths = _gt_paths(args.gt, stem)
            gt = {}
            if any(m in _DENSITY_METRICS for m in wanted):
                gt["density"] = netpbm.read_pgm(paths["density"])
            if any(m in _FIXATION_METRICS for m in wanted):
                gt["fixations"] = _read_fixations(paths["fixations"])
            if any(m in _MASK_METRICS or m == found_budget for m in wanted):
                gt["masks"] = _load_masks(paths, pred.shape)
        except (OSError, ValueError) as exc:
            print(f"eval: {stem}: {type(exc).__name__}: {exc}", file=sys.stderr)
            failures += 1
            continue
        rows.append((stem, _eval_image(pred, wanted, gt, args)))

    if not rows:
        print("eval: no pred/gt stem matched", file=sys.stderr)
        return EXIT_PARTIAL

    with open(args.out, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image"] + wanted)
        for stem, row in rows:
            writer.writerow([stem] + [f"{row[m]:.6f}" for m in wanted])
        means = []
        for m in wanted:
            vals = [row[m] for _, row in rows if math.isfinite(row[m])]
            means.append(f"{np.mean(vals):.6f}" if vals else "nan")
        writer.writerow(["MEAN"] + means)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_gen(args):
    spec = stimuli.StimulusSpec(
        kind=args.kind,
        delta=0.0 if args.kind != "size" else 1.0,
        grid=args.grid,
        element_size=args.element_size,
        target_cell=args.target_cell,
        seed=args.seed,
        height=args.size[0],
        width=args.size[1],
    )
    try:
        scenes = stimuli.sweep(args.kind, args.deltas, spec)
    except ValueError as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for scene in scenes:
        stimuli.write_stimulus(
            scene, args.out, f"{args.kind}_{scene.spec.delta:g}"
        )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="raresal",
        description="Rarity-based saliency: batch prediction, evaluation, "
        "and pop-out stimulus generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute saliency maps")
    run.add_argument("--features", help="DRF file or directory of .drf files")
    run.add_argument("--images", help="PPM file or directory (toy backbone)")
    run.add_argument("--backbone", default="toy", choices=["toy"],
                     help="backbone for --images inputs")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--thresholds", type=_floats, default=DEFAULT_THRESHOLDS)
    run.add_argument("--face", action="store_true",
                     help="add the vgg16 face channel")
    run.add_argument("--face-rarity", action="store_true",
                     help="use the face channel's rarity, not its activation")
    run.add_argument("--group-weights", type=_floats, default=None,
                     help="5 comma-separated positive weights")
    run.add_argument("--border-margin", type=float, default=0.05)
    run.add_argument("--sigma-fraction", type=float, default=0.035)
    run.add_argument("--no-square", action="store_true")
    run.add_argument("--n-bins", type=int, default=11)
    run.add_argument("--decompose", action="store_true",
                     help="also write per-layer/group maps per threshold")
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("eval", help="score predictions against ground truth")
    ev.add_argument("--pred", required=True, help="directory of predicted PGMs")
    ev.add_argument("--gt", required=True, help="directory of ground truth")
    ev.add_argument("--metrics", default="cc,kl,sim,nss,aucj,aucb")
    ev.add_argument("--out", default="report.csv")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--splits", type=int, default=100)
    ev.add_argument("--budget", type=int, default=15,
                    help="fixation budget for the found<N> metric")
    ev.add_argument("--max-fix", type=int, default=100)
    ev.add_argument("--ior-radius", type=float, default=None)
    ev.set_defaults(func=cmd_eval)

    gen = sub.add_parser("gen", help="generate pop-out scenes")
    gen.add_argument("--kind", required=True,
                     choices=["color", "orientation", "size"])
    gen.add_argument("--deltas", type=_floats, required=True)
    gen.add_argument("--out", default=".")
    gen.add_argument("--grid", type=lambda s: _ints_pair(s, "x"), default=(5, 8))
    gen.add_argument("--element-size", type=int, default=24)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--size", type=lambda s: _ints_pair(s, "x"), default=(240, 320),
                     help="image size HxW")
    gen.add_argument("--target-cell", type=lambda s: _ints_pair(s, ","), default=None)
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

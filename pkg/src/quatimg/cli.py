"""Command-line harness: training, compression and experiment sweeps.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import statistics
import sys
from pathlib import Path

import numpy as np

from . import autoencoder, codec, imgio, metrics
from .errors import DataError, NumericalError, UsageError
from .represent import from_full_quaternion, to_full_quaternion

IMAGE_SUFFIXES = (".png", ".ppm", ".pnm")

DEFAULT_T_FRACS = (1 / 16, 1 / 8, 1 / 4, 1 / 2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _corpus_paths(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir()
                  if p.suffix.lower() in IMAGE_SUFFIXES)


def _load_train_config(path: str | None, seed: int | None) -> autoencoder.TrainConfig:
    values = {}
    if path:
        field_types = {f.name: f.type for f in
                       dataclasses.fields(autoencoder.TrainConfig)}
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line (need key=value): {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in field_types:
                raise UsageError(f"unknown training option {key!r}")
            if key in ("max_epochs", "seed", "max_pairs_per_image"):
                values[key] = int(value)
            elif key == "full_batch":
                values[key] = value.lower() in ("1", "true", "yes")
            else:
                values[key] = float(value)
    if seed is not None:
        values["seed"] = seed
    return autoencoder.TrainConfig(**values)


def _roundtrip_report(img, model, image_id="") -> metrics.QualityReport:
    q, meta = to_full_quaternion(img, model)
    recon = from_full_quaternion(q, meta, model)
    return metrics.evaluate(img, recon, image_id=image_id, mode="full")


def cmd_train(args) -> int:
    cfg = _load_train_config(args.config, args.seed)
    corpus_dir = Path(args.corpus)
    if not corpus_dir.is_dir():
        raise DataError(f"corpus directory not found: {corpus_dir}")
    paths = _corpus_paths(corpus_dir)
    manifest = imgio.split_corpus(paths, cfg.seed)
    out = Path(args.out)

    train_images = [imgio.load_image(p) for p in manifest.paths("train")]
    samples = autoencoder.extract_pairs(train_images, cfg)
    result = autoencoder.train_detailed(samples, cfg)
    out.write_bytes(autoencoder.save_model(result.model))
    imgio.save_manifest(manifest, args.manifest or out.with_suffix(".manifest.txt"))

    log_path = args.log or out.with_suffix(".loss.csv")
    with open(log_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss"])
        for epoch, loss in enumerate(result.loss_history):
            writer.writerow([epoch, repr(float(loss))])

    reports = [_roundtrip_report(imgio.load_image(p), result.model, p)
               for p in manifest.paths("test")]
    mean_psnr = statistics.fmean(r.psnr_db for r in reports)
    mean_ssim = statistics.fmean(r.ssim for r in reports)
    mean_mse = [statistics.fmean(getattr(r, f"mse_{c}") for r in reports)
                for c in "rgb"]
    print(f"trained on {len(samples)} pairs from {len(train_images)} images "
          f"({result.epochs_run} epochs, final loss {result.loss_history[-1]:.3e})")
    print(f"held-out ({len(reports)} images): PSNR {mean_psnr:.4f} dB, "
          f"SSIM {mean_ssim:.4f}, MSE r/g/b "
          f"{mean_mse[0]:.4f}/{mean_mse[1]:.4f}/{mean_mse[2]:.4f}")
    print(f"model written to {out}")
    return 0


def _require_model(args, mode: str):
    if mode == "pure":
        return None
    if not args.model:
        raise UsageError("--model is required for mode 'full'")
    return autoencoder.load_model(Path(args.model).read_bytes())


def cmd_compress(args) -> int:
    params = codec.CodecParams(args.block_size, args.rank, args.mode)
    model = _require_model(args, args.mode)
    img = imgio.load_image(args.image)
    blob, stats = codec.compress_with_stats(img, model, params)
    Path(args.out).write_bytes(blob)
    print(f"{args.out}: {len(blob)} bytes "
          f"(qsvd {stats.qsvd_seconds:.3f} s, "
          f"cr {metrics.raw_size_bytes(img) / len(blob):.3f})")
    if args.evaluate:
        recon = codec.decompress(blob, model)
        report = metrics.evaluate(img, recon, container_bytes=len(blob),
                                  image_id=str(args.image), mode=args.mode,
                                  n=args.block_size, t=args.rank)
        _print_report(report)
    return 0


def cmd_decompress(args) -> int:
    blob = Path(args.container).read_bytes()
    model = None
    if args.model:
        model = autoencoder.load_model(Path(args.model).read_bytes())
    img = codec.decompress(blob, model)
    imgio.save_image(img, args.out)
    print(f"{args.out}: {img.shape[1]}x{img.shape[0]}")
    return 0


def _print_report(r: metrics.QualityReport) -> None:
    cr = f"{r.cr:.4f}" if r.cr is not None else "-"
    print(f"psnr {r.psnr_db:.4f} dB  ssim {r.ssim:.6f}  "
          f"mse r/g/b {r.mse_r:.4f}/{r.mse_g:.4f}/{r.mse_b:.4f}  cr {cr}")


def cmd_eval(args) -> int:
    original = imgio.load_image(args.original)
    recon = imgio.load_image(args.reconstructed)
    _print_report(metrics.evaluate(original, recon))
    return 0


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _parse_frac_list(text: str) -> list[float]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "/" in item:
            num, den = item.split("/", 1)
            out.append(float(num) / float(den))
        else:
            out.append(float(item))
    return out


def _sweep_images(corpus: str) -> list[str]:
    path = Path(corpus)
    if path.is_dir():
        return [str(p) for p in _corpus_paths(path)]
    manifest = imgio.load_manifest(path)
    return manifest.paths("test")


def cmd_sweep(args) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    block_sizes = _parse_int_list(args.block_sizes)
    fracs = _parse_frac_list(args.t_fracs) if args.t_fracs else list(DEFAULT_T_FRACS)
    t_values = _parse_int_list(args.t_values) if args.t_values else None
    images = _sweep_images(args.corpus)
    if not images:
        raise UsageError(f"no images found in corpus {args.corpus!r}")
    model = None
    if "full" in modes:
        model = _require_model(args, "full")

    rows: list[metrics.QualityReport] = []
    with open(args.csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(metrics.CSV_COLUMNS)
        for path in images:
            img = imgio.load_image(path)
            for mode in modes:
                for n in block_sizes:
                    ts = t_values or sorted({max(1, round(f * n)) for f in fracs})
                    for t in ts:
                        if t > n:
                            raise UsageError(f"t={t} exceeds block size n={n}")
                        try:
                            report = _sweep_cell(img, model, mode, n, t,
                                                 path, args.reps)
                        except (DataError, NumericalError) as exc:
                            print(f"sweep: {path} mode={mode} n={n} t={t} "
                                  f"failed: {exc}", file=sys.stderr)
                            report = metrics.QualityReport(
                                mse_r=float("nan"), mse_g=float("nan"),
                                mse_b=float("nan"), psnr_db=float("nan"),
                                ssim=float("nan"), image_id=path, mode=mode,
                                n=n, t=t)
                        rows.append(report)
                        writer.writerow(report.csv_row())
        for summary in _sweep_summaries(rows):
            writer.writerow(summary.csv_row())
    print(f"{len(rows)} sweep rows written to {args.csv}")
    return 0


def _sweep_cell(img, model, mode, n, t, path, reps) -> metrics.QualityReport:
    params = codec.CodecParams(n, t, mode)
    use_model = model if mode == "full" else None
    blob, stats = codec.compress_with_stats(img, use_model, params)
    seconds = stats.qsvd_seconds
    if reps > 1:
        seconds = codec.time_block_qsvd(img, use_model, mode, n, reps=reps)
    recon = codec.decompress(blob, use_model)
    report = metrics.evaluate(img, recon, container_bytes=len(blob),
                              image_id=path, mode=mode, n=n, t=t)
    report.qsvd_seconds = seconds
    return report


def _sweep_summaries(rows: list[metrics.QualityReport]) -> list[metrics.QualityReport]:
    """Per-(mode, n, t) means over the successful per-image rows."""
    groups: dict[tuple[str, int, int], list[metrics.QualityReport]] = {}
    for r in rows:
        if np.isfinite(r.psnr_db):
            groups.setdefault((r.mode, r.n, r.t), []).append(r)
    out = []
    for (mode, n, t), members in sorted(groups.items()):
        out.append(metrics.QualityReport(
            image_id="__mean__", mode=mode, n=n, t=t,
            mse_r=statistics.fmean(r.mse_r for r in members),
            mse_g=statistics.fmean(r.mse_g for r in members),
            mse_b=statistics.fmean(r.mse_b for r in members),
            psnr_db=statistics.fmean(r.psnr_db for r in members),
            ssim=statistics.fmean(r.ssim for r in members),
            cr=statistics.fmean(r.cr for r in members if r.cr is not None),
            container_bytes=round(statistics.fmean(
                r.container_bytes for r in members)),
            qsvd_seconds=statistics.fmean(r.qsvd_seconds for r in members)))
    return out


def cmd_timing(args) -> int:
    block_sizes = _parse_int_list(args.block_sizes)
    model = _require_model(args, args.mode)
    img = imgio.load_image(args.image)
    seconds = {}
    for n in block_sizes:
        seconds[n] = codec.time_block_qsvd(img, model, args.mode, n,
                                           reps=args.reps)
        print(f"n={n:<4d} qsvd {seconds[n]:.4f} s")
    best = min(seconds, key=seconds.get)
    print(f"fastest block size: {best}")
    return 0


def cmd_split_corpus(args) -> int:
    paths = _corpus_paths(Path(args.corpus))
    manifest = imgio.split_corpus(paths, args.seed)
    imgio.save_manifest(manifest, args.out)
    n_train = len(manifest.paths("train"))
    print(f"{args.out}: {n_train} train / {len(manifest.entries) - n_train} test")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="quatimg")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the pixel-pair autoencoder")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--manifest")
    p.add_argument("--log")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("compress", help="compress one image")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=("full", "pure"), default="full")
    p.add_argument("--block-size", "-n", type=int, required=True)
    p.add_argument("--rank", "-t", type=int, required=True)
    p.add_argument("--model")
    p.add_argument("--evaluate", action="store_true")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode a container back to an image")
    p.add_argument("container")
    p.add_argument("--out", required=True)
    p.add_argument("--model")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("eval", help="quality report for two images")
    p.add_argument("original")
    p.add_argument("reconstructed")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="grid of (image, mode, n, t) runs to CSV")
    p.add_argument("--corpus", required=True,
                   help="image directory or manifest file (test split)")
    p.add_argument("--csv", required=True)
    p.add_argument("--model")
    p.add_argument("--modes", default="full,pure")
    p.add_argument("--block-sizes", default="32,64")
    p.add_argument("--t-fracs", help="comma list of t/n fractions, e.g. 1/16,1/8")
    p.add_argument("--t-values", help="comma list of explicit t values")
    p.add_argument("--reps", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("timing", help="QSVD-only seconds per block size")
    p.add_argument("image")
    p.add_argument("--mode", choices=("full", "pure"), default="full")
    p.add_argument("--model")
    p.add_argument("--block-sizes", default="16,32,64,128,256")
    p.add_argument("--reps", type=int, default=3)
    p.set_defaults(func=cmd_timing)

    p = sub.add_parser("split-corpus", help="write a seeded 60/40 manifest")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quatimg: usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"quatimg: data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"quatimg: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``frd <subcommand> ...``.

Exit status is 0 on success, 1 for usage errors (bad flags or config), and 2
for data errors, which are reported on stderr as ``<ErrorType>: <message>``.
JSON results go to stdout; progress logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import corruptions, interpret, metrics, ood
from .errors import FileError, FRDError
from .imageio import load_image_set, write_image_set
from .radiomics import FULL_CATALOG, FeatureCatalog, FeatureMatrix, extract_features, parse_families, parse_variants
from .wavelet import FilterVariant, get_kernel

log = logging.getLogger("frd")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    bins: int = 32
    wavelet: str = "haar"
    families: str = "all"
    variants: str = "all"
    size: int = 256
    percentile: float = 95.0
    epsilon: float = metrics.DEFAULT_EPSILON
    bandwidth: str = "median"
    metric: str = "frd"
    seed: int = 0
    workers: int = 1
    top_k: int = 20
    normalize: str = "a"


_FIELDS = {f.name: f for f in fields(RunConfig)}
_CHOICES = {
    "wavelet": ("haar", "coif1", "none"),
    "metric": tuple(m.value for m in metrics.Metric),
    "normalize": ("a", "joint"),
}


def read_config(path: str | Path) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror or exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value
    return out


def _convert(key: str, value):
    kind = type(getattr(RunConfig, key))
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise UsageError(f"invalid value for {key}: {value!r}") from None


def resolve_config(args: argparse.Namespace, env=None) -> RunConfig:
    """Flags override the config file, which overrides FRD_WORKERS and defaults."""
    env = os.environ if env is None else env
    from_file = read_config(args.config) if getattr(args, "config", None) else {}
    values = {}
    for key in _FIELDS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = _convert(key, flag)
        elif key in from_file:
            values[key] = _convert(key, from_file[key])
        elif key == "workers" and env.get("FRD_WORKERS"):
            values[key] = _convert(key, env["FRD_WORKERS"])
    cfg = RunConfig(**values)
    if cfg.workers < 1:
        raise UsageError(f"workers must be at least 1, got {cfg.workers}")
    if cfg.bins < 2:
        raise UsageError(f"bins must be at least 2, got {cfg.bins}")
    if cfg.size < 1:
        raise UsageError(f"size must be positive, got {cfg.size}")
    for key, allowed in _CHOICES.items():
        if getattr(cfg, key) not in allowed:
            raise UsageError(f"{key} must be one of {', '.join(allowed)}, got {getattr(cfg, key)!r}")
    return cfg


def _catalog(cfg: RunConfig) -> FeatureCatalog:
    variants = parse_variants(cfg.variants)
    if get_kernel(cfg.wavelet) is None:
        if variants is not None and any(v is not FilterVariant.Original for v in variants):
            raise UsageError("--wavelet none allows only the original variant")
        variants = [FilterVariant.Original]
    return FULL_CATALOG.subset(parse_families(cfg.families), variants)


def _emit(payload, path: str | None = None) -> None:
    text = json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if path:
        try:
            Path(path).write_text(text)
        except OSError:
            raise FileError(path, "cannot write report") from None
    sys.stdout.write(text)


def _load(path: str) -> FeatureMatrix:
    return FeatureMatrix.from_csv(path)


# ---------------------------------------------------------------- subcommands


def cmd_extract(args, cfg: RunConfig) -> None:
    catalog = _catalog(cfg)
    kernel = get_kernel(cfg.wavelet)
    images = load_image_set(args.input, cfg.size, args.bit_depth, workers=cfg.workers)
    log.info("loaded %d images from %s", len(images), args.input)
    fm = extract_features(images, catalog, cfg.bins, kernel, workers=cfg.workers)
    fm.to_csv(args.output)
    log.info("wrote %d x %d features to %s", fm.n, fm.m, args.output)


def cmd_distance(args, cfg: RunConfig) -> None:
    ref, test = _load(args.ref), _load(args.test)
    bandwidth = cfg.bandwidth if cfg.bandwidth == "median" else _convert_float("bandwidth", cfg.bandwidth)
    result = metrics.distance(ref, test, cfg.metric, epsilon=cfg.epsilon, bandwidth=bandwidth)
    _emit(result.to_dict())


def _convert_float(name: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise UsageError(f"--{name} must be a number or 'median', got {value!r}") from None


def cmd_ood_detect(args, cfg: RunConfig) -> None:
    report = ood.detect(_load(args.test), _load(args.ref), cfg.percentile)
    _emit(report.to_dict(), args.report)


def cmd_ood_dataset(args, cfg: RunConfig) -> None:
    report = ood.detect(_load(args.test), _load(args.ref), cfg.percentile)
    _emit(
        {
            "nfrd_group": report.nfrd_group,
            "auc": report.auc,
            "counts": {"n_id_ref": report.n_id_ref, "n_test": report.n_test},
        }
    )


def cmd_ood_classify(args, cfg: RunConfig) -> None:
    results = ood.classify_matrix(_load(args.test), _load(args.ref_a), _load(args.ref_b))
    _emit(
        [
            {"id": i, "label": c.label, "score_a": c.score_a, "score_b": c.score_b}
            for i, c in results
        ]
    )


def cmd_interpret(args, cfg: RunConfig) -> None:
    a, b = _load(args.a), _load(args.b)
    report = interpret.delta_report(a, b, cfg.normalize)
    payload = report.to_dict(cfg.top_k)
    if sorted(a.ids) == sorted(b.ids):
        payload["image_changes"] = interpret.rank_image_changes(a, b).to_dict(cfg.top_k)
    _emit(payload, args.out)


def cmd_corrupt(args, cfg: RunConfig) -> None:
    spec = corruptions.CorruptionSpec(args.kind, args.p, cfg.seed)
    images = load_image_set(args.input, cfg.size, args.bit_depth, workers=cfg.workers)
    out = corruptions.apply_to_set(images, spec, workers=cfg.workers)
    written = write_image_set(out, args.output, suffix="." + args.format)
    log.info("wrote %d corrupted images to %s", len(written), args.output)


def cmd_catalog(args, cfg: RunConfig) -> None:
    sys.stdout.write(_catalog(cfg).to_json() + "\n")


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, *keys: str) -> None:
    p.add_argument("--config", help="key = value file; flags take precedence")
    p.add_argument("--workers", type=int, help="parallel workers (default: FRD_WORKERS or 1)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    opts = {
        "bins": dict(type=int, help="gray levels per grid (default 32)"),
        "wavelet": dict(choices=["haar", "coif1", "none"], help="filter bank (default haar)"),
        "families": dict(help="all or a comma list of first,glcm,glrlm,glszm,gldm,ngtdm"),
        "variants": dict(help="all or a comma list of orig,ll,lh,hl,hh"),
        "size": dict(type=int, help="canonical image side (default 256)"),
        "percentile": dict(type=float, help="reference percentile for the threshold (default 95)"),
        "seed": dict(type=int, help="corruption seed (default 0)"),
    }
    for k in keys:
        p.add_argument("--" + k.replace("_", "-"), **opts[k])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frd", description="Radiomic distances and OOD detection for grayscale image sets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="extract radiomic features from a directory of images")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--bit-depth", type=int, choices=[8, 16])
    _common(p, "bins", "wavelet", "families", "variants", "size")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("distance", help="distance between two feature CSVs")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--metric", choices=[m.value for m in metrics.Metric])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--bandwidth")
    _common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("ood", help="out-of-distribution detection")
    osub = p.add_subparsers(dest="ood_command", required=True, parser_class=_Parser)
    q = osub.add_parser("detect", help="per-image OOD labels")
    q.add_argument("--ref", required=True)
    q.add_argument("--test", required=True)
    q.add_argument("--report")
    _common(q, "percentile")
    q.set_defaults(func=cmd_ood_detect)
    q = osub.add_parser("dataset", help="dataset-level OOD score")
    q.add_argument("--ref", required=True)
    q.add_argument("--test", required=True)
    _common(q, "percentile")
    q.set_defaults(func=cmd_ood_dataset)
    q = osub.add_parser("classify", help="assign each test image to the closer reference set")
    q.add_argument("--ref-a", required=True)
    q.add_argument("--ref-b", required=True)
    q.add_argument("--test", required=True)
    _common(q)
    q.set_defaults(func=cmd_ood_classify)

    p = sub.add_parser("interpret", help="rank feature and per-image changes between two sets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--top-k", type=int)
    p.add_argument("--normalize", choices=["a", "joint"])
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("corrupt", help="write corrupted copies of a directory of images")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--kind", required=True, choices=[k.value for k in corruptions.CorruptionKind])
    p.add_argument("--p", type=float, required=True, help="severity in [0, 100]")
    p.add_argument("--format", choices=["png", "pgm", "rawf32"], default="png")
    p.add_argument("--bit-depth", type=int, choices=[8, 16])
    _common(p, "seed", "size")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("catalog", help="print the feature catalog as JSON")
    _common(p, "wavelet", "families", "variants")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        args.func(args, cfg)
    except UsageError as exc:
        print(f"frd: error: {exc}", file=sys.stderr)
        return 1
    except FRDError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

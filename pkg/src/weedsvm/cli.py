"""Command-line interface: scan, sample, extract, train, eval, reproduce.

Exit codes: 0 success, 1 usage error, 2 dataset/layout error, 3 extraction
error, 4 training non-convergence under --strict.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, reference
from ._backend import BACKEND
from .dataset import (
    CLASS_NAMES,
    PUBLISHED_COUNTS,
    DatasetManifest,
    ExtractionConfig,
    extract_features,
    load_cache,
    sample_per_class,
    save_cache,
    scan_dataset,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DatasetError,
    DatasetLayoutError,
    ExtractionError,
    ModelFormatError,
    ParameterError,
    WeedSvmError,
)
from .evaluation import run_experiment, select_features
from .features.glcm import CORRELATION_MODES, GlcmParams
from .features.lbp import LbpParams
from .modelio import save_model
from .svm.core import DEFAULT_MAX_SWEEPS, KernelSpec
from .svm.multiclass import train_multiclass

log = logging.getLogger(__name__)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _add_dataset_args(p, with_sampling=True):
    p.add_argument("--dataset-root", type=Path, help="root directory with the four class folders")
    if with_sampling:
        p.add_argument("--per-class", type=int, default=100, metavar="N",
                       help="images sampled per class (default 100)")


def _add_extraction_args(p):
    p.add_argument("--gray-levels", type=int, default=256, metavar="N",
                   help="gray levels for GLCM/LBP (default 256)")
    p.add_argument("--correlation-normalization", choices=CORRELATION_MODES,
                   default="as_printed",
                   help="GLCM correlation denominator (default as_printed)")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="parallel extraction workers (default 1)")


def _add_model_args(p):
    p.add_argument("--features", default="color,glcm,lbp", metavar="LIST",
                   help="comma-separated feature groups (default color,glcm,lbp)")
    p.add_argument("--strategy", choices=("ovo", "ova"), default="ovo")
    p.add_argument("--c-param", type=float, default=1.0, metavar="C",
                   help="soft-margin penalty (default 1.0)")
    p.add_argument("--kernel", choices=("linear", "poly", "rbf"), default="linear")
    p.add_argument("--degree", type=int, default=3, help="poly kernel degree (default 3)")
    p.add_argument("--coef0", type=float, default=1.0, help="poly kernel constant (default 1.0)")
    p.add_argument("--gamma", type=float, default=1.0, help="rbf kernel width (default 1.0)")
    p.add_argument("--no-standardize", action="store_true",
                   help="feed raw feature values to the SVMs")
    p.add_argument("--max-sweeps", type=int, default=DEFAULT_MAX_SWEEPS, metavar="N",
                   help="SMO sweep budget per binary problem")
    p.add_argument("--strict", action="store_true",
                   help="fail (exit 4) if any binary SVM does not converge")


def build_parser():
    parser = _Parser(prog="weedsvm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"weedsvm {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("scan", help="inventory the dataset class directories")
    _add_dataset_args(p, with_sampling=False)
    p.add_argument("--out", type=Path, help="write the manifest as JSON")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", help="draw a seeded per-class sample")
    _add_dataset_args(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path, help="write the sampled manifest as JSON")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("extract", help="extract features into a CSV cache")
    _add_dataset_args(p)
    p.add_argument("--manifest", type=Path, help="reuse a manifest written by scan/sample")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--all", action="store_true", help="extract every image instead of a per-class sample")
    _add_extraction_args(p)
    p.add_argument("--out", type=Path, required=True, help="feature cache CSV path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a multiclass model on a feature cache")
    p.add_argument("--cache", type=Path, required=True, help="feature cache CSV")
    p.add_argument("--seed", type=int, default=42)
    _add_model_args(p)
    p.add_argument("--out", type=Path, required=True, help="model JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="run seeded train/test iterations and report")
    p.add_argument("--cache", type=Path, help="feature cache CSV (else extract from --dataset-root)")
    _add_dataset_args(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--train-frac", type=float, default=0.7, metavar="F")
    p.add_argument("--iterations", type=int, default=10, metavar="K")
    _add_extraction_args(p)
    _add_model_args(p)
    p.add_argument("--out", type=Path, help="write the report as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reproduce", help="rerun the published feature and strategy comparisons")
    _add_dataset_args(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--iterations", type=int, default=10, metavar="K")
    p.add_argument("--c-param", type=float, default=1.0, metavar="C")
    p.add_argument("--kernel", choices=("linear", "poly", "rbf"), default="linear")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--coef0", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--no-standardize", action="store_true")
    p.add_argument("--strict", action="store_true")
    _add_extraction_args(p)
    p.add_argument("--out", type=Path, help="write all reports as JSON")
    p.set_defaults(func=cmd_reproduce)

    return parser


def _require_root(args):
    if args.dataset_root is None:
        raise _UsageError("weedsvm: --dataset-root is required")
    return args.dataset_root


def _kernel_from_args(args):
    if args.kernel == "linear":
        return KernelSpec.linear()
    if args.kernel == "poly":
        return KernelSpec.poly(args.degree, args.coef0)
    return KernelSpec.rbf(args.gamma)


def _features_from_args(args):
    groups = tuple(g.strip() for g in args.features.split(",") if g.strip())
    if not groups:
        raise _UsageError("weedsvm: --features needs at least one group")
    return groups


def _extraction_config(args):
    return ExtractionConfig(
        gray_levels=args.gray_levels,
        glcm=GlcmParams(),
        correlation_normalization=args.correlation_normalization,
        lbp=LbpParams(),
    )


def _manifest_from_args(args, sampled=True):
    if getattr(args, "manifest", None) is not None:
        payload = json.loads(args.manifest.read_text(encoding="utf-8"))
        return DatasetManifest.from_dict(payload)
    manifest = scan_dataset(_require_root(args))
    if sampled and not getattr(args, "all", False):
        manifest = sample_per_class(manifest, args.per_class, args.seed)
    return manifest


def cmd_scan(args):
    manifest = scan_dataset(_require_root(args))
    print(f"dataset root: {manifest.root}")
    for name in CLASS_NAMES:
        count = manifest.counts[name]
        note = "" if count == PUBLISHED_COUNTS[name] else f"  (published: {PUBLISHED_COUNTS[name]})"
        print(f"  {name:10s} {count:6d} images{note}")
    print(f"  {'total':10s} {manifest.size:6d} images")
    if args.out:
        args.out.write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")
        print(f"manifest written to {args.out}")
    return 0


def cmd_sample(args):
    manifest = sample_per_class(scan_dataset(_require_root(args)), args.per_class, args.seed)
    payload = manifest.to_dict()
    if args.out:
        args.out.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"sampled manifest ({manifest.size} images) written to {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return 0


def cmd_extract(args):
    manifest = _manifest_from_args(args)
    cache = extract_features(manifest, _extraction_config(args), jobs=args.jobs)
    save_cache(cache, args.out)
    print(f"extracted {len(cache.ids)} rows ({len(cache.skipped)} skipped) to {args.out}")
    return 0


def cmd_train(args):
    cache = load_cache(args.cache)
    values, groups = select_features(cache, _features_from_args(args))
    model = train_multiclass(
        values, list(cache.labels), strategy=args.strategy, c=args.c_param,
        kernel=_kernel_from_args(args), seed=args.seed,
        standardize=not args.no_standardize, max_sweeps=args.max_sweeps,
    )
    if args.strict and not model.converged:
        raise ConvergenceError("at least one binary SVM did not converge")
    save_model(model, args.out)
    sv_counts = [int(b.model.support_mask.sum()) for b in model.binaries]
    print(f"trained {args.strategy} model on {values.shape[0]} rows "
          f"({'+'.join(groups)}, dim {values.shape[1]})")
    print(f"binaries: {len(model.binaries)}, support vectors: {sv_counts}")
    print(f"model written to {args.out}")
    return 0


def _print_report(report):
    print(f"features: {'+'.join(report.feature_set)}  strategy: {report.strategy}  "
          f"train fraction: {report.train_fraction:.0%}  iterations: {len(report.iterations)}")
    print(f"mean accuracy: {100 * report.mean_accuracy:.2f}%   "
          f"mean train time: {report.mean_train_time:.4f}s   "
          f"mean predict time: {report.mean_predict_time:.4f}s")
    print(format_confusion(report.classes, report.mean_row_percent))


def format_confusion(classes, row_percent, reference_rows=None):
    """Fixed-width confusion table; optionally interleaves reference rows."""
    width = max(len(c) for c in classes) + 2
    header = " " * width + "".join(f"{c:>{width}}" for c in classes)
    lines = [header]
    for i, cls in enumerate(classes):
        cells = "".join(f"{row_percent[i][j]:>{width}.2f}" for j in range(len(classes)))
        lines.append(f"{cls:<{width}}" + cells)
        if reference_rows is not None:
            ref = "".join(f"{reference_rows[i][j]:>{width}.2f}" for j in range(len(classes)))
            lines.append(f"{'  ref':<{width}}" + ref)
    return "\n".join(lines)


def cmd_eval(args):
    if args.cache is not None:
        cache = load_cache(args.cache)
    else:
        manifest = _manifest_from_args(args)
        cache = extract_features(manifest, _extraction_config(args), jobs=args.jobs)
    report = run_experiment(
        cache, feature_set=_features_from_args(args), strategy=args.strategy,
        train_fraction=args.train_frac, iterations=args.iterations,
        base_seed=args.seed, c=args.c_param, kernel=_kernel_from_args(args),
        standardize=not args.no_standardize, max_sweeps=args.max_sweeps,
    )
    if args.strict and not report.all_converged:
        raise ConvergenceError("at least one iteration had a non-converged binary SVM")
    _print_report(report)
    if args.out:
        args.out.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
        print(f"report written to {args.out}")
    return 0


def cmd_reproduce(args):
    manifest = sample_per_class(scan_dataset(_require_root(args)), args.per_class, args.seed)
    cache = extract_features(manifest, _extraction_config(args), jobs=args.jobs)
    kernel = _kernel_from_args(args)
    standardize = not args.no_standardize
    feature_sets = [("color",), ("color", "glcm"), ("color", "lbp")]

    print(f"== feature comparison (ovo, 70% train, {args.iterations} iterations) ==")
    comparison = {}
    for fs in feature_sets:
        report = run_experiment(cache, feature_set=fs, strategy="ovo",
                                train_fraction=0.7, iterations=args.iterations,
                                base_seed=args.seed, c=args.c_param, kernel=kernel,
                                standardize=standardize)
        comparison[fs] = report
        print(f"\n-- {'+'.join(fs)} (mean accuracy {100 * report.mean_accuracy:.2f}%) --")
        print("   measured row percentages, `ref` = published values")
        print(format_confusion(report.classes, report.mean_row_percent,
                               reference.CONFUSION_70_OVO.get(fs)))

    print(f"\n== strategy sweep (color+lbp, {args.iterations} iterations) ==")
    sweep = {}
    fractions = (0.3, 0.5, 0.7)
    for strategy in ("ova", "ovo"):
        for frac in fractions:
            sweep[(strategy, frac)] = run_experiment(
                cache, feature_set=("color", "lbp"), strategy=strategy,
                train_fraction=frac, iterations=args.iterations,
                base_seed=args.seed, c=args.c_param, kernel=kernel,
                standardize=standardize)
    header = f"{'method':12s}" + "".join(f"{int(100 * f)}% train".rjust(16) for f in fractions)
    print(header)
    for strategy in ("ova", "ovo"):
        cells = "".join(f"{100 * sweep[(strategy, f)].mean_accuracy:>15.2f}%" for f in fractions)
        refs = "".join(f"{reference.ACCURACY_COLOR_LBP[strategy][f]:>15.2f}%" for f in fractions)
        print(f"{strategy + ' acc':12s}" + cells)
        print(f"{'  ref':12s}" + refs)
    for strategy in ("ova", "ovo"):
        cells = "".join(f"{sweep[(strategy, f)].mean_train_time:>15.4f}s" for f in fractions)
        refs = "".join(f"{reference.TRAIN_TIME_COLOR_LBP[strategy][f]:>15.4f}s" for f in fractions)
        print(f"{strategy + ' time':12s}" + cells)
        print(f"{'  ref':12s}" + refs)

    reports = list(comparison.values()) + list(sweep.values())
    if args.strict and not all(r.all_converged for r in reports):
        raise ConvergenceError("at least one experiment had a non-converged binary SVM")

    if args.out:
        payload = {
            "config": {
                "per_class": args.per_class,
                "seed": args.seed,
                "iterations": args.iterations,
                "skipped_images": list(cache.skipped),
            },
            "feature_comparison": {"+".join(fs): r.to_dict() for fs, r in comparison.items()},
            "strategy_sweep": {
                f"{strategy}@{frac}": r.to_dict() for (strategy, frac), r in sweep.items()
            },
        }
        args.out.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"\nreport written to {args.out}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (DatasetLayoutError, DatasetError) as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return 2
    except ExtractionError as exc:
        print(f"extraction error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 4
    except (ParameterError, ConfigurationError, ModelFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except WeedSvmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

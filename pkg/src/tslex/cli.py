"""Command line entry point.

Subcommands mirror the pipeline stages: ``extract`` writes the feature
matrix, ``target`` the complexity series, ``discover`` runs the whole
pipeline and exports the result, ``serve`` starts the HTTP service.
Every flag overrides the corresponding key of a ``--config`` file.

Exit codes: 0 on success, 1 for configuration or input validation
problems, 2 when a pipeline stage fails at runtime.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, CorpusFormatError, StageError
from .pipeline import (
    PipelineConfig,
    export_complexity,
    export_feature_matrix,
    export_run,
    load_config,
    run_pipeline,
)


def _add_config_flags(p):
    p.add_argument("--config", metavar="FILE", help="config file of key = value lines")
    p.add_argument("--input", metavar="CSV", help="corpus CSV path")
    p.add_argument("--slice-seconds", type=float, dest="slice_seconds")
    p.add_argument("--energy-block-seconds", type=float, dest="energy_block_seconds")
    p.add_argument("--feature-role", dest="feature_role")
    p.add_argument("--target-role", dest="target_role")
    p.add_argument("--features", help="comma separated feature selection")
    p.add_argument("--aggregators", help="comma separated, out of mean/std/none")
    p.add_argument("--target-kind", dest="target_kind", choices=["mean_z", "slope", "delta"])
    p.add_argument("--dyncomp-window", type=int, dest="dyncomp_window")
    p.add_argument("--dyncomp-step", type=int, dest="dyncomp_step")
    p.add_argument("--dyncomp-domain", dest="dyncomp_domain",
                   help="'auto' or 'lo:hi'")
    p.add_argument("--lags", help="comma separated non-negative integers")
    p.add_argument("--min-size", type=int, dest="min_size")
    p.add_argument("--max-depth", type=int, dest="max_depth")
    p.add_argument("--top-k", type=int, dest="top_k")
    p.add_argument("--quality-a", type=float, dest="quality_a")
    p.add_argument("--direction", choices=["high", "low"])
    p.add_argument("--no-pruning", action="store_true", help="disable optimistic pruning")


def _overrides_from_args(args):
    out = {}
    simple = ["input", "slice_seconds", "energy_block_seconds", "feature_role",
              "target_role", "target_kind", "dyncomp_window", "dyncomp_step",
              "min_size", "max_depth", "top_k", "quality_a", "direction"]
    for key in simple:
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if getattr(args, "features", None):
        out["features"] = [s.strip() for s in args.features.split(",") if s.strip()]
    if getattr(args, "aggregators", None):
        out["aggregators"] = [s.strip() for s in args.aggregators.split(",") if s.strip()]
    if getattr(args, "lags", None):
        try:
            out["lags"] = [int(s) for s in args.lags.split(",") if s.strip()]
        except ValueError:
            raise ConfigError("lags must be comma separated integers") from None
    domain = getattr(args, "dyncomp_domain", None)
    if domain:
        if domain == "auto":
            out["dyncomp_domain"] = "auto"
        else:
            try:
                lo, _, hi = domain.partition(":")
                out["dyncomp_domain"] = [float(lo), float(hi)]
            except ValueError:
                raise ConfigError("dyncomp_domain must be 'auto' or 'lo:hi'") from None
    if getattr(args, "no_pruning", False):
        out["pruning"] = False
    return out


def _build_config(args):
    overrides = _overrides_from_args(args)
    if args.config:
        return load_config(args.config, overrides)
    return PipelineConfig.from_mapping(overrides)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="tslex",
        description="slice multi-channel recordings, score dynamic complexity, mine subgroups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="write the slice feature matrix as CSV")
    _add_config_flags(p_extract)
    p_extract.add_argument("--out", required=True, metavar="CSV")

    p_target = sub.add_parser("target", help="write the complexity series as CSV")
    _add_config_flags(p_target)
    p_target.add_argument("--out", required=True, metavar="CSV")

    p_discover = sub.add_parser("discover", help="run the full pipeline and export the results")
    _add_config_flags(p_discover)
    p_discover.add_argument("--out-dir", required=True, metavar="DIR")

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--port", type=int, default=8714)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--state", required=True, metavar="DIR", help="run store directory")
    p_serve.add_argument("--ui-dir", metavar="DIR", help="serve static files from this directory")

    args = parser.parse_args(argv)

    try:
        if args.command == "serve":
            from .server import serve

            return _run_serve(serve, args)
        config = _build_config(args)
        if args.command == "extract":
            export_feature_matrix(config, args.out)
            print("wrote %s" % args.out)
        elif args.command == "target":
            export_complexity(config, args.out)
            print("wrote %s" % args.out)
        elif args.command == "discover":
            result = run_pipeline(config)
            paths = export_run(result, args.out_dir)
            print("run %s" % result.run_id)
            for block in result.lags:
                top = block["subgroups"][0] if block["subgroups"] else None
                line = "lag %d: %d instances" % (block["lag"], block["instances"])
                if top:
                    line += ", best %s (quality %.4f, size %d)" % (
                        top["pattern"], top["quality"], top["size"])
                print(line)
            for p in paths:
                print("wrote %s" % p)
        return 0
    except (ConfigError, CorpusFormatError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except StageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


def _run_serve(serve_fn, args):
    state = Path(args.state)
    try:
        serve_fn(str(state), port=args.port, host=args.host, ui_dir=args.ui_dir)
        return 0
    except OSError as e:
        print("error: cannot bind %s:%d (%s)" % (args.host, args.port, e), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

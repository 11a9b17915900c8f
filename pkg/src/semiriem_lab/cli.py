"""Command-line interface for semiriem-lab."""

import argparse
import json
import logging
import sys
from pathlib import Path

import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.errors import ConfigInvalid
from semiriem_lab.evaluation import EXIT_CONFIG, register_user_charts, resolve_output_dir, run
from semiriem_lab.manifolds import list_catalog
from semiriem_lab.models import RunConfig, RunManifest, load_run_config, parse_run_config

# Configure structured logging
structlog.configure(
    processors=[
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.dev.ConsoleRenderer(),
    ],
    wrapper_class=structlog.make_filtering_bound_logger(
        getattr(logging, get_settings().log_level.upper(), logging.INFO)
    ),
    context_class=dict,
    logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    cache_logger_on_first_use=True,
)

logger = structlog.get_logger()


def _print_manifest(manifest: RunManifest, output_dir: Path):
    for o in manifest.outcomes:
        print(f"{o.index:>3}  {o.kind:<20} {o.chart:<28} {o.status:<18} {o.verdict or '-'}")
    print(f"\n exit code {manifest.exit_code} | reports in {output_dir}\n")


def _run_single(args, check: dict) -> int:
    """Wrap one check in a run configuration and execute it like `run`."""
    if args.chart is not None:
        check["chart"] = args.chart
    check = {k: v for k, v in check.items() if v is not None}
    text = json.dumps({"checks": [check], "seed": args.seed})
    config = parse_run_config(text, source="<command line>")
    manifest = run(config, args.output_dir)
    _print_manifest(manifest, resolve_output_dir(config, args.output_dir))
    return manifest.exit_code


def cmd_catalog(args) -> int:
    """List built-in and user charts."""
    if args.config:
        register_user_charts(load_run_config(args.config))
    print(list_catalog())
    return 0


def cmd_run(args) -> int:
    """Execute every check of a run configuration."""
    config: RunConfig = load_run_config(args.config)
    logger.info("config_loaded", path=str(args.config), checks=len(config.checks))
    manifest = run(config, args.output_dir, metrics=args.metrics)
    _print_manifest(manifest, resolve_output_dir(config, args.output_dir))
    return manifest.exit_code


def cmd_check_bound(args) -> int:
    return _run_single(args, {
        "kind": "bound", "K": args.K, "direction": args.direction, "method": args.method,
        "n_samples": args.n_samples, "tol": args.tol,
    })


def cmd_check_convexity(args) -> int:
    interval = list(args.interval) if args.interval else None
    return _run_single(args, {
        "kind": "spacetime-convexity" if args.spacetime else "convexity",
        "K": args.K, "field": args.field, "lambda0": args.lambda0, "interval": interval,
        "q": args.q, "radius": args.radius, "n_samples": args.n_samples, "tol": args.tol,
    })


def cmd_track_shape_operator(args) -> int:
    return _run_single(args, {
        "kind": "shape-track", "K": args.K, "q": args.q, "radius": args.radius,
        "n_samples": args.n_tracks, "n_times": args.n_times, "tol": args.tol,
    })


def cmd_compare_triangles(args) -> int:
    return _run_single(args, {
        "kind": "triangles", "K": args.K, "direction": args.direction, "q": args.q,
        "radius": args.radius, "n_samples": args.n_triangles, "n_pairs": args.n_pairs,
        "tol": args.tol,
    })


def cmd_audit_submanifold(args) -> int:
    patch = {
        "family": args.patch, "t0": args.t0, "radius": args.patch_radius, "sign": args.sign,
        "offset": args.offset, "coefficients": args.coefficients, "p": args.p, "v": args.v,
        "length": args.length, "period": args.period,
    }
    return _run_single(args, {
        "kind": "submanifold-audit", "K": args.K, "q": args.q, "radius": args.radius,
        "mode": args.mode, "grid_n": args.grid_n, "tol": args.tol,
        "patch": {k: v for k, v in patch.items() if v is not None},
    })


def cmd_verify_identities(args) -> int:
    return _run_single(args, {"kind": "identities", "full": args.full})


def _add_common(parser: argparse.ArgumentParser, k_default: float | None = 0.0):
    parser.add_argument("--chart", "-c", help="Chart id (default minkowski:3)")
    if k_default is not None:
        parser.add_argument("--K", "-K", type=float, default=k_default, help="Comparison curvature")
    parser.add_argument("--seed", type=int, default=0, help="Master seed")
    parser.add_argument("--tol", type=float, help="Acceptance tolerance")
    parser.add_argument("--output-dir", "-o", type=Path, help="Report directory")


def _add_region(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--q", type=float, nargs="+", help="Base point (default catalog base point)"
    )
    parser.add_argument("--radius", type=float, help="Star region radius")


def main(argv: list[str] | None = None) -> int:
    """Main CLI entrypoint."""
    parser = argparse.ArgumentParser(
        prog="semiriem-lab",
        description="Numerical checks of curvature bounds on semi-Riemannian manifolds",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # catalog command
    catalog_parser = subparsers.add_parser("catalog", help="List available charts")
    catalog_parser.add_argument(
        "--config", type=Path, help="Also register this config's user charts"
    )
    catalog_parser.set_defaults(func=cmd_catalog)

    # run command
    run_parser = subparsers.add_parser("run", help="Execute a JSON run configuration")
    run_parser.add_argument("config", type=Path, help="Path to the run configuration")
    run_parser.add_argument("--output-dir", "-o", type=Path, help="Report directory")
    run_parser.add_argument("--metrics", action="store_true", help="Write metrics.prom")
    run_parser.set_defaults(func=cmd_run)

    # check-bound command
    bound_parser = subparsers.add_parser("check-bound", help="Certify a sectional curvature bound")
    _add_common(bound_parser)
    bound_parser.add_argument("--direction", choices=["upper", "lower"], default="upper")
    bound_parser.add_argument("--method", choices=["sampling", "grw", "cross-validate"],
                              default="sampling")
    bound_parser.add_argument("--n-samples", "-n", type=int, default=2000, help="Number of planes")
    bound_parser.set_defaults(func=cmd_check_bound)

    # check-convexity command
    convex_parser = subparsers.add_parser("check-convexity", help="Certify lambda-convexity")
    _add_common(convex_parser)
    _add_region(convex_parser)
    convex_parser.add_argument(
        "--field",
        choices=["comparison", "warped-lift", "minkowski-quadratic"],
        default="comparison",
    )
    convex_parser.add_argument("--lambda0", type=float, default=1.0)
    convex_parser.add_argument(
        "--spacetime", action="store_true", help="Space-time convexity instead"
    )
    convex_parser.add_argument(
        "--interval", type=float, nargs=2, help="Time interval of the GRW region"
    )
    convex_parser.add_argument("--n-samples", "-n", type=int, default=500)
    convex_parser.set_defaults(func=cmd_check_convexity)

    # track-shape-operator command
    track_parser = subparsers.add_parser("track-shape-operator", help="Compare S with its model")
    _add_common(track_parser)
    _add_region(track_parser)
    track_parser.add_argument("--n-tracks", type=int, default=20)
    track_parser.add_argument("--n-times", type=int, default=8)
    track_parser.set_defaults(func=cmd_track_shape_operator)

    # compare-triangles command
    tri_parser = subparsers.add_parser("compare-triangles", help="Triangle comparison against M_K")
    _add_common(tri_parser)
    _add_region(tri_parser)
    tri_parser.add_argument("--direction", choices=["upper", "lower"], default="upper")
    tri_parser.add_argument("--n-triangles", type=int, default=50)
    tri_parser.add_argument("--n-pairs", type=int, default=5)
    tri_parser.set_defaults(func=cmd_compare_triangles)

    # audit-submanifold command
    audit_parser = subparsers.add_parser(
        "audit-submanifold", help="Trapped-submanifold obstruction audit"
    )
    _add_common(audit_parser)
    _add_region(audit_parser)
    audit_parser.add_argument("--patch", required=True, choices=[
        "slice", "round-sphere", "hyperboloid", "graph", "geodesic-segment", "closed-geodesic",
    ])
    audit_parser.add_argument(
        "--mode", choices=["minimal", "trapped", "compact-maximum"], default="trapped"
    )
    audit_parser.add_argument("--grid-n", type=int, default=5)
    audit_parser.add_argument("--t0", type=float)
    audit_parser.add_argument("--patch-radius", type=float)
    audit_parser.add_argument("--sign", type=int, choices=[1, -1])
    audit_parser.add_argument("--offset", type=float)
    audit_parser.add_argument("--coefficients", type=float, nargs="+")
    audit_parser.add_argument("--p", type=float, nargs="+", help="Geodesic start point")
    audit_parser.add_argument("--v", type=float, nargs="+", help="Geodesic initial velocity")
    audit_parser.add_argument("--length", type=float)
    audit_parser.add_argument("--period", type=float)
    audit_parser.set_defaults(func=cmd_audit_submanifold)

    # verify-identities command
    ident_parser = subparsers.add_parser("verify-identities", help="Run the identity suite")
    _add_common(ident_parser, k_default=None)
    ident_parser.add_argument("--full", action="store_true", help="Acceptance sample counts")
    ident_parser.set_defaults(func=cmd_verify_identities)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigInvalid as e:
        logger.error("config_invalid", path=e.path, error=e.message)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

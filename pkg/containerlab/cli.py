"""
Command-line interface for containerlab.

Every subcommand builds one report, writes it to stdout (or a file) and
exits 0 when every asserted property holds. Exit codes: 1 on a property
violation, 2 on a usage error, 3 when a scale cap refuses the run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import colorama

from containerlab import __version__
from containerlab.config import Config, create_default_config, get_config_path, load_config
from containerlab.core.containers import container_family, linked_profiles, m_phi, theorem_bounds
from containerlab.core.enumeration import (
    closure_profile,
    count_intersecting,
    maximal_profile,
    raw_count_intersecting,
    removal_probe,
    verify_C_partition,
)
from containerlab.core.families import (
    classify_family,
    is_nice,
    nearest_star,
    phi_inverse,
    phi_map,
)
from containerlab.core.isoperimetry import MODES, verify_isoperimetry
from containerlab.core.layer_graph import BiregularGraph, ContainmentGraph, EdgeListGraph, LayerGraphParams
from containerlab.core.verifier import TIERS, DeskVerifier
from containerlab.errors import CapExceededError, ContainerLabError, ConvergenceError, PropertyViolation
from containerlab.exporters import get_exporter, normalize
from containerlab.models.certificate import ContainerSweepReport
from containerlab.models.family import KFamily
from containerlab.models.reports import PhiReport, Report, RunInfo
from containerlab.utils.colors import Colors, colorize, supports_color

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_INTERRUPTED = 130


def _error(message: str) -> None:
    print(f"{colorize('Error:', Colors.RED, bold=True, enabled=supports_color())} {message}", file=sys.stderr)


def progress_callback(name: str, current: int, total: int) -> None:
    """Report verify-all progress on stderr."""
    print(f"[{current}/{total}] {name}", file=sys.stderr, flush=True)


def _config(args: argparse.Namespace) -> Config:
    config = load_config(Path(args.config) if args.config else None)
    if args.cap:
        overrides: dict[str, int | None] = {}
        for item in args.cap:
            name, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"--cap expects NAME=VALUE, got {item!r}")
            try:
                overrides[name] = int(value)
            except ValueError as e:
                raise ValueError(f"cap {name} must be an integer, got {value!r}") from e
        config.caps = config.caps.lowered(**overrides)
    return config


def _workers(args: argparse.Namespace, config: Config) -> int:
    return args.workers if args.workers is not None else config.settings.max_workers


def emit_report(report: Report, args: argparse.Namespace, config: Config) -> int:
    """Write the report in the chosen format and turn its verdict into an exit code."""
    fmt = args.format or config.settings.default_format
    use_colors = fmt == "text" and config.settings.color_output and not args.no_color and not args.output
    exporter = get_exporter(fmt, include_run=args.timing, use_colors=use_colors and supports_color())
    if args.output:
        path = exporter.export_to_file(report, args.output)
        print(f"Report saved to: {path}", file=sys.stderr)
    else:
        sys.stdout.write(exporter.export(report))
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_count(args: argparse.Namespace) -> int:
    """Run the count command."""
    config = _config(args)
    caps = config.caps
    if args.raw:
        report = raw_count_intersecting(args.n, args.k, max_vertices=caps.max_raw_vertices)
    else:
        report = count_intersecting(
            args.n,
            args.k,
            workers=_workers(args, config),
            split_depth=args.split_depth or config.settings.split_depth,
            max_vertices=caps.max_family_vertices,
            include_profile=args.profile,
        )
        if args.oracle:
            report.oracle_total = raw_count_intersecting(args.n, args.k, caps.max_raw_vertices).total
    return emit_report(report, args, config)


def cmd_maximal(args: argparse.Namespace) -> int:
    """Run the maximal command."""
    config = _config(args)
    report = maximal_profile(args.n, args.k, max_vertices=config.caps.max_family_vertices)
    return emit_report(report, args, config)


def _load_family(args: argparse.Namespace) -> KFamily:
    if args.file:
        return KFamily.from_file(args.file)
    if args.sets is None or args.n is None:
        raise ValueError("give a family file, or --sets together with -n")
    return KFamily.parse_inline(args.sets, args.n, args.k)


def cmd_phi(args: argparse.Namespace) -> int:
    """Run the phi command."""
    config = _config(args)
    family = _load_family(args)
    image = phi_map(family)
    report = PhiReport(
        family=family,
        image=image,
        restored=phi_inverse(image) == family,
        classification=classify_family(family),
        star=nearest_star(family),
        nice=is_nice(family) if family.n == 2 * family.k + 1 else None,
        run=RunInfo(),
    )
    return emit_report(report, args, config)


def cmd_iso(args: argparse.Namespace) -> int:
    """Run the iso command."""
    config = _config(args)
    report = verify_isoperimetry(
        LayerGraphParams(args.n, args.k, args.r),
        mode=args.mode,
        workers=_workers(args, config),
        max_exhaustive=config.caps.max_exhaustive_subsets,
    )
    return emit_report(report, args, config)


def cmd_partition(args: argparse.Namespace) -> int:
    """Run the partition command."""
    config = _config(args)
    report = verify_C_partition(
        LayerGraphParams(args.n, args.k, args.r), max_vertices=config.caps.max_layer_vertices
    )
    return emit_report(report, args, config)


def cmd_probe(args: argparse.Namespace) -> int:
    """Run the probe command."""
    config = _config(args)
    cap = config.caps.max_raw_vertices
    if args.closure:
        return emit_report(closure_profile(args.n, args.k, max_vertices=cap), args, config)
    return emit_report(removal_probe(args.n, args.k, max_vertices=cap), args, config)


def _container_graph(args: argparse.Namespace) -> BiregularGraph:
    if args.graph:
        return EdgeListGraph.from_file(args.graph)
    if args.layers:
        return ContainmentGraph(LayerGraphParams(*args.layers))
    raise ValueError("give --graph FILE or --layers N K R")


def cmd_containers(args: argparse.Namespace) -> int:
    """Run the containers command."""
    config = _config(args)
    caps = config.caps
    defaults = config.containers
    if args.phi is not None:
        defaults.phi = args.phi
    if args.psi is not None:
        defaults.psi = args.psi
    if args.big_c is not None:
        defaults.big_c = args.big_c
    if args.retry_cap is not None:
        defaults.retry_cap = args.retry_cap
    params = defaults.params(config.resolve_seed(args.seed))
    graph = _container_graph(args)
    workers = _workers(args, config)
    m = m_phi(graph, params.phi, caps.max_m_phi_degree)

    if args.a is not None and args.g is not None:
        report: Report = container_family(
            graph, args.a, args.g, params, m_phi_value=m, workers=workers,
            max_side=caps.max_container_side, max_exhaustive=caps.max_exhaustive_t0,
        )
        return emit_report(report, args, config)
    if args.a is not None or args.g is not None:
        raise ValueError("--a and --g go together")

    sweep = ContainerSweepReport(graph=graph.name, seeds=[params.seed])
    for (a, g), members in linked_profiles(graph, caps.max_container_side).items():
        sweep.families.append(container_family(
            graph, a, g, params, m_phi_value=m, workers=workers, members=members,
            max_exhaustive=caps.max_exhaustive_t0,
        ))
    return emit_report(sweep, args, config)


def cmd_bounds(args: argparse.Namespace) -> int:
    """Run the bounds command."""
    config = _config(args)
    report = theorem_bounds(
        args.a,
        args.g,
        args.k,
        args.r,
        args.phi,
        args.psi,
        args.big_c,
        max_degree=config.caps.max_m_phi_degree,
    )
    return emit_report(report, args, config)


def cmd_verify_all(args: argparse.Namespace) -> int:
    """Run the acceptance suite."""
    config = _config(args)
    verifier = DeskVerifier(
        config=config,
        tier=args.tier,
        workers=_workers(args, config),
        seed=config.resolve_seed(args.seed),
        progress_callback=progress_callback if args.progress else None,
    )
    return emit_report(verifier.run(), args, config)


def cmd_config(args: argparse.Namespace) -> int:
    """Show the effective configuration, or write the default file."""
    if args.init:
        path = Path(args.config) if args.config else get_config_path()
        if path.exists() and not args.force:
            _error(f"{path} exists; pass --force to overwrite")
            return EXIT_USAGE
        print(create_default_config(path))
        return EXIT_OK
    config = _config(args)
    path = Path(args.config) if args.config else get_config_path()
    print(json.dumps({"path": str(path), **config.to_dict()}, indent=2))
    return EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-f", "--format",
        choices=["json", "csv", "text"],
        default=None,
        help="Output format (default: from config, json)",
    )
    common.add_argument("-o", "--output", metavar="FILE", help="Save output to file")
    common.add_argument("--timing", action="store_true", help="Include wall time and workers in the report")
    common.add_argument("--no-color", action="store_true", help="Disable colored output")
    common.add_argument("--config", metavar="FILE", help="Configuration file")
    common.add_argument(
        "--cap",
        action="append",
        metavar="NAME=VALUE",
        help="Lower a scale cap for this run (repeatable)",
    )
    common.add_argument("-w", "--workers", type=int, metavar="N", help="Worker processes for the exhaustive sweeps")
    common.add_argument("--seed", type=int, help="Random seed (default: CONTAINER_LAB_SEED or config)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log to stderr (-vv for debug)")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="containerlab",
        description="containerlab - exact checks for intersecting families and graph containers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  containerlab count 4 2                 # 27 intersecting families
  containerlab maximal 5 2               # maximal families by deficiency
  containerlab phi triangle.txt          # encode a family into H
  containerlab iso 6 2 2 --mode colex    # shadow bounds on colex segments
  containerlab containers --layers 6 2 2 --a 1 --g 3
  containerlab verify-all --tier desk    # the full acceptance suite
        """,
    )
    parser.add_argument("-V", "--version", action="version", version=f"containerlab {__version__}")

    common = _common_parser()
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    count_parser = subparsers.add_parser("count", parents=[common], help="Count intersecting families")
    count_parser.add_argument("n", type=int, help="Ground set size")
    count_parser.add_argument("k", type=int, help="Uniformity")
    count_parser.add_argument("--split-depth", type=int, help="Branching levels turned into tasks")
    count_parser.add_argument("--profile", action="store_true", help="Add the maximal-family histogram")
    count_parser.add_argument("--raw", action="store_true", help="Use the raw subset iterator")
    count_parser.add_argument("--oracle", action="store_true", help="Cross-check against the raw iterator")
    count_parser.set_defaults(func=cmd_count)

    maximal_parser = subparsers.add_parser("maximal", parents=[common], help="Maximal families and their bounds")
    maximal_parser.add_argument("n", type=int)
    maximal_parser.add_argument("k", type=int)
    maximal_parser.set_defaults(func=cmd_maximal)

    phi_parser = subparsers.add_parser("phi", parents=[common], help="Encode a family as an independent set of H")
    phi_parser.add_argument("file", nargs="?", help="Family file: header 'n k', then one set per line")
    phi_parser.add_argument("--sets", metavar="TEXT", help="Inline family such as '1,2;1,3;2,3'")
    phi_parser.add_argument("-n", type=int, help="Ground set size for --sets")
    phi_parser.add_argument("-k", type=int, help="Uniformity for --sets (inferred if omitted)")
    phi_parser.set_defaults(func=cmd_phi)

    iso_parser = subparsers.add_parser("iso", parents=[common], help="Check shadow bounds in H(n,k,r)")
    iso_parser.add_argument("n", type=int)
    iso_parser.add_argument("k", type=int)
    iso_parser.add_argument("r", type=int)
    iso_parser.add_argument("--mode", choices=MODES, default="exhaustive", help="Subsets to sweep")
    iso_parser.set_defaults(func=cmd_iso)

    partition_parser = subparsers.add_parser(
        "partition", parents=[common], help="Group independent sets of H by container"
    )
    partition_parser.add_argument("n", type=int)
    partition_parser.add_argument("k", type=int)
    partition_parser.add_argument("r", type=int)
    partition_parser.set_defaults(func=cmd_partition)

    probe_parser = subparsers.add_parser("probe", parents=[common], help="Star distances or closure sizes")
    probe_parser.add_argument("n", type=int)
    probe_parser.add_argument("k", type=int)
    probe_parser.add_argument("--closure", action="store_true", help="Profile closure sizes instead")
    probe_parser.set_defaults(func=cmd_probe)

    containers_parser = subparsers.add_parser(
        "containers", parents=[common], help="Run the container algorithm"
    )
    source = containers_parser.add_mutually_exclusive_group()
    source.add_argument("--graph", metavar="FILE", help="Edge-list file")
    source.add_argument("--layers", type=int, nargs=3, metavar=("N", "K", "R"), help="Use H(n,k,r)")
    containers_parser.add_argument("--a", type=int, help="Closure size |[A]|")
    containers_parser.add_argument("--g", type=int, help="Neighbourhood size |N(A)|")
    containers_parser.add_argument("--phi", type=int)
    containers_parser.add_argument("--psi", type=int)
    containers_parser.add_argument("--bigC", dest="big_c", type=float)
    containers_parser.add_argument("--retry-cap", type=int)
    containers_parser.set_defaults(func=cmd_containers)

    bounds_parser = subparsers.add_parser("bounds", parents=[common], help="Evaluate the container-count bounds")
    bounds_parser.add_argument("a", type=int)
    bounds_parser.add_argument("g", type=int)
    bounds_parser.add_argument("k", type=int)
    bounds_parser.add_argument("r", type=int)
    bounds_parser.add_argument("--phi", type=float, default=1.0)
    bounds_parser.add_argument("--psi", type=float, default=1.0)
    bounds_parser.add_argument("--bigC", dest="big_c", type=float, default=1.0)
    bounds_parser.set_defaults(func=cmd_bounds)

    verify_parser = subparsers.add_parser("verify-all", parents=[common], help="Run the acceptance suite")
    verify_parser.add_argument("--tier", choices=TIERS, default="desk")
    verify_parser.add_argument("--progress", action="store_true", help="Print each check to stderr")
    verify_parser.set_defaults(func=cmd_verify_all)

    config_parser = subparsers.add_parser("config", parents=[common], help="Show or create the configuration")
    config_parser.add_argument("--init", action="store_true", help="Write the default configuration file")
    config_parser.add_argument("--force", action="store_true", help="Overwrite an existing file")
    config_parser.set_defaults(func=cmd_config)

    return parser


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _print_violation(error: PropertyViolation | ConvergenceError) -> None:
    data = {"error": str(error), "witness": normalize(error.witness)}
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point."""
    colorama.init(autoreset=False, strip=False, convert=sys.platform == "win32")
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    _setup_logging(args.verbose)
    try:
        result: int = args.func(args)
        return result
    except KeyboardInterrupt:
        print("\nInterrupted.", file=sys.stderr)
        return EXIT_INTERRUPTED
    except CapExceededError as e:
        _error(str(e))
        return EXIT_CAP
    except (PropertyViolation, ConvergenceError) as e:
        _error(str(e))
        _print_violation(e)
        return EXIT_VIOLATION
    except (ValueError, OSError) as e:
        _error(str(e))
        return EXIT_USAGE
    except ContainerLabError as e:
        _error(str(e))
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())

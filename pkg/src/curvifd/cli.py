"""
Command-line front end.

::

    curvifd burgers --preset fig2c --out out/
    curvifd convdiff --M 160 --h 0.99 --b 5 --out out/
    curvifd potential-polar --preset fig8
    curvifd verify
    curvifd figures --out figs/

Each run writes ``<name>.csv``, ``<name>.gp`` (gnuplot) and ``<name>.json``
(the run manifest) into ``--out``. Exit status is 0 on success, 2 for a bad
command line or parameter set, 3 for a diverged or unconverged solve when
``--strict`` is given, and 1 when ``verify`` finds a failing check.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time
from pathlib import Path

import numpy as np

from curvifd import __version__
from curvifd.burgers import BurgersConfig, BurgersResult, run_burgers
from curvifd.cli_io import RunManifest, write_gnuplot, write_manifest, write_snapshot_csv
from curvifd.convdiff import ConvDiffConfig, run_convdiff
from curvifd.errors import DomainError
from curvifd.fd_core import Field
from curvifd.potential import PotentialConfig, solve_potential
from curvifd.presets import FIGURE_PRESETS, PRESETS_VERSION, get_preset

__all__ = ["main", "build_parser", "run_command", "ConfigError"]

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3

# CLI flag (argparse dest) -> config field, per subcommand
_FIELDS = {
    "burgers": dict(L="L", M="M", nu="nu", dt="dt", c="c", np="n_p", t_end="t_end",
                    snapshots="snapshots", scheme="scheme"),
    "convdiff": dict(L="L", M="M", nu="nu", dt="dt", h="h", b="b", U="U", x0="x0",
                     t_end="t_end", snapshots="snapshots", scheme="scheme"),
    "potential-polar": dict(a="a", R="R", M="M", N="N", U="U", omega="omega", tol="tol",
                            max_iter="max_iter"),
    "potential-joukowski": dict(a="a", L="L", B="B", M="M", N="N", U="U", omega="omega",
                                tol="tol", max_iter="max_iter"),
}
_SOLVE_COMMANDS = tuple(_FIELDS)


class ConfigError(ValueError):
    """Bad flag combination or parameter value; maps to exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _snapshot_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad snapshot list {text!r}") from exc


def _add_model_flags(p):
    g = p.add_argument_group("model parameters (override the preset)")
    for flag, typ in (("--L", float), ("--M", int), ("--N", int), ("--nu", float),
                      ("--dt", float), ("--c", float), ("--np", int), ("--h", float),
                      ("--b", float), ("--U", float), ("--x0", float), ("--a", float),
                      ("--R", float), ("--B", float), ("--t-end", float),
                      ("--omega", float), ("--tol", float), ("--max-iter", int)):
        g.add_argument(flag, type=typ, default=None)
    g.add_argument("--snapshots", type=_snapshot_list, default=None,
                   help="comma-separated output times")
    g.add_argument("--scheme", choices=("central", "upwind"), default=None)
    p.add_argument("--preset", default=None, help="named figure parameter set")


def _add_common(p):
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 if the solve diverges or does not converge")
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; nothing is random at present")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = _Parser(prog="curvifd", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"curvifd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in _SOLVE_COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} solver")
        _add_model_flags(p)
        _add_common(p)
    p = sub.add_parser("verify", help="run the quick oracle and invariant checks")
    p.add_argument("-v", "--verbose", action="store_true")
    p = sub.add_parser("figures", help="run every figure preset")
    _add_common(p)
    return parser


def resolve_params(command, args):
    """Merge preset values and explicit flags into config keyword arguments."""
    fields = _FIELDS[command]
    params = {}
    if args.preset is not None:
        try:
            _, params = get_preset(args.preset, command)
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc.args[0])) from exc
    for dest in vars(args):
        if dest in ("preset", "out", "strict", "seed", "verbose", "command"):
            continue
        value = getattr(args, dest)
        if value is None:
            continue
        if dest not in fields:
            raise ConfigError(f"--{dest.replace('_', '-')} does not apply to '{command}'")
        params[fields[dest]] = value
    return params


def _make_config(command, params):
    params = dict(params)
    exact_only = params.pop("exact_only", False)
    try:
        if command == "burgers":
            return BurgersConfig(**params), exact_only
        if command == "convdiff":
            return ConvDiffConfig(**params), exact_only
        geometry = "polar" if command == "potential-polar" else "joukowski"
        return PotentialConfig(geometry=geometry, **params), exact_only
    except (TypeError, ValueError, DomainError) as exc:
        raise ConfigError(str(exc)) from exc


def _exact_burgers(cfg):
    # the steady profile on the stretched grid, shown at every snapshot time
    xi = cfg.grid.nodes
    res = BurgersResult(config=cfg, xi=xi, x=cfg.map.x_of_xi(xi))
    u = res.exact()
    res.snapshots = [Field(u.copy(), t) for t in cfg.snapshots]
    res.last_finite = res.snapshots[-1]
    return res


def _solve(command, cfg, exact_only):
    if command == "burgers":
        return _exact_burgers(cfg) if exact_only else run_burgers(cfg)
    if command == "convdiff":
        return run_convdiff(cfg)
    return solve_potential(cfg)


def _status(command, res):
    if command.startswith("potential"):
        return False, bool(res.converged), dict(iterations=res.iterations, residual=res.residual,
                                                errors=res.errors)
    extra = {"divergence_time": res.divergence_time}
    if command == "convdiff":
        extra["fronts"] = {f"{s.t:g}": s.front for s in res.snapshots}
        extra["l2_errors"] = {f"{s.t:g}": s.error.l2 for s in res.snapshots}
        extra["boundary_drift"] = res.boundary_drift
    elif res.error is not None:
        extra["linf_error"] = res.error.linf
    return bool(res.diverged), True, extra


def run_command(command, params, out_dir, name, preset=None, seed=None):
    """Solve, write CSV + gnuplot script + manifest, and return the manifest."""
    cfg, exact_only = _make_config(command, params)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    res = _solve(command, cfg, exact_only)
    runtime = time.perf_counter() - t0

    csv_path = write_snapshot_csv(res, out_dir / f"{name}.csv")
    if command.startswith("potential"):
        gp = write_gnuplot(out_dir / f"{name}.gp", csv_path.name, name, "2d")
    else:
        gp = write_gnuplot(out_dir / f"{name}.gp", csv_path.name, name, "1d",
                           times=[s.t for s in res.snapshots])
    diverged, converged, extra = _status(command, res)
    resolved = {k: v for k, v in dataclasses.asdict(cfg).items() if not callable(v)}
    if exact_only:
        resolved["exact_only"] = True
    if seed is not None:
        resolved["seed"] = seed
    manifest = RunManifest(subcommand=command, params=resolved, version=__version__,
                           presets_version=PRESETS_VERSION, preset=preset,
                           runtime_s=runtime, files=[csv_path.name, gp.name],
                           diverged=diverged, converged=converged, extra=extra)
    write_manifest(manifest, out_dir / f"{name}.json")
    return manifest


def _cmd_verify(args):
    from curvifd.checks import run_checks

    results = run_checks()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_figures(args):
    bad = False
    for name in FIGURE_PRESETS:
        command, params = get_preset(name)
        m = run_command(command, params, Path(args.out) / name, name, preset=name, seed=args.seed)
        flag = "diverged" if m.diverged else ("not converged" if not m.converged else "ok")
        print(f"{name:8s} {command:20s} {flag:14s} {m.runtime_s:6.2f} s")
        bad |= m.diverged or not m.converged
    return EXIT_SOLVER if (bad and args.strict) else EXIT_OK


def _cmd_solve(args):
    command = args.command
    params = resolve_params(command, args)
    name = args.preset or command
    m = run_command(command, params, args.out, name, preset=args.preset, seed=args.seed)
    for f in m.files:
        print(Path(args.out) / f)
    if m.diverged:
        print(f"warning: run diverged at t = {m.extra['divergence_time']}", file=sys.stderr)
    if not m.converged:
        print("warning: iteration did not reach the tolerance", file=sys.stderr)
    if args.strict and (m.diverged or not m.converged):
        return EXIT_SOLVER
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "figures":
            return _cmd_figures(args)
        return _cmd_solve(args)
    except ConfigError as exc:
        print(f"curvifd: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"curvifd: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

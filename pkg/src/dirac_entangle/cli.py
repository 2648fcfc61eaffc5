"""``dirac-entangle`` command line front end."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, DiracEntangleError, OutputError
from .experiments import COMMANDS, FIGURE_FOR_COMMAND, RunConfig, emit_plot_script, run, write_table
from .states import SEPARABLE_SAMPLINGS

log = logging.getLogger("dirac_entangle")

HELP = {
    "eigen-sweep": "eigenstate concurrence and Bloch length vs energy",
    "dynamics": "concurrence / CHSH trajectories of initial states",
    "avg-sweep": "time-averaged concurrence vs energy",
    "ensemble-sweep": "ensemble-averaged concurrence vs energy",
    "chsh": "CHSH parameter vs time at 25 meV",
}


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dirac-entangle",
        description="Spin-pseudospin entanglement in graphene with Rashba coupling.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name], description=HELP[name])
        p.add_argument("--config", type=Path, help="JSON run configuration; flags override it")
        p.add_argument("--lambda-r", type=_floats, dest="lambda_r", help="Rashba strength(s), ueV, comma separated")
        p.add_argument("--epsilon", type=_floats, help="energy value(s), ueV, comma separated")
        p.add_argument("--state", action="append", dest="states",
                       help="state name or JSON [[re,im]x4] literal; repeatable")
        p.add_argument("--n", type=int, help="ensemble size")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--sampling", choices=SEPARABLE_SAMPLINGS,
                       help="separable-state angle sampling (default: sphere)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--threads", type=int, help="worker threads; output does not depend on it")
        p.add_argument("--plot", action="store_true", help="also write a gnuplot script next to --out")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    overrides = {
        k: getattr(args, k)
        for k in ("lambda_r", "epsilon", "states", "n", "seed", "sampling", "out", "format", "threads")
    }
    try:
        if args.config is not None:
            config = RunConfig.from_file(args.config, command=args.command, **overrides)
        else:
            config = RunConfig.from_mapping(
                {"command": args.command, **{k: v for k, v in overrides.items() if v is not None}}
            )
        if args.plot and config.out is None:
            raise ConfigError("--plot needs --out so the script can reference the data file")
        table = run(config)
        text = write_table(table, config.out, config.format)
        if config.out is None:
            sys.stdout.write(text)
        if args.plot:
            if config.format != "csv":
                raise ConfigError("--plot works with --format csv only")
            out = Path(config.out)
            script = emit_plot_script(table, FIGURE_FOR_COMMAND[config.command], out.name)
            try:
                out.with_suffix(".gp").write_text(script)
            except OSError as exc:
                raise OutputError(f"cannot write {out.with_suffix('.gp')}: {exc.strerror}") from exc
        log.info("%s: %d rows", config.command, len(table))
    except DiracEntangleError as exc:
        print(f"dirac-entangle: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

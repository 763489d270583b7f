"""
Command-line front end: helmholtz-cubature {eval, converge, coeffs}.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

from helmholtz_cubature import __version__
from helmholtz_cubature.automation.runner import CubatureRunner
from helmholtz_cubature.utils.config import RunConfig
from helmholtz_cubature.utils.csv_output import write_csv
from helmholtz_cubature.utils.exception import ConfigError, CustomException


def _shared(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key=value file; flags override it")
    parser.add_argument("--domain", choices=["circle", "ellipse", "thin"])
    parser.add_argument("--a", type=float, help="major semi-axis")
    parser.add_argument("--b", type=float, help="minor semi-axis (b <= a)")
    parser.add_argument("--density", choices=["f", "g", "oscill"])
    parser.add_argument("--lambda2", type=float)
    parser.add_argument("--h", action="append", help="grid step, e.g. 2^-7 or 1/128 (repeatable)")
    parser.add_argument("--D", type=float)
    parser.add_argument("--M", type=int)
    parser.add_argument("--r", type=float)
    parser.add_argument("--rule", choices=["coarse", "fine"], help="quadrature preset")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--tau", type=float)
    parser.add_argument("--smin", type=int)
    parser.add_argument("--smax", type=int)
    parser.add_argument("--points", help="CSV file with x1,x2 or inline 'x1,x2;x1,x2'")
    parser.add_argument("--out", help="output CSV path (default stdout)")
    parser.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helmholtz-cubature",
        description="Volume potentials of -Lap + lambda^2 over ellipses by boundary-corrected cubature.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="potential values at points")
    _shared(ev)
    ev.add_argument("--exact", action="store_const", const=True, default=None,
                    help="fail when the density has no exact potential")

    conv = sub.add_parser("converge", help="errors and observed orders over several steps")
    _shared(conv)
    conv.add_argument("--reference", choices=["exact", "finest"],
                      help="compare with the exact potential or with the finest step")

    co = sub.add_parser("coeffs", help="inspect a- and b-coefficients")
    _shared(co)
    co.add_argument("--ksq", action="append", type=int, help="integer |k-m|^2 (repeatable)")
    co.add_argument("--pair", action="append", help="strip pair 'k1,k2:m1,m2' (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    try:
        config = RunConfig.resolve(flags, args.config)
        runner = CubatureRunner(config)
        df = runner.run_all(args.command)
        write_csv(df, runner.header(args.command), config.out)
    except CustomException as e:
        print(f"helmholtz-cubature: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"helmholtz-cubature: {e}", file=sys.stderr)
        return ConfigError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

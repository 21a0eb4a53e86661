#! /usr/bin/env python3
#
# Copyright (C) 2023  Michael Gale

# Permission is hereby granted, free of charge, to any person
# obtaining a copy of this software and associated documentation
# files (the "Software"), to deal in the Software without restriction,
# including without limitation the rights to use, copy, modify, merge,
# publish, distribute, sublicense, and/or sell copies of the Software,
# and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be
# included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
# EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
# OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
# IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY
# CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT,
# TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
# SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.
#
# eitsim command line front end

import argparse
from argparse import RawDescriptionHelpFormatter
import sys

from rich import print

from eittool import *
from eittool.runconfig import load_config
from eittool.runner import EXIT_CONFIG, EXIT_OK, EXIT_USAGE
from eittool.helpers import log_message


DESC = """
Simulate the mechanical analog of electromagnetically induced transparency for one
or two nano-mechanical resonators coupled to a spin ensemble: susceptibility spectra,
normal modes, slow-light group velocity and oracle validation.
"""

EPILOG = """
A run configuration is a JSON or YAML document (or a built-in preset) of the form:

{
  "mode": "double",
  "spin": {"omega": 1.0, "gamma": 0.05},
  "resonators": [
    {"omega": 1.0, "gamma": 1e-7, "coupling": 0.03},
    {"omega": 1.5, "gamma": 1e-7, "coupling": 0.05}
  ],
  "ensemble": {"n_spins": 20, "volume_nm3": 4188.79, "g_factor": 2.0,
               "omega_scale_rad_s": 1e6},
  "drive": {"g_p": 1.0},
  "scan": {"omega_min": 0.5, "omega_max": 2.0, "points": 3001}
}

Frequencies and damping rates are in units of the spin frequency w0.
Individual fields are overridden with --set, e.g. --set scan.points=5001
or --set resonators.1.gamma=1e-4

Exit codes: 0 ok, 1 usage, 2 configuration, 3 numerical, 4 validation failed.
"""


class EitArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        log_message("%s: error: %s" % (self.prog, message))
        sys.exit(EXIT_USAGE)


def add_common_arguments(parser):
    parser.add_argument("-c", "--config", default=None, help="Run configuration file")
    parser.add_argument("-p", "--preset", default=None, help="Built-in preset name")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration field by dotted path (repeatable)",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=False,
        help="Log progress to stderr",
    )


def build_parser():
    parser = EitArgumentParser(
        prog="eitsim",
        description=DESC,
        epilog=EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=VERSION)
    commands = parser.add_subparsers(dest="command", parser_class=EitArgumentParser)

    spectrum = commands.add_parser("spectrum", help="Scan chi, n and v_g/c")
    add_common_arguments(spectrum)
    spectrum.add_argument(
        "-f", "--format", default="csv", choices=["csv", "json", "text"]
    )
    spectrum.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output file (CSV also writes <output>.peaks.csv)",
    )

    modes = commands.add_parser("modes", help="Undamped normal-mode analysis")
    add_common_arguments(modes)
    modes.add_argument("-f", "--format", default="text", choices=["csv", "json", "text"])

    validate = commands.add_parser("validate", help="Run the oracle checks")
    add_common_arguments(validate)
    validate.add_argument(
        "-k",
        "--check",
        default="all",
        choices=["timedomain", "bosonization", "all"],
        help="Which oracle to run (default=all)",
    )

    commands.add_parser("presets", help="List the built-in presets")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    argsd = vars(args)
    if argsd["command"] is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    if argsd["command"] == "presets":
        for name in sorted(PRESETS):
            cfg = PRESETS[name]
            couplings = ", ".join(
                "%g" % (r["coupling"]) for r in cfg["resonators"]
            )
            print(
                "%s %s  couplings: %s"
                % (colour_label_str(name), cfg["mode"], couplings)
            )
        return EXIT_OK

    try:
        config = load_config(
            path=argsd["config"], preset=argsd["preset"], overrides=argsd["overrides"]
        )
    except ConfigException as e:
        log_message("Configuration error: %s" % (e))
        return EXIT_CONFIG

    if argsd["command"] == "spectrum":
        return run_spectrum(
            config,
            output_format=argsd["format"],
            output=argsd["output"],
            verbose=argsd["verbose"],
        )
    if argsd["command"] == "modes":
        return run_modes(config, output_format=argsd["format"], verbose=argsd["verbose"])
    return run_validate(config, check=argsd["check"], verbose=argsd["verbose"])


if __name__ == "__main__":
    sys.exit(main())

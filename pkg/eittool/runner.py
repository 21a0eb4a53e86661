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
# EitRunner class - runs spectrum scans, mode analysis and oracle
# validation for a RunConfig and serializes the results

import csv
import functools
import json
import sys

import numpy as np
from rich import print

from eittool import *
from .helpers import log_message, fmt_float
from .response import scan_spectrum, lineshape
from .modes import eigenfrequencies, find_peaks, find_windows
from .langevin import timedomain_amplitude
from .exactmodel import ExactModel, exact_spectrum, bosonization_error
from .runconfig import RunConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VALIDATION = 4

NUMERIC_EXCEPTIONS = (
    InvalidParameterException,
    UnstableParametersException,
    UndefinedPrefactorException,
    SingularResponseException,
    BranchPointException,
    DivergentGroupIndexException,
    PreconditionException,
    IntegrationDivergedException,
    HilbertSpaceTooLargeException,
)

SPECTRUM_COLUMNS = ["omega", "re_chi", "im_chi", "re_n", "im_n", "vg_over_c"]
SUMMARY_COLUMNS = ["kind", "location", "im_chi", "re_chi_slope", "vg_over_c"]

CHECKS = ("timedomain", "bosonization", "all")

ORACLE_TOL = 1e-3
STEP_HALVING_TOL = 1e-4
BOSONIZATION_TOL = 0.02
CUTOFF_TOL = 1e-6
BOSONIZATION_SPINS = (2, 4, 6)
BOSONIZATION_STRENGTH = 0.1


def fmt_number(value):
    """Shortest round-trip decimal form."""
    return repr(float(value))


def peak_dict(peak):
    return {"location": peak.location, "height": peak.height}


def window_dict(window):
    return {
        "left": window.left.location,
        "right": window.right.location,
        "location": window.location,
        "depth": window.depth,
        "slope": window.slope,
        "normal_dispersion": window.normal_dispersion,
        "vg_over_c": window.vg_over_c,
    }


class EitRunner:
    def __init__(self, config, **kwargs):
        if not isinstance(config, RunConfig):
            config = RunConfig(config)
        self.config = config
        self.logging = False
        for k, v in kwargs.items():
            if k in self.__dict__:
                self.__dict__[k] = v

    def log(self, msg):
        if self.logging:
            log_message(msg)

    def spectrum(self):
        """Returns (Spectrum, peaks, windows) over the configured grid."""
        cfg = self.config
        sys_params = cfg.to_system()
        scan = cfg.scan
        self.log(
            "Scanning %s over [%s, %s] with %d points"
            % (cfg, scan["omega_min"], scan["omega_max"], scan["points"])
        )
        spectrum = scan_spectrum(
            sys_params,
            cfg.to_material(),
            scan["omega_min"],
            scan["omega_max"],
            points=scan["points"],
        )
        peaks = find_peaks(spectrum)
        windows = find_windows(spectrum, peaks)
        self.log("Found %d peak(s) and %d window(s)" % (len(peaks), len(windows)))
        return spectrum, peaks, windows

    def modes(self):
        return eigenfrequencies(self.config.to_system(check_stability=False))

    def _probe_frequencies(self, sys_params):
        cfg = self.config
        spectrum = scan_spectrum(
            sys_params,
            cfg.to_material(),
            cfg.scan["omega_min"],
            cfg.scan["omega_max"],
            points=cfg.scan["points"],
        )
        peaks = find_peaks(spectrum)
        windows = find_windows(spectrum, peaks)
        probes = [p.location for p in peaks] + [w.location for w in windows]
        if not probes:
            probes = list(eigenfrequencies(sys_params).frequencies)
        return sorted(probes)

    def check_timedomain(self):
        sys_params = self.config.to_system().with_min_gamma(MIN_ORACLE_GAMMA)
        checks = []
        for omega in self._probe_frequencies(sys_params):
            self.log("Time-domain oracle at W = %s" % (fmt_float(omega)))
            expected = lineshape(sys_params, omega)
            z = timedomain_amplitude(sys_params, omega, logging=self.logging)
            z_half = timedomain_amplitude(
                sys_params, omega, refine=2, logging=self.logging
            )
            checks.append(
                self._check(
                    "timedomain@%s" % (fmt_float(omega)),
                    abs(z - expected) / abs(expected),
                    ORACLE_TOL,
                )
            )
            checks.append(
                self._check(
                    "step_halving@%s" % (fmt_float(omega)),
                    abs(z_half - z) / abs(z),
                    STEP_HALVING_TOL,
                )
            )
        return checks

    def check_bosonization(self):
        omega = self.config.resonators[0]["omega"]
        errors = []
        for n in BOSONIZATION_SPINS:
            model = ExactModel(
                n_spins=n,
                omegas=[omega],
                couplings=[BOSONIZATION_STRENGTH / np.sqrt(n)],
                logging=self.logging,
            )
            errors.append(bosonization_error(model))
        steps = np.diff(errors)
        low = ExactModel(
            n_spins=BOSONIZATION_SPINS[0],
            omegas=[omega],
            couplings=[BOSONIZATION_STRENGTH / np.sqrt(BOSONIZATION_SPINS[0])],
            boson_cutoff=5,
        )
        high = ExactModel(
            n_spins=BOSONIZATION_SPINS[0],
            omegas=[omega],
            couplings=[BOSONIZATION_STRENGTH / np.sqrt(BOSONIZATION_SPINS[0])],
            boson_cutoff=7,
        )
        drift = np.max(np.abs(exact_spectrum(high)[:4] - exact_spectrum(low)[:4]))
        return [
            self._check(
                "bosonization_n%d" % (BOSONIZATION_SPINS[0]),
                errors[0],
                BOSONIZATION_TOL,
            ),
            self._check(
                "bosonization_monotone",
                float(np.max(steps)),
                0.0,
                passed=bool(np.all(steps < 0)),
            ),
            self._check("cutoff_convergence", drift, CUTOFF_TOL),
        ]

    def _check(self, name, residual, tolerance, passed=None):
        residual = float(residual)
        if passed is None:
            passed = bool(residual <= tolerance)
        self.log("%s: residual %.3e (tol %.1e) %s" % (name, residual, tolerance, passed))
        return {
            "name": name,
            "passed": passed,
            "residual": residual,
            "tolerance": tolerance,
        }

    def validate(self, check="all"):
        if check not in CHECKS:
            raise PreconditionException("unknown check '%s'" % (check))
        checks = []
        if check in ("timedomain", "all"):
            checks.extend(self.check_timedomain())
        if check in ("bosonization", "all"):
            checks.extend(self.check_bosonization())
        return {
            "digest": self.config.digest(),
            "checks": checks,
            "passed": all(c["passed"] for c in checks),
        }


def write_spectrum_csv(spectrum, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SPECTRUM_COLUMNS)
    rows = zip(spectrum.omegas, spectrum.chi, spectrum.n, spectrum.vg_over_c)
    for w, c, n, v in rows:
        writer.writerow(
            [fmt_number(x) for x in (w, c.real, c.imag, n.real, n.imag, v)]
        )


def write_summary_csv(peaks, windows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for p in peaks:
        writer.writerow(["peak", fmt_number(p.location), fmt_number(p.height), "", ""])
    for w in windows:
        writer.writerow(
            [
                "window",
                fmt_number(w.location),
                fmt_number(w.depth),
                fmt_number(w.slope),
                fmt_number(w.vg_over_c),
            ]
        )


def spectrum_dict(config, spectrum, peaks, windows):
    return {
        "config": config.to_dict(),
        "digest": config.digest(),
        "spectrum": {
            "omega": [float(x) for x in spectrum.omegas],
            "re_chi": [float(x) for x in spectrum.chi.real],
            "im_chi": [float(x) for x in spectrum.chi.imag],
            "re_n": [float(x) for x in spectrum.n.real],
            "im_n": [float(x) for x in spectrum.n.imag],
            "vg_over_c": [float(x) for x in spectrum.vg_over_c],
        },
        "peaks": [peak_dict(p) for p in peaks],
        "windows": [window_dict(w) for w in windows],
    }


def print_spectrum_summary(config, peaks, windows, stream):
    print("Spectrum of %s" % (colour_label_str(str(config))), file=stream)
    for i, p in enumerate(peaks):
        print(
            "  Peak %d at W = %s  Im chi = %s"
            % (i + 1, colour_freq_str(p.location), colour_value_str(p.height)),
            file=stream,
        )
    for i, w in enumerate(windows):
        print(
            "  Window %d at W = %s  Im chi = %s  dRe chi/dW = %s  vg/c = %s"
            "  normal dispersion: %s"
            % (
                i + 1,
                colour_freq_str(w.location),
                colour_value_str(w.depth),
                colour_value_str(w.slope),
                colour_value_str(w.vg_over_c),
                colour_flag_str(w.normal_dispersion),
            ),
            file=stream,
        )


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(config, *args, **kwargs):
        try:
            if not isinstance(config, RunConfig):
                config = RunConfig(config)
            return fn(config, *args, **kwargs)
        except ConfigException as e:
            log_message("Configuration error: %s" % (e))
            return EXIT_CONFIG
        except NUMERIC_EXCEPTIONS as e:
            log_message("Numerical error: %s" % (e))
            return EXIT_NUMERIC

    return wrapper


@_guarded
def run_spectrum(config, output_format="csv", stream=None, output=None, verbose=False):
    """Scan chi, n and v_g/c and write the spectrum.

    CSV goes to `output` (with the peak and window summary in the sidecar
    `<output>.peaks.csv`) or to `stream`; JSON embeds the config, its digest
    and the summary.
    """
    stream = stream or sys.stdout
    runner = EitRunner(config, logging=verbose)
    spectrum, peaks, windows = runner.spectrum()
    if output_format == "json":
        text = json.dumps(spectrum_dict(config, spectrum, peaks, windows), indent=2)
        if output is not None:
            with open(output, "w", newline="\n") as f:
                f.write(text + "\n")
        else:
            stream.write(text + "\n")
    elif output_format == "csv":
        if output is not None:
            with open(output, "w", newline="") as f:
                write_spectrum_csv(spectrum, f)
            with open(output + ".peaks.csv", "w", newline="") as f:
                write_summary_csv(peaks, windows, f)
        else:
            write_spectrum_csv(spectrum, stream)
    elif output_format == "text":
        print_spectrum_summary(config, peaks, windows, stream)
    else:
        log_message("Unknown output format '%s'" % (output_format))
        return EXIT_USAGE
    return EXIT_OK


def modes_dict(config, modes):
    return {
        "config": config.to_dict(),
        "digest": config.digest(),
        "frequencies": list(modes.frequencies),
        "stable": modes.stable,
        "dark_mode": modes.dark_mode,
        "interlaced": modes.interlaced,
        "roots": list(modes.roots),
        "trace_residual": modes.trace_residual,
    }


@_guarded
def run_modes(config, output_format="text", stream=None, verbose=False):
    """Report the undamped normal modes; an unstable set is reported, not an error."""
    stream = stream or sys.stdout
    runner = EitRunner(config, logging=verbose)
    modes = runner.modes()
    if output_format == "json":
        stream.write(json.dumps(modes_dict(config, modes), indent=2) + "\n")
    elif output_format == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["index", "omega", "omega_squared"])
        for i, w in enumerate(modes.frequencies):
            writer.writerow([i + 1, fmt_number(w), fmt_number(w * w)])
    elif output_format == "text":
        print("Normal modes of %s" % (colour_label_str(str(config))), file=stream)
        for i, w in enumerate(modes.frequencies):
            print("  W%d = %s" % (i + 1, colour_freq_str(w)), file=stream)
        print("  Stable: %s" % (colour_flag_str(modes.stable)), file=stream)
        if modes.dark_mode is not None:
            print(
                "  Dark mode at W = %s (not driven by the probe field)"
                % (colour_freq_str(modes.dark_mode)),
                file=stream,
            )
        if modes.interlaced is not None:
            print("  Interlaced: %s" % (colour_flag_str(modes.interlaced)), file=stream)
        print(
            "  Trace residual: %s" % (colour_value_str(modes.trace_residual)),
            file=stream,
        )
    else:
        log_message("Unknown output format '%s'" % (output_format))
        return EXIT_USAGE
    return EXIT_OK


@_guarded
def run_validate(config, check="all", stream=None, verbose=False):
    """Run the oracle checks and write a JSON report; exit 4 if any check fails."""
    stream = stream or sys.stdout
    if check not in CHECKS:
        log_message("Unknown check '%s'" % (check))
        return EXIT_USAGE
    runner = EitRunner(config, logging=verbose)
    report = runner.validate(check)
    stream.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VALIDATION

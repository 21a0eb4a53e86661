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
# RunConfig class - run configuration, presets and overrides

import copy
import hashlib
import json
import math

import metayaml

from eittool import *
from .model import OscillatorParams, SystemParams, MaterialParams

MODES = ("single", "double")


def _scan(omega_min=0.5, omega_max=2.0, points=DEFAULT_GRID_POINTS):
    return {"omega_min": omega_min, "omega_max": omega_max, "points": points}


def _preset(name, resonators, scan=None):
    return {
        "name": name,
        "mode": "single" if len(resonators) == 1 else "double",
        "spin": {"omega": 1.0, "gamma": 5e-2},
        "resonators": [
            {"omega": w, "gamma": 1e-7, "coupling": g} for w, g in resonators
        ],
        "ensemble": {
            "n_spins": 20,
            "volume_nm3": DEFAULT_VOLUME_NM3,
            "g_factor": G_FACTOR,
            "omega_scale_rad_s": DEFAULT_OMEGA_SCALE,
        },
        "drive": {"g_p": 1.0},
        "scan": scan or _scan(),
    }


PRESETS = {
    "fig4a": _preset("fig4a", [(1.0, 0.0)]),
    "fig4b": _preset("fig4b", [(1.0, 0.05)]),
    "fig5a": _preset("fig5a", [(1.0, 0.0), (1.5, 0.0)]),
    "fig5b": _preset("fig5b", [(1.0, 0.03), (1.5, 0.05)]),
    "fig5c": _preset("fig5c", [(1.0, 0.05), (1.5, 0.05)]),
    "fig5d": _preset("fig5d", [(1.0, 0.07), (1.5, 0.05)]),
    "fig6": _preset("fig6", [(1.0, 0.03), (1.0, 0.05)]),
    "fig7a": _preset("fig7a", [(1.0, 0.03), (1.5, 0.05)], _scan(0.92, 1.045)),
    "fig7b": _preset("fig7b", [(1.0, 0.03), (1.5, 0.05)], _scan(1.06, 1.515)),
}


def _number(value, kind, path):
    if isinstance(value, bool):
        raise ConfigException("%s must be a number, got %r" % (path, value))
    try:
        result = kind(value)
    except (TypeError, ValueError, OverflowError):
        raise ConfigException("%s must be a number, got %r" % (path, value))
    if not math.isfinite(result):
        raise ConfigException("%s must be finite, got %r" % (path, value))
    if kind is int and result != float(value):
        raise ConfigException("%s must be an integer, got %r" % (path, value))
    return result


def _section(data, key):
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigException("'%s' must be a mapping" % (key))
    return value


class RunConfig:
    """A validated run configuration.

    Every numeric field is coerced with float()/int() since YAML readers
    return exponent literals such as 1e-07 as strings.
    """

    def __init__(self, data=None, **kwargs):
        data = copy.deepcopy(data or {})
        if not isinstance(data, dict):
            raise ConfigException("configuration must be a mapping")
        data.update(copy.deepcopy(kwargs))
        self.name = str(data.get("name", "") or "")
        self.mode = data.get("mode", "single")
        spin = _section(data, "spin")
        ensemble = _section(data, "ensemble")
        drive = _section(data, "drive")
        scan = _section(data, "scan")
        resonators = data.get("resonators", [])
        if not isinstance(resonators, list):
            raise ConfigException("'resonators' must be a list")

        self.spin = {
            "omega": _number(spin.get("omega", 1.0), float, "spin.omega"),
            "gamma": _number(spin.get("gamma", 5e-2), float, "spin.gamma"),
        }
        self.resonators = []
        for i, r in enumerate(resonators):
            if not isinstance(r, dict):
                raise ConfigException("resonators.%d must be a mapping" % (i))
            self.resonators.append(
                {
                    k: _number(r.get(k, d), float, "resonators.%d.%s" % (i, k))
                    for k, d in (("omega", None), ("gamma", 0.0), ("coupling", 0.0))
                }
            )
        self.ensemble = {
            "n_spins": _number(ensemble.get("n_spins", 20), int, "ensemble.n_spins"),
            "volume_nm3": _number(
                ensemble.get("volume_nm3", DEFAULT_VOLUME_NM3),
                float,
                "ensemble.volume_nm3",
            ),
            "g_factor": _number(
                ensemble.get("g_factor", G_FACTOR), float, "ensemble.g_factor"
            ),
            "omega_scale_rad_s": _number(
                ensemble.get("omega_scale_rad_s", DEFAULT_OMEGA_SCALE),
                float,
                "ensemble.omega_scale_rad_s",
            ),
        }
        self.drive = {"g_p": _number(drive.get("g_p", 1.0), float, "drive.g_p")}
        self.scan = {
            "omega_min": _number(scan.get("omega_min", 0.5), float, "scan.omega_min"),
            "omega_max": _number(scan.get("omega_max", 2.0), float, "scan.omega_max"),
            "points": _number(
                scan.get("points", DEFAULT_GRID_POINTS), int, "scan.points"
            ),
        }
        self.validate()

    def __str__(self):
        return "RunConfig(%s, %s, %d resonator(s))" % (
            self.name or "custom",
            self.mode,
            len(self.resonators),
        )

    def validate(self):
        if self.mode not in MODES:
            raise ConfigException("mode must be one of %s" % (", ".join(MODES)))
        expected = 1 if self.mode == "single" else 2
        if len(self.resonators) != expected:
            raise ConfigException(
                "mode '%s' needs %d resonator(s), got %d"
                % (self.mode, expected, len(self.resonators))
            )
        if self.spin["omega"] != 1.0:
            raise ConfigException("spin.omega is the frequency unit and must be 1.0")
        if self.spin["gamma"] < 0:
            raise ConfigException("spin.gamma must be >= 0")
        for i, r in enumerate(self.resonators):
            if not r["omega"] > 0:
                raise ConfigException("resonators.%d.omega must be > 0" % (i))
            if r["gamma"] < 0:
                raise ConfigException("resonators.%d.gamma must be >= 0" % (i))
        if self.ensemble["n_spins"] < 1:
            raise ConfigException("ensemble.n_spins must be >= 1")
        for key in ("volume_nm3", "g_factor", "omega_scale_rad_s"):
            if not self.ensemble[key] > 0:
                raise ConfigException("ensemble.%s must be > 0" % (key))
        if self.drive["g_p"] < 0:
            raise ConfigException("drive.g_p must be >= 0")
        if not 0 < self.scan["omega_min"] < self.scan["omega_max"]:
            raise ConfigException("scan needs 0 < omega_min < omega_max")
        if self.scan["points"] < 3:
            raise ConfigException("scan.points must be >= 3")

    def to_dict(self):
        return {
            "name": self.name,
            "mode": self.mode,
            "spin": dict(self.spin),
            "resonators": [dict(r) for r in self.resonators],
            "ensemble": dict(self.ensemble),
            "drive": dict(self.drive),
            "scan": dict(self.scan),
        }

    def canonical_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self):
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def to_system(self, check_stability=True):
        return SystemParams(
            spin=OscillatorParams(self.spin["omega"], self.spin["gamma"]),
            resonators=[
                OscillatorParams(r["omega"], r["gamma"]) for r in self.resonators
            ],
            couplings=[r["coupling"] for r in self.resonators],
            n_spins=self.ensemble["n_spins"],
            drive_gp=self.drive["g_p"],
            check_stability=check_stability,
        )

    def to_material(self):
        return MaterialParams(
            volume=self.ensemble["volume_nm3"] * NM3,
            omega_scale=self.ensemble["omega_scale_rad_s"],
            g_factor=self.ensemble["g_factor"],
        )


def parse_override(text):
    """Split 'a.b.0.c=value' into (path, value); values are JSON when possible."""
    if "=" not in text:
        raise ConfigException("override '%s' must have the form key=value" % (text))
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigException("override '%s' has an empty key" % (text))
    try:
        value = json.loads(raw)
    except ValueError:
        value = raw.strip()
    return key.split("."), value


def apply_override(data, path, value):
    node = data
    for i, part in enumerate(path):
        last = i == len(path) - 1
        if isinstance(node, list):
            try:
                index = int(part)
                node[index]
            except (ValueError, IndexError):
                raise ConfigException(
                    "no list item '%s' in override %s" % (part, ".".join(path))
                )
            if last:
                node[index] = value
            else:
                node = node[index]
        elif isinstance(node, dict):
            if last:
                node[part] = value
            else:
                node = node.setdefault(part, {})
        else:
            raise ConfigException("cannot descend into '%s'" % (".".join(path[:i])))
    return data


def _merge(base, extra):
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _merge(base[k], v)
        else:
            base[k] = v
    return base


def load_config(path=None, preset=None, overrides=()):
    """Build a RunConfig from a preset and/or a JSON or YAML file, then apply
    dotted-path overrides."""
    if path is None and preset is None:
        raise ConfigException("a config file or a preset name is required")
    data = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigException(
                "unknown preset '%s' (choose from %s)"
                % (preset, ", ".join(sorted(PRESETS)))
            )
        data = copy.deepcopy(PRESETS[preset])
    if path is not None:
        try:
            doc = metayaml.read(path, disable_order_dict=True)
        except Exception as e:
            raise ConfigException("cannot read config file %s: %s" % (path, e))
        if not isinstance(doc, dict):
            raise ConfigException("config file %s must hold a mapping" % (path))
        _merge(data, doc)
    for text in overrides or ():
        keys, value = parse_override(text)
        apply_override(data, keys, value)
    return RunConfig(data)

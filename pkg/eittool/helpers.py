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
# Helper utility functions

import sys

from rich import print
from toolbox import rich_colour_str

FREQ_COLOUR = "#A090FF"
LABEL_COLOUR = "#30C0A0"
VALUE_COLOUR = "#F0D0A0"
PASS_COLOUR = "#20C040"
FAIL_COLOUR = "#F09070"
DIM_COLOUR = "#808080"


def fmt_float(value, places=6):
    return "%.*f" % (places, value)


def colour_freq_str(omega, suffix=""):
    return rich_colour_str(fmt_float(omega), FREQ_COLOUR, bold=True, suffix=suffix)


def colour_label_str(s, suffix=""):
    return rich_colour_str(s, LABEL_COLOUR, bold=True, suffix=suffix)


def colour_value_str(value, suffix=""):
    if isinstance(value, float):
        value = "%.3e" % (value)
    return rich_colour_str(str(value), VALUE_COLOUR, suffix=suffix)


def colour_flag_str(flag, true_text="yes", false_text="no", suffix=""):
    if flag:
        return rich_colour_str(true_text, PASS_COLOUR, bold=True, suffix=suffix)
    return rich_colour_str(false_text, FAIL_COLOUR, bold=True, suffix=suffix)


def log_message(msg):
    """Progress messages go to stderr so data written to stdout stays clean."""
    print("[%s]%s[/]" % (DIM_COLOUR, msg), file=sys.stderr)

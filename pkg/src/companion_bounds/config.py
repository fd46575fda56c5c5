"""Sweep config files.

INI-style: one section per sweep, whitespace-separated lists (function
names may contain commas, so commas never separate list items)::

    [quick]
    theorems  = thm2.1 thm2.2
    functions = pow:2 exp poly:1,-1,1
    intervals = 0.5,1.5 1,2
    x_count   = 9
    s         = 0.25 0.5 0.75 1
    q         = 1.5 2 3
    seed      = 0
    samples   = 256
    tol       = 1e-9
    quad_tol  = 1e-11

Omitted keys take the built-in defaults; ``functions = default`` and
``theorems = default`` spell them out explicitly.
"""

from __future__ import annotations

import configparser

from .core import Interval
from .errors import InvalidParameter
from .funcat import DEFAULT_CATALOG
from .sweep import DEFAULT_THEOREMS, SweepConfig

KEYS = {"theorems", "functions", "intervals", "x_count", "s", "q", "seed", "samples", "tol", "quad_tol"}


class ConfigError(InvalidParameter):
    pass


def _floats(text: str, key: str) -> tuple:
    try:
        return tuple(float(t) for t in text.split())
    except ValueError as exc:
        raise ConfigError(f"bad number in {key!r}: {exc}") from None


def section_to_config(name: str, sec) -> SweepConfig:
    unknown = set(sec.keys()) - KEYS
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {sorted(unknown)}")
    kw = {"name": name}
    if "theorems" in sec:
        items = sec["theorems"].split()
        kw["theorems"] = DEFAULT_THEOREMS if items == ["default"] else tuple(items)
    if "functions" in sec:
        items = sec["functions"].split()
        kw["functions"] = DEFAULT_CATALOG if items == ["default"] else tuple(items)
    if "intervals" in sec:
        kw["intervals"] = tuple(Interval.parse(t) for t in sec["intervals"].split())
    if "s" in sec:
        kw["s_values"] = _floats(sec["s"], "s")
    if "q" in sec:
        kw["q_values"] = _floats(sec["q"], "q")
    try:
        if "x_count" in sec:
            kw["x_count"] = sec.getint("x_count")
        if "seed" in sec:
            kw["seed"] = sec.getint("seed")
        if "samples" in sec:
            kw["n_samples"] = sec.getint("samples")
        if "tol" in sec:
            kw["rel_tol"] = sec.getfloat("tol")
        if "quad_tol" in sec:
            kw["quad_tol"] = sec.getfloat("quad_tol")
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None
    return SweepConfig(**kw)


def parse_config(text: str) -> list:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not parser.sections():
        raise ConfigError("config has no sweep sections")
    return [section_to_config(name, parser[name]) for name in parser.sections()]


def load_config(path) -> list:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    return parse_config(text)

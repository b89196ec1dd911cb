"""Experiment configuration files.

Configs are INI files with one ``[experiment]`` section naming the kind and
any number of further sections.  Sections called ``case <name>`` are the
rows of a table; ``[defaults]`` supplies values shared by all cases.
Numbers may be written as simple expressions in ``pi``, e.g.
``theta = pi/4``.

Example::

    [experiment]
    kind = grating-mrc

    [defaults]
    N = 256

    [case I-45]
    profile = I
    theta = pi/4
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "KINDS",
    "parse_number",
    "load_config",
    "bundled_configs",
    "resolve_config_path",
]

KINDS = (
    "direct-mrc",
    "direct-biem",
    "grating-mrc",
    "inverse-sfm",
    "inverse-lsm",
    "illposed-demo",
    "synthesize",
)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left), _eval(node.right))
    raise ValueError("unsupported expression")


def parse_number(text: str) -> float:
    """Parse a float or an arithmetic expression in ``pi``."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(_eval(ast.parse(text, mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


@dataclass
class Section:
    """Typed accessors over one config section with field-level errors."""

    name: str
    values: dict[str, str]
    fallback: dict[str, str] = field(default_factory=dict)

    def _raw(self, key: str, default):
        if key in self.values:
            return self.values[key]
        if key in self.fallback:
            return self.fallback[key]
        if default is _MISSING:
            raise ConfigError(f"[{self.name}] {key}: required field is missing")
        return default

    def has(self, key: str) -> bool:
        return key in self.values or key in self.fallback

    def str(self, key: str, default=None) -> str:
        v = self._raw(key, _MISSING if default is None else default)
        return str(v).strip()

    def float(self, key: str, default=None, positive: bool = False, nonneg: bool = False) -> float:
        v = self._raw(key, _MISSING if default is None else default)
        try:
            x = parse_number(v) if isinstance(v, str) else float(v)
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: {exc}") from None
        if positive and not x > 0:
            raise ConfigError(f"[{self.name}] {key}: must be positive, got {x!r}")
        if nonneg and x < 0:
            raise ConfigError(f"[{self.name}] {key}: must be non-negative, got {x!r}")
        return x

    def int(self, key: str, default=None, minimum: int | None = None) -> int:
        v = self._raw(key, _MISSING if default is None else default)
        try:
            x = int(str(v).strip())
        except ValueError:
            raise ConfigError(f"[{self.name}] {key}: expected an integer, got {v!r}") from None
        if minimum is not None and x < minimum:
            raise ConfigError(f"[{self.name}] {key}: must be at least {minimum}, got {x}")
        return x

    def floats(self, key: str, default=None, length: int | None = None) -> list[float]:
        v = self._raw(key, _MISSING if default is None else default)
        if not isinstance(v, str):
            items = [float(a) for a in v]
        else:
            try:
                items = [parse_number(p) for p in v.split(",") if p.strip()]
            except ValueError as exc:
                raise ConfigError(f"[{self.name}] {key}: {exc}") from None
        if length is not None and len(items) != length:
            raise ConfigError(f"[{self.name}] {key}: expected {length} values, got {len(items)}")
        return items

    def complexes(self, key: str, default=None) -> list[complex]:
        """Comma-separated complex numbers such as ``0.88-0.17i``."""
        v = self._raw(key, _MISSING if default is None else default)
        out = []
        for p in str(v).split(","):
            p = p.strip().replace(" ", "").replace("i", "j")
            if not p:
                continue
            try:
                out.append(complex(p))
            except ValueError:
                raise ConfigError(f"[{self.name}] {key}: cannot parse complex number {p!r}") from None
        return out

    def bool(self, key: str, default=None) -> bool:
        v = self._raw(key, _MISSING if default is None else default)
        if isinstance(v, bool):
            return v
        s = str(v).strip().lower()
        if s in ("1", "yes", "true", "on"):
            return True
        if s in ("0", "no", "false", "off"):
            return False
        raise ConfigError(f"[{self.name}] {key}: expected yes/no, got {v!r}")

    def unit_vector(self, key: str, default=None) -> tuple[float, float]:
        a = self.floats(key, default, length=2)
        n = math.hypot(*a)
        if abs(n - 1.0) > 1e-9:
            raise ConfigError(f"[{self.name}] {key}: must be a unit vector, got {a}")
        return (a[0], a[1])


class _Missing:
    pass


_MISSING = _Missing()


@dataclass
class ExperimentConfig:
    """Parsed experiment file."""

    kind: str
    title: str
    sections: dict[str, dict[str, str]]
    source: str = ""
    text: str = ""

    @property
    def defaults(self) -> dict[str, str]:
        return self.sections.get("defaults", {})

    def section(self, name: str) -> Section:
        return Section(name, self.sections.get(name, {}), self.defaults)

    def cases(self) -> list[Section]:
        out = [Section(n[5:].strip(), v, self.defaults) for n, v in self.sections.items() if n.startswith("case ")]
        return out

    def as_dict(self) -> dict:
        return {"kind": self.kind, "title": self.title, "sections": self.sections}


def _parse(text: str, source: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive (N vs n)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if not cp.has_section("experiment"):
        raise ConfigError(f"{source}: missing [experiment] section")
    exp = cp["experiment"]
    kind = exp.get("kind", "").strip()
    if kind not in KINDS:
        raise ConfigError(f"[experiment] kind: must be one of {', '.join(KINDS)}, got {kind!r}")
    sections = {s: dict(cp[s]) for s in cp.sections()}
    return ExperimentConfig(kind, exp.get("title", "").strip(), sections, source, text)


def bundled_configs() -> dict[str, str]:
    """Names of shipped configs mapped to their first-line description."""
    out = {}
    root = resources.files("helmscat") / "configs"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".cfg"):
            cfg = _parse(entry.read_text(), entry.name)
            out[entry.name[:-4]] = f"{cfg.kind}: {cfg.title}"
    return out


def resolve_config_path(path: str) -> tuple[str, str]:
    """Return ``(text, source)`` for a file path or a bundled config name."""
    p = Path(path)
    if p.is_file():
        return p.read_text(), str(p)
    name = p.name[:-4] if p.name.endswith(".cfg") else p.name
    entry = resources.files("helmscat") / "configs" / f"{name}.cfg"
    if entry.is_file():
        return entry.read_text(), f"bundled:{name}"
    raise ConfigError(f"config {path!r} is neither a file nor a bundled config")


def load_config(path: str) -> ExperimentConfig:
    text, source = resolve_config_path(path)
    return _parse(text, source)

"""Plain-text ``key = value`` files for run defaults and attack suites.

Lines starting with ``#`` are comments. In a suite file, blank lines separate
attacks; a block with several ``kind`` lines is a composite applied in
order, each ``kind`` taking the parameter lines that follow it::

    kind = jpeg
    quality = 75

    kind = blur
    radius = 1
    kind = jpeg
    quality = 75
"""
from dataclasses import fields
from pathlib import Path

from .attacks import AttackSpec, composite
from .errors import ConfigError

_ATTACK_FIELDS = {f.name for f in fields(AttackSpec)} - {"kind", "steps"}
_CASTS = {"quality": int, "levels": int, "window": int, "displacement": int, "seed": int,
          "radius": float, "fraction": float, "corner": str}


def parse_pairs(text, source="<config>"):
    """Yield ``(lineno, key, value)`` and ``(lineno, None, None)`` for blank lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            yield lineno, None, None
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        yield lineno, key.lower().replace("_", "-"), value


def load_run_config(path):
    """Flat mapping of option name to string value."""
    text = Path(path).read_text()
    return {k: v for _, k, v in parse_pairs(text, str(path)) if k is not None}


def _make_attack(kind, params, where):
    kwargs = {}
    for key, value in params.items():
        name = key.replace("-", "_")
        if name not in _ATTACK_FIELDS:
            raise ConfigError(f"{where}: unknown attack parameter {key!r}")
        try:
            kwargs[name] = _CASTS[name](value)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key}: {value!r}") from exc
    return AttackSpec(kind, **kwargs)


def parse_suite(text, source="<suite>"):
    suite = []
    steps = []
    kind = None
    params = {}
    where = source

    def close_step():
        nonlocal kind, params
        if kind is not None:
            steps.append(_make_attack(kind, params, where))
        kind, params = None, {}

    def close_block():
        nonlocal steps
        close_step()
        if len(steps) == 1:
            suite.append(steps[0])
        elif steps:
            suite.append(composite(*steps))
        steps = []

    for lineno, key, value in parse_pairs(text, source):
        where = f"{source}:{lineno}"
        if key is None:
            close_block()
        elif key == "kind":
            close_step()
            kind = value.lower()
        elif kind is None:
            raise ConfigError(f"{where}: parameter {key!r} before any kind line")
        else:
            params[key] = value
    close_block()
    return suite


def load_suite(path):
    return parse_suite(Path(path).read_text(), str(path))


def format_suite(suite):
    """Inverse of :func:`parse_suite` for the given specs."""
    blocks = []
    for spec in suite:
        steps = spec.steps if spec.kind == "composite" else (spec,)
        lines = []
        for step in steps:
            lines.append(f"kind = {step.kind}")
            for name in _step_fields(step.kind):
                lines.append(f"{name} = {getattr(step, name)}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _step_fields(kind):
    return {
        "jpeg": ("quality",),
        "gray-quantize": ("levels",),
        "blur": ("radius",),
        "crop": ("fraction", "corner"),
        "median": ("window",),
        "jitter": ("displacement", "seed"),
    }[kind]

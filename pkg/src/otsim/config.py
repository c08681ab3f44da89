"""INI run configuration with line-numbered diagnostics."""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError


@dataclass
class RunConfig:
    """Parsed sections plus the source line of every key for error messages."""

    sections: dict[str, dict[str, str]] = field(default_factory=dict)
    lines: dict[tuple[str, str], int] = field(default_factory=dict)
    path: str | None = None

    def section(self, name: str) -> dict[str, str]:
        return self.sections.get(name, {})

    def where(self, section: str, key: str) -> str:
        line = self.lines.get((section, key))
        src = self.path or "<config>"
        return f"{src}:{line}" if line else f"{src} [{section}]"

    def get(self, section: str, key: str, default: Any = None, kind=float):
        raw = self.sections.get(section, {}).get(key)
        if raw is None:
            return default
        try:
            if kind is bool:
                low = raw.strip().lower()
                if low not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
                    raise ValueError(raw)
                return low in ("true", "yes", "1", "on")
            if kind is list:
                return [float(v) for v in raw.replace(",", " ").split()]
            return kind(raw.strip())
        except ValueError:
            raise ConfigError(
                f"{self.where(section, key)}: [{section}] {key} = {raw!r} is not a valid {kind.__name__}"
            ) from None

    def floats(self, section: str, allowed: set[str] | None = None) -> dict[str, float]:
        """All keys of a section as floats; unknown keys are configuration errors."""
        out = {}
        for key in self.section(section):
            if allowed is not None and key not in allowed:
                raise ConfigError(
                    f"{self.where(section, key)}: unknown key {key!r} in [{section}]; "
                    f"expected one of {', '.join(sorted(allowed))}"
                )
            out[key] = self.get(section, key)
        return out

    def canonical(self) -> str:
        return json.dumps(self.sections, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    lines: dict[tuple[str, str], int] = {}
    section = None
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s[0] in "#;":
            continue
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
            continue
        for sep in ("=", ":"):
            if sep in s and section is not None and not raw[0].isspace():
                key = s.split(sep, 1)[0].strip().lower()
                lines.setdefault((section, key), n)
                break
    return lines


def parse_config(text: str, path: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    src = path or "<config>"
    try:
        parser.read_string(text, source=src)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{src}:{exc.lineno}: key outside any [section]: {exc.line.strip()!r}") from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"{src}:{exc.lineno}: duplicate section [{exc.section}]") from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"{src}:{exc.lineno}: duplicate key {exc.option!r} in [{exc.section}]") from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"{src}:{lineno}: cannot parse line {line.strip()!r}") from None
    sections = {s: dict(parser[s]) for s in parser.sections()}
    return RunConfig(sections, _key_lines(text), path)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))

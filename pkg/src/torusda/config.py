"""Flat key-value run configuration.

One ``section.key = value`` assignment per line; blank lines and ``#``
comments are ignored. A single file fully determines a run, so the raw
text is kept verbatim for echoing into run manifests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

__all__ = ["Config"]

_REQUIRED = object()

_BOOL_WORDS = {
    "true": True,
    "yes": True,
    "on": True,
    "1": True,
    "false": False,
    "no": False,
    "off": False,
    "0": False,
}


@dataclass(frozen=True)
class _Entry:
    value: str
    line: int


class Config:
    """Parsed flat configuration with typed, diagnostic accessors.

    Every accessor names the key (and the line, when one exists) in its
    error message; `check_fully_used` catches misspelled keys after a
    command has read everything it understands.
    """

    def __init__(self, entries: dict, text: str, source: str = "<config>"):
        self._entries = entries
        self.text = text
        self.source = source
        self._used: set = set()

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> "Config":
        entries: dict = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{source}:{lineno}: expected 'section.key = value', got {raw.strip()!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not key or "." not in key:
                raise ConfigError(
                    f"{source}:{lineno}: key {key!r} must be dotted like 'section.key'"
                )
            if not value:
                raise ConfigError(f"{source}:{lineno}: key {key!r} has an empty value")
            if key in entries:
                raise ConfigError(
                    f"{source}:{lineno}: duplicate key {key!r}"
                    f" (first set on line {entries[key].line})"
                )
            entries[key] = _Entry(value, lineno)
        return cls(entries, text, source)

    @classmethod
    def from_file(cls, path) -> "Config":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        return cls.from_text(text, source=str(path))

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def _entry(self, key: str, default):
        self._used.add(key)
        entry = self._entries.get(key)
        if entry is None:
            if default is _REQUIRED:
                raise ConfigError(f"{self.source}: missing required key {key!r}")
            return None
        return entry

    def _typed(self, key: str, default, kind: str, convert):
        entry = self._entry(key, default)
        if entry is None:
            return default
        try:
            return convert(entry.value)
        except (ValueError, KeyError):
            raise ConfigError(
                f"{self.source}:{entry.line}: key {key!r} expects"
                f" {kind}, got {entry.value!r}"
            ) from None

    def get_str(self, key: str, default=_REQUIRED) -> str:
        entry = self._entry(key, default)
        return default if entry is None else entry.value

    def get_int(self, key: str, default=_REQUIRED) -> int:
        return self._typed(key, default, "an integer", int)

    def get_float(self, key: str, default=_REQUIRED) -> float:
        return self._typed(key, default, "a number", float)

    def get_bool(self, key: str, default=_REQUIRED) -> bool:
        return self._typed(
            key, default, "true/false", lambda v: _BOOL_WORDS[v.lower()]
        )

    def get_int_list(self, key: str, default=_REQUIRED) -> tuple:
        return self._typed(
            key,
            default,
            "a comma-separated integer list",
            lambda v: tuple(int(x) for x in v.split(",")),
        )

    def get_float_list(self, key: str, default=_REQUIRED) -> tuple:
        return self._typed(
            key,
            default,
            "a comma-separated number list",
            lambda v: tuple(float(x) for x in v.split(",")),
        )

    def unused_keys(self) -> list:
        return sorted(set(self._entries) - self._used)

    def check_fully_used(self) -> None:
        """Reject unrecognized keys so typos fail loudly, not silently."""
        for key in self.unused_keys():
            entry = self._entries[key]
            raise ConfigError(
                f"{self.source}:{entry.line}: unknown key {key!r}"
            )

"""Run configuration: nested key/value trees with YAML persistence.

Values are restricted to YAML-safe scalars, lists and mappings so that a
file round trip is lossless and a stable content hash can be derived for
checkpoint provenance. Dotted keys ("train.lr") address nested entries;
command-line overrides win over file values.
"""

import hashlib
import json
from pathlib import Path

import yaml


def _merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


class RunConfig:
    def __init__(self, data: dict | None = None):
        self._data = dict(data or {})

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: top level must be a mapping")
        return cls(data)

    def to_file(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(self._data, fh, sort_keys=True)
        return path

    def to_dict(self) -> dict:
        return json.loads(json.dumps(self._data))

    def get(self, dotted: str, default=None):
        node = self._data
        for part in dotted.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def require(self, dotted: str):
        sentinel = object()
        value = self.get(dotted, sentinel)
        if value is sentinel:
            raise KeyError(f"missing config key: {dotted}")
        return value

    def with_overrides(self, overrides: dict) -> "RunConfig":
        """Apply {dotted_key: value} overrides, returning a new config."""
        data = self.to_dict()
        for dotted, value in overrides.items():
            node = data
            parts = dotted.split(".")
            for part in parts[:-1]:
                node = node.setdefault(part, {})
                if not isinstance(node, dict):
                    raise ValueError(f"cannot override {dotted}: {part} is a scalar")
            node[parts[-1]] = value
        return RunConfig(data)

    def merged_over(self, defaults: dict) -> "RunConfig":
        return RunConfig(_merge(defaults, self._data))

    def content_hash(self) -> str:
        canonical = json.dumps(self._data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self._data == other._data

    def __repr__(self):
        return f"RunConfig({self._data!r})"


def parse_override(text: str):
    """Parse a KEY=VALUE override; the value is YAML-typed.

    YAML 1.1 reads bare scientific notation like 1e-4 as a string, so
    string values that parse as numbers are converted.
    """
    if "=" not in text:
        raise ValueError(f"override must look like key=value, got {text!r}")
    key, raw = text.split("=", 1)
    value = yaml.safe_load(raw)
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            pass
    return key.strip(), value

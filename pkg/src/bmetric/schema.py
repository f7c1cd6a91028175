"""Access to the JSON schemas shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

SCHEMA_NAMES = (
    "space",
    "generate",
    "constants",
    "remetrize",
    "doubling",
    "embed",
    "pipeline",
    "verify",
)


def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown schema {name!r}")
    path = resources.files("bmetric") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text())

"""Canonical JSON encoding shared by all file formats and the CLI.

Every serializer in the package goes through dumps() so that identical
values always produce byte-identical output (sorted keys, fixed
indentation, trailing newline).
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InputDataError


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str, *, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{what}: invalid JSON: {exc}") from exc

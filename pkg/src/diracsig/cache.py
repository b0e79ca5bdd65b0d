"""Content-addressed disk cache for assembled matrix documents.

Location precedence: explicit path, then the ``SIGOP_CACHE_DIR``
environment variable, then ``~/.cache/diracsig``.  Entries are the
canonical document text keyed by the assembly content hash, so repeated
runs return byte-identical artifacts.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import IOFailure

ENV_VAR = "SIGOP_CACHE_DIR"


def cache_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "diracsig"


def lookup(key: str, explicit_dir: str | None = None) -> str | None:
    path = cache_dir(explicit_dir) / f"{key}.json"
    if not path.is_file():
        return None
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot read cache entry {path}: {exc}") from exc


def store(key: str, text: str, explicit_dir: str | None = None) -> Path:
    base = cache_dir(explicit_dir)
    try:
        base.mkdir(parents=True, exist_ok=True)
        tmp = base / f".{key}.tmp"
        tmp.write_text(text, encoding="utf-8")
        path = base / f"{key}.json"
        tmp.replace(path)
    except OSError as exc:
        raise IOFailure(f"cannot write cache entry under {base}: {exc}") from exc
    return path

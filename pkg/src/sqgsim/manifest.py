"""Run manifests and atomic file outputs.

The manifest records what produced each output directory: a canonical hash of
the configuration (stable under key reordering), the tool version, wall time
and completion status. Timestamps live only here so every other output is
byte-reproducible given the same config and seed.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__

MANIFEST_SCHEMA = "sqgsim-manifest/1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(config).encode()).hexdigest()


def write_text_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bytes_atomic(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_manifest(
    command: str,
    config: dict,
    outputs: dict[str, str],
    wall_clock_seconds: float,
    status: str,
    extra: dict | None = None,
) -> dict:
    m = {
        "schema": MANIFEST_SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config_hash": config_hash(config),
        "config": config,
        "outputs": outputs,
        "wall_clock_seconds": wall_clock_seconds,
        "status": status,
    }
    if extra:
        m.update(extra)
    return m


def write_manifest(path: str | Path, manifest: dict) -> None:
    write_text_atomic(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")

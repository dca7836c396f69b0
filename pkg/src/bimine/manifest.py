"""Run manifests: what a command ran on and with which parameters."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    inputs: dict  # input path -> sha256 of its content
    tool_version: str
    wall_time_ms: int


def file_digest(path: str | os.PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(path: str | os.PathLike, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(asdict(manifest), handle, indent=2, sort_keys=True)
        handle.write("\n")

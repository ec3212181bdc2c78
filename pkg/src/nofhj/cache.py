"""On-disk cache of result records, keyed by command, parameters and version."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from . import __version__

DEFAULT_DIR = ".nofhj-cache"
ENV_VAR = "NOFHJ_CACHE"


def cache_dir(flag: str | None) -> Path:
    return Path(flag or os.environ.get(ENV_VAR) or DEFAULT_DIR)


def cache_key(command: str, params: dict) -> str:
    canon = json.dumps([command, params, __version__], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


class ResultCache:
    def __init__(self, root: Path | None):
        self.root = root

    def get(self, command: str, params: dict) -> dict | None:
        if self.root is None:
            return None
        path = self.root / f"{cache_key(command, params)}.json"
        try:
            return json.loads(path.read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return None

    def put(self, command: str, params: dict, record: dict) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{cache_key(command, params)}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(record, sort_keys=True))
        tmp.replace(path)

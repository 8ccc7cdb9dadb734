"""Disk cache for engine results, keyed by poset and engine version.

Only proven results are stored, so a cache hit is always safe to serve
as proven.  Writes go through a temp file and an atomic rename.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .embed import poset_from_json, poset_to_json
from .engine import ENGINE_VERSION, KResult
from .oracle import PosetSystem
from .polyt import PolyT
from .poset import Poset, canonical_key

ENV_CACHE_DIR = "POSETK_CACHE_DIR"


def system_to_json(S: PosetSystem) -> dict:
    return {
        "poset": poset_to_json(S.poset),
        "m": S.m,
        "antichain": sorted(S.antichain),
    }


def system_from_json(obj: dict) -> PosetSystem:
    return PosetSystem(
        poset_from_json(obj["poset"]), obj["m"], frozenset(obj["antichain"])
    )


def kresult_to_json(res: KResult) -> dict:
    return {
        "status": res.status,
        "poly": res.poly.to_json() if res.poly is not None else None,
        "residual": [system_to_json(S) for S in res.residual],
        "trace": res.trace,
    }


def kresult_from_json(obj: dict) -> KResult:
    poly = PolyT.from_json(obj["poly"]) if obj["poly"] is not None else None
    residual = tuple(system_from_json(s) for s in obj["residual"])
    return KResult(obj["status"], poly, residual, obj["trace"])


@dataclass(frozen=True)
class CacheEntry:
    key: str
    result: KResult
    engine_version: int
    timestamp: float


class ResultCache:
    """Content-addressed store: one JSON file per poset canonical key."""

    def __init__(self, root: Optional[str] = None):
        root = root if root is not None else os.environ.get(ENV_CACHE_DIR)
        self.root = Path(root) if root else None

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _path(self, key: str) -> Path:
        # keys can outgrow filename limits, so files are named by digest
        # and the full key rides inside the entry as a collision guard
        assert self.root is not None
        return self.root / f"{hashlib.sha256(key.encode()).hexdigest()}.json"

    def path_for(self, P: Poset) -> Optional[Path]:
        """Where P's entry lives, or None when caching is off."""
        if not self.enabled:
            return None
        return self._path(canonical_key(P).hex())

    def get(self, P: Poset) -> Optional[KResult]:
        """Proven result for P, or None on miss or version mismatch."""
        if not self.enabled:
            return None
        key = canonical_key(P).hex()
        try:
            obj = json.loads(self._path(key).read_text())
        except (OSError, ValueError):
            return None
        if obj.get("engine_version") != ENGINE_VERSION or obj.get("key") != key:
            return None
        res = kresult_from_json(obj["result"])
        if res.status != "proven":
            return None
        return res

    def put(self, P: Poset, res: KResult) -> bool:
        """Store a proven result; anything else is skipped."""
        if not self.enabled or res.status != "proven":
            return False
        self.root.mkdir(parents=True, exist_ok=True)
        key = canonical_key(P).hex()
        entry = {
            "key": key,
            "engine_version": ENGINE_VERSION,
            "timestamp": time.time(),
            "result": kresult_to_json(res),
        }
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        return True

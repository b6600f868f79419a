"""Checkpoint persistence: a zip archive of named ``.npy`` arrays plus
``meta.json`` (module id, step count, config echo, config hash, extra dims).

Round-trips are bit-exact. Loading validates the archive structure and
raises :class:`CheckpointError` on corruption instead of crashing.
"""
from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CheckpointError

_META_NAME = "meta.json"


@dataclass
class Checkpoint:
    module: str
    step: int
    config: dict
    config_hash: str
    arrays: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    def require_module(self, expected: str) -> None:
        if self.module != expected:
            raise CheckpointError(
                f"checkpoint holds module '{self.module}', expected '{expected}'"
            )

    def require_meta(self, **expected) -> None:
        """Validate metadata fields (dims etc.), naming every mismatch."""
        bad = [
            f"{key}: checkpoint={self.meta.get(key)!r} expected={value!r}"
            for key, value in expected.items()
            if self.meta.get(key) != value
        ]
        if bad:
            raise CheckpointError(
                f"incompatible '{self.module}' checkpoint: " + "; ".join(bad)
            )


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "module": ckpt.module,
        "step": ckpt.step,
        "config": ckpt.config,
        "config_hash": ckpt.config_hash,
        "meta": ckpt.meta,
        "arrays": sorted(ckpt.arrays),
    }
    with zipfile.ZipFile(path, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(_META_NAME, json.dumps(meta, sort_keys=True, indent=1))
        for name in sorted(ckpt.arrays):
            buf = io.BytesIO()
            np.save(buf, np.ascontiguousarray(ckpt.arrays[name]))
            zf.writestr(f"arrays/{name}.npy", buf.getvalue())
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"no checkpoint file at {path}")
    try:
        with zipfile.ZipFile(path) as zf:
            meta = json.loads(zf.read(_META_NAME))
            arrays = {}
            for name in meta["arrays"]:
                with zf.open(f"arrays/{name}.npy") as fh:
                    arrays[name] = np.load(io.BytesIO(fh.read()))
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError, ValueError, EOFError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    return Checkpoint(
        module=meta["module"],
        step=meta["step"],
        config=meta["config"],
        config_hash=meta["config_hash"],
        arrays=arrays,
        meta=meta["meta"],
    )

"""Binary named-tensor container for checkpoints and dataset files.

Layout (little-endian throughout):
  magic "LGMA" | u32 version | u16 name-len + module name | u32 tensor count
  per tensor: u16 name-len + name | u8 rank | rank * u32 dims | f32 payload

Dataset files reuse the container with record-scoped names ("000042/x").
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"LGMA"
CHECKPOINT_VERSION = 1
_MAX_RANK = 8


class CorruptCheckpoint(ValueError):
    """File is truncated or structurally invalid."""


class VersionMismatch(ValueError):
    """File was written with an unsupported format version."""


def save_checkpoint(module_name: str, tensors: dict[str, np.ndarray],
                    path: str | Path) -> None:
    """Write named float32 tensors; round trips bit-exactly."""
    chunks = [MAGIC, struct.pack("<I", CHECKPOINT_VERSION)]
    name_bytes = module_name.encode()
    chunks.append(struct.pack("<H", len(name_bytes)))
    chunks.append(name_bytes)
    chunks.append(struct.pack("<I", len(tensors)))
    for name, arr in tensors.items():
        arr = np.ascontiguousarray(arr, dtype=np.float32)
        if not np.isfinite(arr).all():
            raise ValueError(f"tensor {name!r} has non-finite values")
        encoded = name.encode()
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<B", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}I", *arr.shape) if arr.ndim else b"")
        chunks.append(arr.tobytes())
    Path(path).write_bytes(b"".join(chunks))


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise CorruptCheckpoint("truncated file")
        out = self.blob[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def load_checkpoint(path: str | Path) -> tuple[str, dict[str, np.ndarray]]:
    """Return (module name, ordered name->tensor dict)."""
    reader = _Reader(Path(path).read_bytes())
    if reader.take(4) != MAGIC:
        raise CorruptCheckpoint("bad magic")
    version = reader.u32()
    if version != CHECKPOINT_VERSION:
        raise VersionMismatch(f"format version {version}, supported {CHECKPOINT_VERSION}")
    module_name = reader.take(reader.u16()).decode()
    count = reader.u32()
    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        name = reader.take(reader.u16()).decode()
        rank = reader.u8()
        if rank > _MAX_RANK:
            raise CorruptCheckpoint(f"implausible rank {rank}")
        dims = tuple(reader.u32() for _ in range(rank))
        n = int(np.prod(dims)) if rank else 1
        payload = reader.take(4 * n)
        tensors[name] = np.frombuffer(payload, dtype="<f4").reshape(dims).copy()
    if reader.pos != len(reader.blob):
        raise CorruptCheckpoint("trailing bytes after last tensor")
    return module_name, tensors


# ---------------------------------------------------------------------------
# record-oriented dataset files on the same container
# ---------------------------------------------------------------------------

def write_records(dataset_name: str, records: list[dict[str, np.ndarray]],
                  path: str | Path) -> None:
    flat: dict[str, np.ndarray] = {}
    for i, record in enumerate(records):
        for key, arr in record.items():
            flat[f"{i:06d}/{key}"] = arr
    save_checkpoint(dataset_name, flat, path)


def read_records(path: str | Path) -> tuple[str, list[dict[str, np.ndarray]]]:
    dataset_name, flat = load_checkpoint(path)
    records: list[dict[str, np.ndarray]] = []
    for scoped, arr in flat.items():
        idx_str, _, key = scoped.partition("/")
        idx = int(idx_str)
        while len(records) <= idx:
            records.append({})
        records[idx][key] = arr
    return dataset_name, records

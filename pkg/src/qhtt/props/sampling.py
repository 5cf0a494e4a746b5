"""Deterministic sample points for symbolic vector parameters."""

from __future__ import annotations

import os
import re
import zlib

import numpy as np

DEFAULT_SEED = 0x51483737  # "QH77"
DEFAULT_SAMPLES = 16

_PARAM = re.compile(r"^(.*)\[(\d+)\]$")
_S = 1 / np.sqrt(2)


def seed_from_env(default=DEFAULT_SEED) -> int:
    raw = os.environ.get("QHTT_SEED")
    return int(raw, 0) if raw else default


def _fixed(dim):
    pts = []
    for a, b in ((1, 0), (0, 1), (_S, _S), (_S, -_S), (_S, 1j * _S)):
        v = np.zeros(dim, dtype=np.complex128)
        v[0] = a
        if dim > 1:
            v[1] = b
        elif b:
            continue
        pts.append(v)
    return pts


def vector_points(name: str, dim: int, count=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> list[np.ndarray]:
    """Fixed basis-like points followed by seeded random unit vectors."""
    pts = _fixed(dim)[:count]
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    while len(pts) < count:
        z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        pts.append(z / np.linalg.norm(z))
    return pts


def group_parameters(params) -> dict[str, int]:
    """``{'psi[0]', 'psi[1]'}`` -> ``{'psi': 2}``."""
    dims: dict[str, int] = {}
    for p in params:
        m = _PARAM.match(p)
        if not m:
            raise ValueError(f"parameter {p!r} is not a vector component")
        dims[m.group(1)] = max(dims.get(m.group(1), 0), int(m.group(2)) + 1)
    return dims


def sample_points(params, count=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> list[dict]:
    """Joint sample assignments for every parameter in ``params``.

    Point ``j`` takes the ``j``-th sample of every vector, so the set has
    exactly ``count`` entries.  With no parameters there is one empty point.
    """
    dims = group_parameters(params)
    if not dims:
        return [{}]
    per = {name: vector_points(name, d, count, seed) for name, d in sorted(dims.items())}
    out = []
    for j in range(count):
        point = {}
        for name, pts in per.items():
            for i, c in enumerate(pts[j]):
                point[f"{name}[{i}]"] = complex(c)
        out.append(point)
    return out

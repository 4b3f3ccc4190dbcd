"""State constructors on the N-particle sector."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional

import numpy as np

from .errors import NormalizationError, ParityError
from .fock_basis import (
    DEFAULT_CAP_DIM,
    apply_single,
    enumerate_sector,
    masks_from_modes,
    sector_dim,
)

NORM_TOL = 1e-12

_MAGIC = b"FRDM"
_HEADER = struct.Struct("<4sBHHQ")


@dataclass(eq=False)
class SectorVector:
    """Amplitudes over the mask-ascending basis of the (M, N) sector."""

    M: int
    N: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (sector_dim(self.M, self.N),):
            raise ValueError(
                f"expected {sector_dim(self.M, self.N)} amplitudes for "
                f"(M={self.M}, N={self.N}), got shape {self.amps.shape}"
            )
        if not np.all(np.isfinite(self.amps)):
            raise ValueError("amplitudes must be finite")

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @property
    def normalized(self) -> bool:
        return abs(self.norm - 1.0) <= NORM_TOL

    def require_normalized(self, tol: float = 1e-8) -> None:
        if abs(self.norm - 1.0) > tol:
            raise NormalizationError(f"state norm {self.norm!r} deviates from 1 by more than {tol}")

    def basis(self):
        return enumerate_sector(self.M, self.N, cap_dim=max(DEFAULT_CAP_DIM, self.dim))

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "N": self.N,
            "basis_order": "mask-ascending",
            "amps": [[float(z.real), float(z.imag)] for z in self.amps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SectorVector":
        if d.get("basis_order", "mask-ascending") != "mask-ascending":
            raise ValueError(f"unsupported basis_order {d['basis_order']!r}")
        amps = np.array([complex(re, im) for re, im in d["amps"]], dtype=np.complex128)
        return cls(int(d["M"]), int(d["N"]), amps)

    @classmethod
    def from_json(cls, s: str) -> "SectorVector":
        return cls.from_dict(json.loads(s))

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(_MAGIC, 1, self.M, self.N, self.dim)
        return head + self.amps.astype("<c16").tobytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> "SectorVector":
        magic, version, M, N, dim = _HEADER.unpack_from(buf)
        if magic != _MAGIC or version != 1:
            raise ValueError("not a SectorVector blob")
        amps = np.frombuffer(buf, dtype="<c16", count=dim, offset=_HEADER.size)
        return cls(M, N, amps.astype(np.complex128))


def _normalize(amps: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise NormalizationError("cannot normalize the zero vector")
    return amps / nrm


def slater(M: int, occupied: Iterable[int]) -> SectorVector:
    occ = set(int(k) for k in occupied)
    if any(not 0 <= k < M for k in occ):
        raise ValueError(f"occupied modes {sorted(occ)} outside [0, {M})")
    basis = enumerate_sector(M, len(occ))
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.rank(masks_from_modes(occ))] = 1.0
    return SectorVector(M, len(occ), amps)


def yang_pairing(M: int, N: int) -> SectorVector:
    """Normalized ``(b*)**(N/2) |0>`` with ``b* = sum_j c*_{2j} c*_{2j+1}``."""
    if M % 2 or N % 2:
        raise ParityError(f"pairing state needs even M and N, got M={M}, N={N}")
    if not 0 <= N <= M:
        raise ValueError(f"need 0 <= N <= M, got N={N}, M={M}")
    amps = np.ones(1, dtype=np.complex128)
    for n in range(0, N, 2):
        lo = enumerate_sector(M, n)
        mid = enumerate_sector(M, n + 1)
        dim_hi = sector_dim(M, n + 2)
        nxt = np.zeros(dim_hi, dtype=np.complex128)
        for j in range(M // 2):
            step = apply_single(lo.creation_table, 2 * j + 1, amps, mid.dim)
            nxt += apply_single(mid.creation_table, 2 * j, step, dim_hi)
        amps = nxt
    return SectorVector(M, N, _normalize(amps))


def random_state(M: int, N: int, seed: Optional[int] = None) -> SectorVector:
    """Haar-random unit vector: normalized i.i.d. complex Gaussians."""
    dim = enumerate_sector(M, N).dim
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return SectorVector(M, N, _normalize(amps))


def near_slater(
    M: int,
    N: int,
    t: float,
    seed: Optional[int] = None,
    occupied: Optional[Iterable[int]] = None,
) -> SectorVector:
    """Renormalized ``(1 - t) * slater + t * random_state``.

    The Slater part occupies modes ``0..N-1`` unless ``occupied`` is given.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    occ = range(N) if occupied is None else occupied
    base = slater(M, occ)
    if base.N != N:
        raise ValueError(f"occupied set has {base.N} modes, expected N={N}")
    if t == 0.0:
        return base
    mix = (1.0 - t) * base.amps + t * random_state(M, N, seed).amps
    return SectorVector(M, N, _normalize(mix))


def pairing_amplitude(M: int, N: int) -> float:
    return 1.0 / np.sqrt(comb(M // 2, N // 2))

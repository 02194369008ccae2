"""Pure states: canonical phase convention, sampling and comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptySupport, ZeroVector

SUPPORT_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector in C^d whose first non-negligible amplitude is real positive.

    Build instances through :func:`canonicalize` (or :meth:`from_vector`); the
    constructor trusts its input.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, v, threshold: float = SUPPORT_TOL) -> "PureState":
        return canonicalize(v, threshold)

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.amplitudes)

    @property
    def phases(self) -> np.ndarray:
        """Phases mapped to ``[0, 2pi)``; zero where the amplitude vanishes."""
        ph = np.angle(self.amplitudes)
        ph = np.where(self.moduli > 0, np.mod(ph, 2 * np.pi), 0.0)
        return np.where(ph >= 2 * np.pi, 0.0, ph)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def __repr__(self):
        return f"PureState({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True)
class SupportSet:
    indices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def _vector(v) -> np.ndarray:
    if isinstance(v, PureState):
        return v.amplitudes
    return np.asarray(v, dtype=np.complex128).ravel()


def canonicalize(v, threshold: float = SUPPORT_TOL) -> PureState:
    """Normalize ``v`` and rotate its global phase.

    The first amplitude with ``|a|^2 > threshold`` (after normalization) is made
    real and positive. If no amplitude clears the threshold the largest one is
    used as the anchor.
    """
    v = _vector(v)
    if v.size == 0:
        raise ZeroVector("empty vector")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ZeroVector("cannot normalize a zero (or non-finite) vector")
    v = v / norm
    mod2 = np.abs(v) ** 2
    above = np.flatnonzero(mod2 > threshold)
    anchor = int(above[0]) if above.size else int(np.argmax(mod2))
    a = v[anchor]
    v = v * (abs(a) / a)
    v[anchor] = abs(v[anchor])
    return PureState(v)


def overlap(a, b) -> complex:
    va, vb = _vector(a), _vector(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimensions {va.shape[0]} and {vb.shape[0]} differ")
    return complex(np.vdot(va, vb))


def fidelity(a, b) -> float:
    """``|<a|b>|^2``, clipped to ``[0, 1]``."""
    f = abs(overlap(a, b)) ** 2
    return float(min(max(f, 0.0), 1.0))


def haar_vectors(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random unit vectors as rows of a ``(count, dim)`` array."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random(dim: int, seed=None) -> PureState:
    """Haar-distributed pure state, deterministic for a fixed ``seed``.

    ``seed`` may be an int or an existing :class:`numpy.random.Generator`.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    return canonicalize(haar_vectors(dim, 1, rng)[0])


def random_with_support(dim: int, indices, rng: np.random.Generator) -> PureState:
    """Random state whose non-zero amplitudes sit exactly on ``indices``.

    Moduli come from a Haar vector restricted to the support; phases are uniform.
    """
    idx = np.asarray(sorted(indices), dtype=int)
    v = np.zeros(dim, dtype=np.complex128)
    v[idx] = haar_vectors(len(idx), 1, rng)[0]
    return canonicalize(v)


def support(state, threshold: float = SUPPORT_TOL) -> SupportSet:
    """Indices with ``|amplitude|^2 > threshold``, in increasing order."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    mod2 = np.abs(_vector(state)) ** 2
    idx = np.flatnonzero(mod2 > threshold)
    if idx.size == 0:
        raise EmptySupport(f"no amplitude has |a|^2 above {threshold:g}")
    return SupportSet(tuple(int(i) for i in idx))


def is_normalized(state, tol: float = NORM_TOL) -> bool:
    return abs(np.linalg.norm(_vector(state)) - 1.0) <= tol

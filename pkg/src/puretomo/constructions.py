"""Explicit measurement families: qubit SIC-POVM, MUBs, the d=3 eight-operator set,
the non-IC qubit POVM, and the "one full basis plus d-1 from each other basis"
collections."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, IndexOutOfRange, MixedDimensions, NotPrime
from .povm import OperatorSet, Povm
from .states import PureState, canonicalize

MAX_PRIME_DIM = 13
ORTHO_TOL = 1e-12

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)

_R2 = np.sqrt(2.0)

# Regular tetrahedron of Bloch vectors for the qubit SIC-POVM. The y components
# of the last two are +-sqrt(2/3); with +-sqrt(2)/3 they would not be unit vectors.
SIC_BLOCH = np.array([
    [0.0, 0.0, 1.0],
    [2 * _R2 / 3, 0.0, -1 / 3],
    [-_R2 / 3, np.sqrt(2 / 3), -1 / 3],
    [-_R2 / 3, -np.sqrt(2 / 3), -1 / 3],
])


@dataclass(frozen=True)
class BlochVector:
    """Qubit effect ``a I + b n.sigma``."""

    n: tuple[float, float, float]
    a: float = 0.25
    b: float = 0.25

    def __post_init__(self):
        if abs(np.linalg.norm(self.n) - 1.0) > ORTHO_TOL:
            raise ValueError(f"Bloch vector {self.n} is not a unit vector")

    @property
    def matrix(self) -> np.ndarray:
        return self.a * np.eye(2) + self.b * np.einsum("i,ijk->jk", np.asarray(self.n), PAULI)

    def generator(self) -> np.ndarray:
        """Vector ``v`` with ``v v^dagger`` equal to the effect, valid when ``a == b``."""
        if not np.isclose(self.a, self.b):
            raise ValueError("effect is rank-1 only when a == b")
        nx, ny, nz = self.n
        if nz > -0.5:
            psi = np.array([1 + nz, nx + 1j * ny])
        else:
            psi = np.array([nx - 1j * ny, 1 - nz])
        psi = canonicalize(psi).amplitudes
        return psi * np.sqrt(2 * self.a)


@dataclass(frozen=True)
class Basis:
    states: tuple[PureState, ...]

    def __post_init__(self):
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            raise ValueError("a basis of C^d needs exactly d vectors")
        if np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) > ORTHO_TOL * m.shape[0]:
            raise ValueError("vectors are not orthonormal")

    @classmethod
    def from_columns(cls, vectors) -> "Basis":
        return cls(tuple(canonicalize(v) for v in vectors))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as columns."""
        return np.stack([s.amplitudes for s in self.states], axis=1)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, j):
        return self.states[j]


def computational_basis(d: int) -> Basis:
    return Basis(tuple(PureState.basis(d, j) for j in range(d)))


def projectors(bases: Sequence[Basis]) -> OperatorSet:
    """All projectors of ``bases`` in order, with the first basis as resolution subset."""
    gens = [s.amplitudes for b in bases for s in b]
    return OperatorSet.from_generators(gens, resolution_subset=range(bases[0].dim))


def sic_d2() -> Povm:
    gens = [BlochVector(tuple(n)).generator() for n in SIC_BLOCH]
    return Povm.from_generators(gens, name="sic-d2")


def mubs_d2() -> list[Basis]:
    r = 1 / _R2
    return [
        Basis.from_columns([[1, 0], [0, 1]]),
        Basis.from_columns([[r, r], [r, -r]]),
        Basis.from_columns([[r, 1j * r], [r, -1j * r]]),
    ]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n ** 0.5) + 1))


def mubs_prime(d: int) -> list[Basis]:
    """``d + 1`` mutually unbiased bases for prime ``d``.

    The computational basis followed by, for ``j = 0..d-1``, the basis with
    amplitudes ``w^(j k^2 + s k) / sqrt(d)``, ``w = exp(2 pi i / d)``. For
    ``d = 2`` the quadratic term uses ``i^(j k^2)`` instead.
    """
    if not is_prime(d):
        raise NotPrime(f"{d} is not prime")
    if d > MAX_PRIME_DIM:
        raise DimensionTooLarge(f"d = {d} exceeds {MAX_PRIME_DIM}")
    k = np.arange(d)
    bases = [computational_basis(d)]
    for j in range(d):
        vecs = []
        for s in range(d):
            if d == 2:
                phase = (1j) ** (j * k * k) * (-1.0) ** (s * k)
            else:
                phase = np.exp(2j * np.pi * ((j * k * k + s * k) % d) / d)
            vecs.append(phase / np.sqrt(d))
        bases.append(Basis.from_columns(vecs))
    return bases


def mubs(d: int) -> list[Basis]:
    return mubs_d2() if d == 2 else mubs_prime(d)


EIGHT_D3_GENERATORS = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 1j, 0),
    (1, 0, 1),
    (1, 1, 1),
    (1, 1, 1j),
)


def eight_ops_d3() -> OperatorSet:
    """The eight unnormalized rank-1 operators on C^3; ``E_0..E_2`` resolve the identity."""
    return OperatorSet.from_generators(EIGHT_D3_GENERATORS, resolution_subset=(0, 1, 2),
                                       name="eight-d3")


def counterexample_d2() -> Povm:
    """Four-outcome qubit POVM that gives |0> and |1> identical statistics."""
    gens = [(1, 1), (1, -1), (1, 1j), (1, -1j)]
    return Povm.from_generators([np.asarray(g) / 2 for g in gens], name="counterexample-d2")


def theorem2_count(m: int, d: int) -> int:
    return m * d ** (m - 1)


def theorem2_collections(bases: Sequence[Basis]) -> Iterator[OperatorSet]:
    """Yield every set built from one complete basis plus ``d - 1`` projectors of each other basis.

    Order is lexicographic: index of the complete basis first, then the index of
    the projector dropped from each remaining basis. Each set has ``m(d-1)+1``
    elements, the complete basis first (it is the resolution subset).
    """
    bases = list(bases)
    if not bases:
        raise ValueError("need at least one basis")
    d = bases[0].dim
    if any(b.dim != d for b in bases):
        raise MixedDimensions("all bases must share one dimension")
    m = len(bases)
    for full in range(m):
        others = [j for j in range(m) if j != full]
        for dropped in itertools.product(range(d), repeat=len(others)):
            gens = [s.amplitudes for s in bases[full]]
            for j, skip in zip(others, dropped):
                gens.extend(s.amplitudes for i, s in enumerate(bases[j]) if i != skip)
            label = f"theorem2[full={full},drop={list(dropped)}]"
            yield OperatorSet.from_generators(gens, resolution_subset=range(d), name=label)


def theorem2_collection(bases: Sequence[Basis], index: int) -> OperatorSet:
    total = theorem2_count(len(bases), bases[0].dim)
    if not 0 <= index < total:
        raise IndexOutOfRange(f"collection index {index} outside [0, {total})")
    return next(itertools.islice(theorem2_collections(bases), index, None))

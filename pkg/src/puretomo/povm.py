"""Operator sets, POVMs, and the rank-1 conversion ``F_k = G^-1/2 E_k G^-1/2``."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import qmath
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NegativeWeight,
    NotAPovm,
    NotPSD,
    NotRank1,
    SingularGram,
    SingularOperator,
)
from .states import PureState, canonicalize

PSD_TOL = 1e-10
RANK1_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
GRAM_TOL = 1e-10


class Rank1Operator:
    """The operator ``v v^dagger`` for a (not necessarily normalized) vector ``v``."""

    __slots__ = ("generator",)

    def __init__(self, generator):
        g = np.array(generator, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(g)):
            raise ValueError("generator has non-finite entries")
        g.setflags(write=False)
        self.generator = g

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return qmath.outer(self.generator)

    @property
    def weight(self) -> float:
        """Trace of the operator, i.e. the squared generator norm."""
        return float(np.vdot(self.generator, self.generator).real)

    def expectation(self, psi) -> float:
        return float(abs(np.vdot(self.generator, np.asarray(psi))) ** 2)

    def __repr__(self):
        return f"Rank1Operator({np.array2string(self.generator, precision=4)})"


def generator_of(e, tol: float = RANK1_TOL) -> np.ndarray:
    """Recover ``v`` with ``E = v v^dagger``; raise :class:`NotRank1` otherwise."""
    e = qmath.as_cmatrix(e)
    eig = qmath.hermitian_eig(e)
    top = float(eig.eigenvalues[-1])
    second = float(eig.eigenvalues[-2]) if e.shape[0] > 1 else 0.0
    if top <= 0.0 or second > tol * top or float(eig.eigenvalues[0]) < -tol * top:
        raise NotRank1(f"eigenvalues {eig.eigenvalues} are not those of a rank-1 PSD operator")
    # fix the generator's phase so serialization is deterministic
    return canonicalize(eig.eigenvectors[:, -1]).amplitudes * np.sqrt(top)


class OperatorSet:
    """An ordered collection of PSD operators on C^d.

    ``generators[k]`` holds the vector of element ``k`` when it is known to be
    rank-1 and ``None`` otherwise. ``resolution_subset`` is an optional index
    set ``B`` whose elements must sum to the identity.
    """

    def __init__(self, elements: Sequence, generators: Sequence | None = None,
                 resolution_subset: Iterable[int] | None = None, *,
                 allow_zero: bool = False, name: str | None = None):
        mats = [qmath.as_cmatrix(e) for e in elements]
        if not mats:
            raise ValueError("an operator set needs at least one element")
        if generators is None:
            generators = [None] * len(mats)
        if len(generators) != len(mats):
            raise ValueError("generators must align with elements")
        dim = mats[0].shape[0]
        for k, (m, g) in enumerate(zip(mats, generators)):
            if m.shape != (dim, dim):
                raise DimensionMismatch(f"element {k} has shape {m.shape}, expected {(dim, dim)}")
            scale = qmath.fro_norm(m)
            if scale == 0.0:
                if not allow_zero:
                    raise NotPSD(f"element {k} is the zero operator")
                continue
            if g is not None:
                continue  # v v^dagger is PSD by construction
            eig = qmath.hermitian_eig(m)
            if eig.eigenvalues[0] < -PSD_TOL * scale:
                raise NotPSD(f"element {k} has eigenvalue {eig.eigenvalues[0]:.3e}")
        for m in mats:
            m.setflags(write=False)
        self.dim = dim
        self.elements = tuple(mats)
        self.generators = tuple(None if g is None else np.asarray(g, dtype=np.complex128)
                                for g in generators)
        self.name = name
        self.resolution_subset = None
        if resolution_subset is not None:
            subset = tuple(int(i) for i in resolution_subset)
            if not check_resolution_subset(self, subset):
                raise NotAPovm(f"elements {list(subset)} do not sum to the identity")
            self.resolution_subset = subset

    @classmethod
    def from_generators(cls, generators, resolution_subset=None, **kw):
        gens = [np.asarray(g, dtype=np.complex128).ravel() for g in generators]
        return cls([qmath.outer(g) for g in gens], gens, resolution_subset, **kw)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    def __iter__(self):
        return iter(self.elements)

    @property
    def is_rank1(self) -> bool:
        return all(g is not None for g in self.generators)

    def stacked(self) -> np.ndarray:
        return np.stack(self.elements)

    def total(self) -> np.ndarray:
        return np.sum(self.elements, axis=0)

    def completeness_defect(self) -> float:
        return qmath.fro_norm(self.total() - np.eye(self.dim))

    def is_povm(self, tol: float = COMPLETENESS_TOL) -> bool:
        return self.completeness_defect() <= tol

    def rank1_operators(self) -> list[Rank1Operator]:
        return [Rank1Operator(g if g is not None else generator_of(e))
                for e, g in zip(self.elements, self.generators)]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} d={self.dim} n={len(self)}>"


class Povm(OperatorSet):
    """An operator set whose elements sum to the identity."""

    def __init__(self, elements, generators=None, resolution_subset=None, *,
                 tol: float = COMPLETENESS_TOL, **kw):
        super().__init__(elements, generators, resolution_subset, **kw)
        defect = self.completeness_defect()
        if defect > tol:
            raise NotAPovm(f"||sum E_k - I||_F = {defect:.3e} exceeds {tol:g}")

    @classmethod
    def from_set(cls, s: OperatorSet, **kw) -> "Povm":
        return cls(s.elements, s.generators, s.resolution_subset, name=s.name, **kw)


def check_resolution_subset(s: OperatorSet, subset: Iterable[int],
                            tol: float = COMPLETENESS_TOL) -> bool:
    """True iff the elements indexed by ``subset`` sum to the identity."""
    subset = list(subset)
    n = len(s.elements)
    for i in subset:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"index {i} outside [0, {n})")
    total = np.zeros((s.dim, s.dim), dtype=np.complex128)
    for i in subset:
        total += s.elements[i]
    return qmath.fro_norm(total - np.eye(s.dim)) <= tol


def rank1_convert(s: OperatorSet, gram_tol: float = GRAM_TOL) -> Povm:
    """Turn spanning rank-1 operators into a rank-1 POVM.

    With ``G = sum_k E_k`` positive definite, ``F_k = G^-1/2 E_k G^-1/2`` is
    rank-1 with generator ``G^-1/2 v_k`` and the ``F_k`` sum to the identity.
    Element order is preserved.
    """
    gens = []
    for k, (e, g) in enumerate(zip(s.elements, s.generators)):
        if g is None:
            try:
                g = generator_of(e)
            except NotRank1 as exc:
                raise NotRank1(f"element {k}: {exc}") from None
        elif not np.any(g):
            raise NotRank1(f"element {k} is the zero operator")
        gens.append(np.asarray(g))
    gram = np.sum([qmath.outer(g) for g in gens], axis=0)
    try:
        root = qmath.inv_sqrt(gram, pd_tol=gram_tol)
    except SingularOperator as exc:
        raise SingularGram(f"G = sum E_k is not positive definite: {exc}") from None
    new = [root @ g for g in gens]
    name = f"{s.name}:converted" if s.name else None
    return Povm.from_generators(new, resolution_subset=None, name=name)


def born_matrix(states: np.ndarray, s: OperatorSet) -> np.ndarray:
    """Outcome table ``p[m, k] = <psi_m| E_k |psi_m>`` for rows ``psi_m`` of ``states``."""
    psi = np.asarray(states, dtype=np.complex128)
    if psi.ndim == 1:
        psi = psi[None, :]
    if psi.shape[1] != s.dim:
        raise DimensionMismatch(f"states have dimension {psi.shape[1]}, operators {s.dim}")
    if s.is_rank1:
        amps = psi @ np.stack(s.generators).conj().T
        return np.abs(amps) ** 2
    return np.einsum("mi,kij,mj->mk", psi.conj(), s.stacked(), psi).real


def outcome_vector(state, s: OperatorSet) -> np.ndarray:
    """Born probabilities ``tr(|psi><psi| E_k)`` in element order."""
    psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=np.complex128)
    if psi.ndim != 1 or psi.shape[0] != s.dim:
        raise DimensionMismatch(f"state has dimension {psi.shape[-1]}, operators {s.dim}")
    return born_matrix(psi, s)[0]


def scale_elements(s: OperatorSet, weights: Sequence[float]) -> OperatorSet:
    """Multiply each element outside the resolution subset by a non-negative weight.

    ``weights`` is aligned with the elements not in ``B``, in their original
    order. A zero weight produces a zero element, which :func:`rank1_convert`
    later rejects.
    """
    keep = set(s.resolution_subset or ())
    free = [k for k in range(len(s)) if k not in keep]
    weights = [float(w) for w in weights]
    if len(weights) != len(free):
        raise ValueError(f"expected {len(free)} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise NegativeWeight("weights must be non-negative")
    mats = list(s.elements)
    gens = list(s.generators)
    for k, w in zip(free, weights):
        mats[k] = w * mats[k]
        if gens[k] is not None:
            gens[k] = np.sqrt(w) * gens[k]
    return OperatorSet(mats, gens, s.resolution_subset, allow_zero=True, name=s.name)

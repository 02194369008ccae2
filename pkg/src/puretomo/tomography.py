"""Pure-state reconstruction from Born-rule data.

Two solvers live here:

* :func:`reconstruct_d3` inverts the statistics of the eight rank-1 operators
  from :func:`puretomo.constructions.eight_ops_d3` in closed form.
* :func:`adaptive_reconstruct` works in any dimension. It measures the
  computational basis, finds the support ``{n_0, ..., n_{k-1}}`` and then asks
  for the two interference operators ``(|n_0> + |n_s>)(.)`` and
  ``(|n_0> + i|n_s>)(.)`` per remaining support site, ``d + 2k - 2`` queries in
  total.

Phases are reported in ``[0, 2 pi)`` and states use the canonical global phase
(lowest supported index real positive).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .constructions import eight_ops_d3
from .errors import (
    AmbiguousOutcomes,
    DimensionMismatch,
    EmptySupport,
    InconsistentOutcomes,
    NegativeProbability,
    NotAPovm,
    RangeError,
)
from .povm import OperatorSet, Povm, Rank1Operator, outcome_vector, rank1_convert
from .states import PureState, SupportSet, canonicalize

SUPPORT_TOL = 1e-12
CONSISTENCY_TOL = 1e-8
NEGATIVE_TOL = 1e-10
# Below this the sin(theta_2) coefficient is treated as zero in the d=3 solver.
DEGENERATE_TOL = 1e-10
# Two candidate states closer than this in infidelity are treated as one.
AMBIGUITY_INFIDELITY = 1e-9

Oracle = Callable[[Sequence[Rank1Operator]], np.ndarray]


def _check_outcomes(p, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if p.shape[0] != n:
        raise DimensionMismatch(f"expected {n} outcomes, got {p.shape[0]}")
    if not np.all(np.isfinite(p)):
        raise ValueError("outcomes must be finite")
    if np.any(p < -NEGATIVE_TOL):
        raise NegativeProbability(f"negative outcome value {p.min():.3e}")
    return p


def _phase(cos_part: float, sin_part: float) -> float:
    return math.atan2(sin_part, cos_part) % (2 * math.pi)


def _residual(state: PureState, ops: OperatorSet, p: np.ndarray) -> float:
    return float(np.max(np.abs(outcome_vector(state, ops) - p)))


def _dropped_slack(p: np.ndarray, support_tol: float) -> float:
    # Amplitudes dropped below the support threshold still leak into the
    # interference outcomes, by at most 2 |g| a + a^2 with |g| <= sqrt(3).
    dropped = np.sqrt(np.clip(p[:3][p[:3] <= support_tol], 0.0, None))
    return float(np.sum(2 * math.sqrt(3) * dropped + dropped ** 2))


def reconstruct_d3(p, support_tol: float = SUPPORT_TOL,
                   consistency_tol: float | None = CONSISTENCY_TOL) -> PureState:
    """Recover a qutrit pure state from its eight outcome values.

    ``p[k] = <phi|E_k|phi>`` for the operators of :func:`eight_ops_d3`. The
    amplitudes are ``sqrt(p[0..2])``; phases come from the interference terms
    depending on which amplitudes vanish.

    When all three amplitudes are present, ``sin(theta_2)`` enters ``p[6]``
    with coefficient ``2 a1 a2 sin(theta_1)`` and ``p[7]`` with
    ``2 a2 (a0 + a1 cos(theta_1))``; the larger coefficient is used. Both vanish
    on the family ``a0 = a1, theta_1 = pi``, where ``theta_2`` and
    ``-theta_2`` give identical data. There :class:`AmbiguousOutcomes` is
    raised unless the two candidates coincide.

    Raises :class:`InconsistentOutcomes` if the result does not reproduce ``p``
    within ``consistency_tol`` (``None`` skips the check).
    """
    p = _check_outcomes(p, 8)
    a0, a1, a2 = np.sqrt(np.clip(p[:3], 0.0, None))
    on = p[:3] > support_tol
    theta1 = theta2 = 0.0

    if on.sum() == 0:
        raise EmptySupport("all three amplitudes vanish")
    elif on.sum() == 2:
        if on[0] and on[1]:
            base = a0 * a0 + a1 * a1
            theta1 = _phase(p[3] - base, p[4] - base)
        elif on[0] and on[2]:
            base = a0 * a0 + a2 * a2
            theta2 = _phase(p[5] - base, p[7] - base)
        else:
            base = a1 * a1 + a2 * a2
            theta2 = _phase(p[6] - base, p[7] - base)
    elif on.sum() == 3:
        base01 = a0 * a0 + a1 * a1
        theta1 = _phase(p[3] - base01, p[4] - base01)
        c1, s1 = math.cos(theta1), math.sin(theta1)
        c2 = (p[5] - a0 * a0 - a2 * a2) / (2 * a0 * a2)
        c2 = min(max(c2, -1.0), 1.0)
        total = a0 * a0 + a1 * a1 + a2 * a2
        common = total + 2 * a0 * a1 * c1
        den6 = 2 * a1 * a2 * s1
        den7 = 2 * a2 * (a0 + a1 * c1)
        if max(abs(den6), abs(den7)) > DEGENERATE_TOL:
            if abs(den6) >= abs(den7):
                s2 = (p[6] - common - 2 * a0 * a2 * c2 - 2 * a1 * a2 * c1 * c2) / den6
            else:
                s2 = (p[7] - common + 2 * a1 * a2 * s1 * c2) / den7
        else:
            s2 = math.sqrt(max(0.0, 1.0 - c2 * c2))
            w = a2 * a2 / total
            infid = 1.0 - abs(1.0 - w + w * complex(c2, -s2) ** 2) ** 2
            if infid > AMBIGUITY_INFIDELITY:
                raise AmbiguousOutcomes(
                    "outcomes fit two pure states differing in the sign of sin(theta_2)"
                )
        theta2 = _phase(c2, s2)

    v = np.array([a0, a1 * np.exp(1j * theta1), a2 * np.exp(1j * theta2)])
    v[~on] = 0.0
    state = canonicalize(v, threshold=0.0)
    if consistency_tol is not None:
        slack = _dropped_slack(p, support_tol)
        res = _residual(state, eight_ops_d3(), p)
        if res > consistency_tol + slack:
            raise InconsistentOutcomes(
                f"reconstructed state misses the data by {res:.3e} (tolerance {consistency_tol:g})"
            )
    return state


def reconstruct_d3_converted(p, povm: Povm | None = None,
                             consistency_tol: float | None = CONSISTENCY_TOL) -> PureState:
    """Invert outcomes of the rank-1 POVM obtained by converting the eight d=3 operators.

    With ``G = sum E_k``, ``tr(F_k rho) = q tr(E_k sigma)`` where
    ``sigma ~ G^-1/2 |phi>`` and ``q`` is fixed by ``E_0 + E_1 + E_2 = I``. The
    raw solver recovers ``sigma`` and ``|phi> ~ G^1/2 sigma``.
    """
    p = _check_outcomes(p, 8)
    raw = eight_ops_d3()
    if povm is None:
        povm = rank1_convert(raw)
    q = p[:3].sum()
    if q <= 0:
        raise InconsistentOutcomes("outcomes of the computational-basis elements sum to zero")
    sigma = reconstruct_d3(p / q, consistency_tol=consistency_tol)
    root = qmath.sqrtm_psd(raw.total())
    state = canonicalize(root @ sigma.amplitudes)
    if consistency_tol is not None:
        res = _residual(state, povm, p)
        if res > consistency_tol + q * _dropped_slack(p / q, SUPPORT_TOL):
            raise InconsistentOutcomes(f"reconstructed state misses the data by {res:.3e}")
    return state


def adaptive_operator_count(dim: int, k: int) -> int:
    if dim < 1 or not 1 <= k <= dim:
        raise RangeError(f"need 1 <= k <= dim, got k={k}, dim={dim}")
    return dim + 2 * k - 2


def basis_operator(dim: int, s: int) -> Rank1Operator:
    v = np.zeros(dim, dtype=np.complex128)
    v[s] = 1.0
    return Rank1Operator(v)


def interference_pair(dim: int, anchor: int, site: int) -> tuple[Rank1Operator, Rank1Operator]:
    """``(|anchor> + |site>)(.)`` and ``(|anchor> + i|site>)(.)``."""
    f = np.zeros(dim, dtype=np.complex128)
    f[anchor] = 1.0
    g = f.copy()
    f[site] = 1.0
    g[site] = 1j
    return Rank1Operator(f), Rank1Operator(g)


class BornOracle:
    """Answers exact Born values ``<psi|E|psi>`` for a hidden state and counts queries."""

    def __init__(self, state):
        self._psi = np.asarray(state, dtype=np.complex128).ravel()
        self.queries = 0

    @property
    def dim(self) -> int:
        return self._psi.shape[0]

    def __call__(self, ops: Sequence[Rank1Operator]) -> np.ndarray:
        self.queries += len(ops)
        gens = np.stack([op.generator for op in ops])
        return np.abs(gens.conj() @ self._psi) ** 2


class SampledOracle(BornOracle):
    """Finite-shot estimates instead of exact values.

    Each operator ``E`` (largest eigenvalue ``w = tr E`` for rank-1) is measured
    as the two-outcome POVM ``{E/w, I - E/w}`` with ``shots`` repetitions; the
    click frequency is rescaled by ``w``.
    """

    def __init__(self, state, shots: int, seed=None):
        super().__init__(state)
        if shots < 1:
            raise ValueError("shots must be positive")
        self.shots = int(shots)
        self._rng = np.random.default_rng(seed)

    def __call__(self, ops):
        exact = super().__call__(ops)
        w = np.array([op.weight for op in ops])
        prob = np.clip(exact / w, 0.0, 1.0)
        return self._rng.binomial(self.shots, prob) / self.shots * w


@dataclass
class AdaptiveTranscript:
    dim: int
    support: SupportSet
    stage1_outcomes: np.ndarray
    stage2_outcomes: np.ndarray
    operators_used: list[Rank1Operator] = field(repr=False)
    reconstructed: PureState

    @property
    def operator_count(self) -> int:
        return len(self.operators_used)

    def to_dict(self) -> dict:
        from .jsonio import state_to_json, vector_to_json

        return {
            "dim": self.dim,
            "support": list(self.support.indices),
            "k": self.support.k,
            "operator_count": self.operator_count,
            "stage1_outcomes": [float(x) for x in self.stage1_outcomes],
            "stage2_outcomes": [float(x) for x in self.stage2_outcomes],
            "operators_used": [vector_to_json(op.generator) for op in self.operators_used],
            "reconstructed": state_to_json(self.reconstructed),
        }


def adaptive_reconstruct(oracle: Oracle, dim: int, support_tol: float = SUPPORT_TOL,
                         consistency_tol: float | None = CONSISTENCY_TOL) -> AdaptiveTranscript:
    """Reconstruct a hidden pure state with ``dim + 2k - 2`` rank-1 queries.

    ``oracle`` receives a list of :class:`Rank1Operator` and returns their
    Born values. Stage 1 asks for the ``dim`` computational projectors; stage 2
    asks, for each support site ``n_s`` after the first, for the pair from
    :func:`interference_pair` anchored at ``n_0``.
    """
    stage1 = [basis_operator(dim, s) for s in range(dim)]
    p1 = _check_outcomes(oracle(stage1), dim)
    amps = np.sqrt(np.clip(p1, 0.0, None))
    idx = np.flatnonzero(p1 > support_tol)
    if idx.size == 0:
        raise EmptySupport(f"no computational-basis outcome above {support_tol:g}")
    sup = SupportSet(tuple(int(i) for i in idx))
    n0 = sup.indices[0]

    stage2: list[Rank1Operator] = []
    for site in sup.indices[1:]:
        stage2.extend(interference_pair(dim, n0, site))
    p2 = _check_outcomes(oracle(stage2), len(stage2)) if stage2 else np.zeros(0)

    v = np.zeros(dim, dtype=np.complex128)
    v[n0] = amps[n0]
    for j, site in enumerate(sup.indices[1:]):
        base = amps[n0] ** 2 + amps[site] ** 2
        theta = _phase(p2[2 * j] - base, p2[2 * j + 1] - base)
        v[site] = amps[site] * np.exp(1j * theta)
    state = canonicalize(v, threshold=0.0)

    used = stage1 + stage2
    if consistency_tol is not None:
        gens = np.stack([op.generator for op in used])
        predicted = np.abs(gens.conj() @ state.amplitudes) ** 2
        res = float(np.max(np.abs(predicted - np.concatenate([p1, p2]))))
        if res > consistency_tol:
            raise InconsistentOutcomes(
                f"reconstructed state misses the queried values by {res:.3e}"
            )
    return AdaptiveTranscript(dim, sup, p1, p2, used, state)


def sample_frequencies(state, povm: OperatorSet, shots: int, seed=None) -> np.ndarray:
    """Multinomial outcome frequencies of ``shots`` measurements of a POVM."""
    if not povm.is_povm():
        raise NotAPovm("sampling needs elements that sum to the identity")
    p = np.clip(outcome_vector(state, povm), 0.0, None)
    rng = np.random.default_rng(seed)
    return rng.multinomial(int(shots), p / p.sum()) / shots

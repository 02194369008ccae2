"""Sampled audit of whether an operator set tells all pure states apart.

Two pure states are separated by a set ``{E_k}`` when some outcome differs;
the separation of a pair is ``max_k |tr((rho_1 - rho_2) E_k)|``. An audit draws
Haar-random pairs, then refines the worst-looking ones by local descent to
hunt for pairs with (numerically) identical statistics.

The verdict is one of:

``PASS``
    every tested pair is separated by at least ``delta_pass``. This is sampled
    evidence, not a proof.
``FAIL``
    a pair of clearly different states was found whose separation is below
    ``delta_fail``; the pair is re-checked through an independent trace
    computation before it is reported.
``INCONCLUSIVE``
    anything in between.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .errors import DimensionMismatch
from .povm import OperatorSet, born_matrix
from .states import PureState, canonicalize, fidelity, haar_vectors

DELTA_PASS = 1e-8
DELTA_FAIL = 1e-12
N_REFINE = 32
REFINE_ITERATIONS = 200
# Refined pairs are kept at least this far apart (fidelity ceiling) so the
# descent cannot win by collapsing both states onto each other.
REFINE_MAX_FIDELITY = 0.9
DISTINCT_FIDELITY = 1 - 1e-10
INITIAL_STEP = 0.05

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass
class DistinguishabilityReport:
    set_id: str
    pairs_tested: int
    min_separation: float
    verdict: str
    counterexample: tuple[PureState, PureState] | None = None
    counterexample_separation: float | None = None
    sampled_min_separation: float = float("nan")
    refined_min_separation: float | None = None
    seed: int | None = None
    mode: str = "pure"
    note: str = field(default="PASS is sampled evidence, not a proof of completeness")

    def to_dict(self) -> dict:
        from .jsonio import state_to_json

        out = {
            "set_id": self.set_id,
            "pairs_tested": self.pairs_tested,
            "min_separation": self.min_separation,
            "sampled_min_separation": self.sampled_min_separation,
            "refined_min_separation": self.refined_min_separation,
            "verdict": self.verdict,
            "seed": self.seed,
            "mode": self.mode,
            "note": self.note,
            "counterexample": None,
            "counterexample_separation": self.counterexample_separation,
        }
        if self.counterexample is not None:
            out["counterexample"] = [state_to_json(s) for s in self.counterexample]
        return out


def _vec(s) -> np.ndarray:
    return s.amplitudes if isinstance(s, PureState) else np.asarray(s, dtype=np.complex128).ravel()


def pair_separation(rho1, rho2, s: OperatorSet) -> float:
    """``max_k |<rho1|E_k|rho1> - <rho2|E_k|rho2>|`` for two pure states."""
    a, b = _vec(rho1), _vec(rho2)
    if a.shape != b.shape or a.shape[0] != s.dim:
        raise DimensionMismatch("states and operators must share one dimension")
    p = born_matrix(np.stack([a, b]), s)
    return float(np.max(np.abs(p[0] - p[1])))


def trace_separation(rho1, rho2, s: OperatorSet) -> float:
    """Same quantity as :func:`pair_separation`, computed from density matrices.

    Kept deliberately separate from the vectorized path so that reported
    counterexamples are confirmed by a second computation.
    """
    d1 = qmath.outer(_vec(rho1))
    d2 = qmath.outer(_vec(rho2))
    return max(abs(qmath.born_value(d1, e) - qmath.born_value(d2, e)) for e in s.elements)


def _separations(a: np.ndarray, b: np.ndarray, s: OperatorSet) -> np.ndarray:
    return np.max(np.abs(born_matrix(a, s) - born_matrix(b, s)), axis=1)


class _Refiner:
    """Vectorized adaptive coordinate search over many state pairs at once.

    Each state is charted by the real and imaginary parts of its amplitudes off
    an anchor index; the anchor amplitude is ``sqrt(1 - sum |z_j|^2)``, real.
    That is ``2(d-1)`` coordinates per state and removes the global phase.
    Every coordinate carries its own step, doubled after an accepted move and
    halved after a rejected one. The objective is the summed squared outcome
    difference, a smooth stand-in for the max-separation.
    """

    def __init__(self, s: OperatorSet, max_fidelity: float):
        self.s = s
        self.d = s.dim
        self.max_fidelity = max_fidelity
        self.gens = (np.stack(s.generators) if s.is_rank1 else None)

    def probs(self, z: np.ndarray) -> np.ndarray:
        # z: (..., d) -> (..., n)
        if self.gens is not None:
            return np.abs(z @ self.gens.conj().T) ** 2
        return np.einsum("...i,kij,...j->...k", z.conj(), self.s.stacked(), z).real

    def objective(self, z: np.ndarray) -> np.ndarray:
        # z: (R, 2, d)
        p = self.probs(z)
        obj = np.sum((p[:, 0] - p[:, 1]) ** 2, axis=1)
        fid = np.abs(np.einsum("ri,ri->r", z[:, 0].conj(), z[:, 1])) ** 2
        return np.where(fid <= self.max_fidelity, obj, np.inf)

    def _fix_anchor(self, z, anchors, valid):
        r = np.arange(z.shape[0])
        for t in (0, 1):
            a = anchors[:, t]
            rest = np.sum(np.abs(z[:, t]) ** 2, axis=1) - np.abs(z[r, t, a]) ** 2
            valid &= rest <= 1.0
            z[r, t, a] = np.sqrt(np.clip(1.0 - rest, 0.0, None))
        return z

    def run(self, a: np.ndarray, b: np.ndarray, iterations: int) -> np.ndarray:
        d = self.d
        z = np.stack([a, b], axis=1).astype(np.complex128)
        n_pairs = z.shape[0]
        if d == 1:
            return z
        anchors = np.argmax(np.abs(z), axis=2)
        r = np.arange(n_pairs)
        for t in (0, 1):
            z[:, t] *= (np.abs(z[r, t, anchors[:, t]]) / z[r, t, anchors[:, t]])[:, None]
        n_coord = 4 * (d - 1)
        steps = np.full((n_pairs, n_coord), INITIAL_STEP)
        best = self.objective(z)
        for _ in range(iterations):
            for c in range(n_coord):
                t, rem = divmod(c, 2 * (d - 1))
                slot, part = divmod(rem, 2)
                idx = slot + (slot >= anchors[:, t])
                unit = 1.0 if part == 0 else 1j
                improved = np.zeros(n_pairs, dtype=bool)
                for sign in (1.0, -1.0):
                    trial = z.copy()
                    trial[r, t, idx] += sign * unit * steps[:, c]
                    valid = np.ones(n_pairs, dtype=bool)
                    trial = self._fix_anchor(trial, anchors, valid)
                    val = np.where(valid, self.objective(trial), np.inf)
                    take = (val < best) & ~improved
                    z[take] = trial[take]
                    best = np.where(take, val, best)
                    improved |= take
                steps[:, c] = np.where(improved, steps[:, c] * 2.0, steps[:, c] * 0.5)
                steps[:, c] = np.clip(steps[:, c], 1e-18, 0.5)
        return z


def sampled_distinguishability(s: OperatorSet, n_pairs: int = 1000, seed: int | None = 0,
                               delta_pass: float = DELTA_PASS, delta_fail: float = DELTA_FAIL,
                               n_refine: int = N_REFINE, iterations: int = REFINE_ITERATIONS,
                               max_fidelity: float = REFINE_MAX_FIDELITY,
                               set_id: str | None = None, mixed: bool = False
                               ) -> DistinguishabilityReport:
    """Audit ``s`` on ``n_pairs`` Haar pairs plus ``n_refine`` refined pairs.

    With ``mixed=True`` pairs of random density matrices (Hilbert-Schmidt
    measure) are compared instead and no refinement is run.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    set_id = set_id or s.name or f"operator-set(d={s.dim}, n={len(s)})"
    rng = np.random.default_rng(seed)
    if mixed:
        return _mixed_audit(s, n_pairs, rng, delta_pass, set_id, seed)

    a = haar_vectors(s.dim, n_pairs, rng)
    b = haar_vectors(s.dim, n_pairs, rng)
    seps = _separations(a, b, s)
    fids = np.abs(np.einsum("ri,ri->r", a.conj(), b)) ** 2
    sampled_min = float(seps.min())

    refined_min = None
    cand_a, cand_b, cand_sep, cand_fid = a, b, seps, fids
    if n_refine > 0 and s.dim > 1:
        eligible = np.flatnonzero(fids <= max_fidelity)
        order = eligible[np.argsort(seps[eligible], kind="stable")][:n_refine]
        if order.size:
            z = _Refiner(s, max_fidelity).run(a[order], b[order], iterations)
            ra, rb = z[:, 0], z[:, 1]
            rseps = _separations(ra, rb, s)
            rfids = np.abs(np.einsum("ri,ri->r", ra.conj(), rb)) ** 2
            refined_min = float(rseps.min())
            cand_a = np.concatenate([a, ra])
            cand_b = np.concatenate([b, rb])
            cand_sep = np.concatenate([seps, rseps])
            cand_fid = np.concatenate([fids, rfids])

    total = cand_sep.shape[0]
    min_sep = float(cand_sep.min())
    report = DistinguishabilityReport(
        set_id=set_id, pairs_tested=int(total), min_separation=min_sep, verdict=INCONCLUSIVE,
        sampled_min_separation=sampled_min, refined_min_separation=refined_min, seed=seed,
    )

    suspects = np.flatnonzero((cand_sep < delta_fail) & (cand_fid < DISTINCT_FIDELITY))
    for i in suspects[np.argsort(cand_sep[suspects], kind="stable")]:
        pa, pb = canonicalize(cand_a[i]), canonicalize(cand_b[i])
        check = trace_separation(pa, pb, s)
        if check < delta_fail and fidelity(pa, pb) < DISTINCT_FIDELITY:
            report.verdict = FAIL
            report.counterexample = (pa, pb)
            report.counterexample_separation = check
            return report
    if min_sep >= delta_pass:
        report.verdict = PASS
    return report


def _random_density(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    rho = g @ np.conj(np.transpose(g, (0, 2, 1)))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def _mixed_audit(s, n_pairs, rng, delta_pass, set_id, seed):
    r1 = _random_density(s.dim, n_pairs, rng)
    r2 = _random_density(s.dim, n_pairs, rng)
    e = s.stacked()
    p1 = np.einsum("mij,kji->mk", r1, e).real
    p2 = np.einsum("mij,kji->mk", r2, e).real
    seps = np.max(np.abs(p1 - p2), axis=1)
    min_sep = float(seps.min())
    return DistinguishabilityReport(
        set_id=set_id, pairs_tested=n_pairs, min_separation=min_sep,
        verdict=PASS if min_sep >= delta_pass else INCONCLUSIVE,
        sampled_min_separation=min_sep, seed=seed, mode="mixed",
    )

"""Dense complex linear algebra for small Hermitian matrices.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
The eigensolver is a cyclic complex Jacobi iteration: at the dimensions this
package deals with (d up to a few dozen) it is fast enough and its accuracy
does not depend on eigenvalue gaps.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonConvergence, NonRealTrace, NotHermitian, SingularOperator

# Tolerances; callers may override per call.
HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
PD_TOL = 1e-10
TRACE_IMAG_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns, orthonormal

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_cmatrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def fro_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def outer(v) -> np.ndarray:
    """Return ``v v^dagger`` for a column vector ``v``."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    return np.outer(v, v.conj())


def hermitian_defect(a: np.ndarray) -> float:
    return fro_norm(a - a.conj().T)


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_cmatrix(a)
    return hermitian_defect(a) <= tol * max(fro_norm(a), 1e-300) or fro_norm(a) == 0.0


def _off_norm(a: np.ndarray) -> float:
    return fro_norm(a - np.diag(np.diag(a)))


def hermitian_eig(a, tol: float = HERMITIAN_TOL, jacobi_tol: float = JACOBI_TOL,
                  max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation zeroes one off-diagonal pair ``(p, q)``. The complex entry is
    first turned real by a diagonal phase, then a real symmetric Jacobi
    rotation annihilates it. Sweeps stop when the off-diagonal Frobenius mass
    drops to ``jacobi_tol * ||A||_F``.

    Returns eigenvalues in ascending order with matching eigenvector columns.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    scale = fro_norm(a)
    if hermitian_defect(a) > tol * scale:
        raise NotHermitian(f"||A - A^H||_F = {hermitian_defect(a):.3e} exceeds {tol:g} * ||A||_F")

    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    target = jacobi_tol * scale

    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0 or mag <= 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation restricted to (p, q): diag(1, conj(phase)) @ [[c, s], [-s, c]]
                m = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ m
                a[idx, :] = m.conj().T @ a[idx, :]
                a[q, p] = a[p, q] = 0.0
                v[:, idx] = v[:, idx] @ m
    else:
        if _off_norm(a) > target:
            raise NonConvergence(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {_off_norm(a):.3e})"
            )

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def matrix_function(a, fn, **kw) -> np.ndarray:
    """Apply a scalar function to the spectrum of a Hermitian matrix."""
    eig = hermitian_eig(a, **kw)
    vecs = eig.eigenvectors
    out = (vecs * fn(eig.eigenvalues)) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def inv_sqrt(a, pd_tol: float = PD_TOL, **kw) -> np.ndarray:
    """Hermitian inverse square root of a positive definite matrix.

    Raises :class:`SingularOperator` if the smallest eigenvalue is not above
    ``pd_tol``.
    """
    eig = hermitian_eig(a, **kw)
    lam_min = float(eig.eigenvalues[0])
    if lam_min <= pd_tol:
        raise SingularOperator(f"smallest eigenvalue {lam_min:.3e} is not above {pd_tol:g}")
    vecs = eig.eigenvectors
    out = (vecs / np.sqrt(eig.eigenvalues)) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def sqrtm_psd(a, **kw) -> np.ndarray:
    return matrix_function(a, lambda w: np.sqrt(np.clip(w, 0.0, None)), **kw)


def born_value(rho, e, imag_tol: float = TRACE_IMAG_TOL) -> float:
    """``tr(rho E)`` as a real number.

    The imaginary residue of the trace is dropped if it is below ``imag_tol``
    (scaled by the operator norms when those exceed one).
    """
    rho = as_cmatrix(rho)
    e = as_cmatrix(e)
    if rho.shape != e.shape:
        raise DimensionMismatch(f"rho is {rho.shape}, E is {e.shape}")
    tr = np.einsum("ij,ji->", rho, e)
    bound = imag_tol * max(1.0, fro_norm(rho) * fro_norm(e))
    if abs(tr.imag) > bound:
        raise NonRealTrace(f"tr(rho E) has imaginary part {tr.imag:.3e}")
    return float(tr.real)

"""Dense complex linear algebra on small matrices plus entropy primitives.

All entropies are base-2 (bits).  Matrices are plain complex numpy arrays;
dimensions are capped at 64 (six qubits), which is all the rest of the
library ever needs.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError, ValidationError

MAX_DIM = 64
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
EIG_NEGATIVE_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


def ensure_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(a)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3e} > {tol:.0e})")
    return m


def ensure_density_matrix(a, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """Validate Hermiticity and unit trace; PSD is checked where eigenvalues are taken."""
    m = ensure_hermitian(a)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace is {tr!r}, expected 1 within {trace_tol:.0e}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product with the library-wide size cap."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] * b.shape[0] > 4096:
        raise ValidationError("kron output dimension exceeds 4096")
    return np.kron(a, b)


def kron_all(*mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def partial_trace(rho, qubit_count: int, keep) -> np.ndarray:
    """Trace out all qubits not in `keep` (qubit 0 is the leftmost tensor factor)."""
    rho = as_matrix(rho)
    if rho.shape[0] != 2 ** qubit_count:
        raise ValidationError(f"dimension {rho.shape[0]} != 2^{qubit_count}")
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise ValidationError("keep must be non-empty")
    if keep[0] < 0 or keep[-1] >= qubit_count:
        raise IndexError(f"keep={keep} out of range for {qubit_count} qubits")
    n = qubit_count
    t = rho.reshape([2] * (2 * n))
    # contract row/column axes of every traced qubit
    traced = [q for q in range(n) if q not in keep]
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + (t.ndim // 2))
    d = 2 ** len(keep)
    return t.reshape(d, d)


def eig_hermitian(h, tol: float = 1e-12, max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues descending, eigenvectors as matching columns).
    Iterates until the off-diagonal Frobenius norm drops below
    tol * max(1, ||h||_F).
    """
    a = ensure_hermitian(h).copy()
    n = a.shape[0]
    if n > MAX_DIM:
        raise ValidationError(f"dimension {n} exceeds the {MAX_DIM} limit")
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    scale = max(1.0, float(np.linalg.norm(a)))

    def offdiag_norm(m):
        off = m - np.diag(np.diag(m))
        return float(np.linalg.norm(off))

    for _ in range(max_sweeps):
        if offdiag_norm(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300 or r <= (tol * scale) / (n * n):
                    continue
                ph = apq / r
                # zero a[p,q]: phase out, then a real rotation of angle theta
                theta = 0.5 * np.arctan2(2.0 * r, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(ph) * col_q
                a[:, q] = s * ph * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * ph * row_q
                a[q, :] = s * np.conj(ph) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(ph) * vq
                v[:, q] = s * ph * vp + c * vq
    else:
        raise NumericError(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {offdiag_norm(a):.3e})"
        )
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def _entropy_of_eigenvalues(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    if np.any(w < -EIG_NEGATIVE_TOL):
        raise ValidationError(f"matrix is not PSD (eigenvalue {w.min():.3e})")
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def von_neumann_entropy(rho) -> float:
    """-Tr[rho log2 rho]; eigenvalues in [-1e-10, 0) are clamped to 0."""
    rho = ensure_density_matrix(rho)
    w, _ = eig_hermitian(rho)
    s = _entropy_of_eigenvalues(w)
    return min(max(s, 0.0), np.log2(rho.shape[0]))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with the 0 log 0 := 0 convention."""
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise ValidationError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(float(x), 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def binary_entropy_deriv(x: float) -> float:
    """h'(x) = log2((1-x)/x) for x in (0, 1)."""
    if not 0.0 < x < 1.0:
        raise ValidationError(f"binary_entropy_deriv argument {x!r} outside (0, 1)")
    return float(np.log2((1.0 - x) / x))


def validate_probability_vector(weights, sum_tol: float = 1e-9) -> np.ndarray:
    w = np.asarray(weights, dtype=float).ravel()
    if np.any(w < -1e-12):
        raise ValidationError(f"negative weight {w.min():.3e} beyond tolerance")
    w = np.clip(w, 0.0, None)
    if abs(w.sum() - 1.0) > sum_tol:
        raise ValidationError(f"weights sum to {w.sum()!r}, expected 1 within {sum_tol:.0e}")
    return w


def shannon_entropy(weights) -> float:
    """Shannon entropy in bits of a probability vector; zero weights are skipped."""
    w = validate_probability_vector(weights)
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0

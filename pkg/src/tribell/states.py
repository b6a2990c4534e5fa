"""State and measurement constructors: GHZ/Bell states, depolarizing noise,
the GHZ-basis block-diagonal family, and angle-parametrized observables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import ValidationError
from .qmath import as_matrix, kron_all

if TYPE_CHECKING:  # pragma: no cover
    from .bell import BellSpec

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

SQRT2 = np.sqrt(2.0)


def ghz_vector(qubit_count: int = 3) -> np.ndarray:
    """(|0...0> + |1...1>)/sqrt(2); qubit_count=2 gives the Bell state Phi+."""
    if qubit_count < 2:
        raise ValidationError("need at least 2 qubits")
    v = np.zeros(2 ** qubit_count, dtype=complex)
    v[0] = v[-1] = 1.0 / SQRT2
    return v


def ghz_state(qubit_count: int = 3) -> np.ndarray:
    v = ghz_vector(qubit_count)
    return np.outer(v, v.conj())


def ghz_basis_vector(i: int, j: int, k: int) -> np.ndarray:
    """(|0,j,k> + (-1)^i |1,~j,~k>)/sqrt(2)."""
    if not all(b in (0, 1) for b in (i, j, k)):
        raise ValidationError("bits must be 0 or 1")
    v = np.zeros(8, dtype=complex)
    v[(0 << 2) | (j << 1) | k] = 1.0 / SQRT2
    v[(1 << 2) | ((1 - j) << 1) | (1 - k)] = (-1.0) ** i / SQRT2
    return v


def ghz_basis_state(i: int, j: int, k: int) -> np.ndarray:
    """Rank-1 projector onto the GHZ-basis element (i, j, k)."""
    v = ghz_basis_vector(i, j, k)
    return np.outer(v, v.conj())


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"depolarization parameter p={p!r} outside [0, 1]")
    return float(p)


def depolarize_local(rho, p: float, qubit_count: int) -> np.ndarray:
    """Apply sigma -> p*sigma + (1-p)*I/2 independently to every qubit.

    Implemented as the exact Pauli mixture
    (1+3p)/4 * sigma + (1-p)/4 * (X sigma X + Y sigma Y + Z sigma Z) per qubit.
    """
    p = _check_p(p)
    rho = as_matrix(rho)
    if rho.shape[0] != 2 ** qubit_count:
        raise ValidationError(f"dimension {rho.shape[0]} != 2^{qubit_count}")
    c0 = (1.0 + 3.0 * p) / 4.0
    c1 = (1.0 - p) / 4.0
    out = rho
    for q in range(qubit_count):
        ops = [kron_all(*(P if j == q else I2 for j in range(qubit_count)))
               for P in (X, Y, Z)]
        out = c0 * out + c1 * sum(op @ out @ op for op in ops)
    return out


def depolarize_global(rho, p: float) -> np.ndarray:
    """p*rho + (1-p)*I/dim."""
    p = _check_p(p)
    rho = as_matrix(rho)
    d = rho.shape[0]
    return p * rho + (1.0 - p) * np.eye(d, dtype=complex) / d


@dataclass(frozen=True)
class NoiseModel:
    """Local (per-qubit) or global depolarization with survival probability p."""

    kind: str  # "local" | "global"
    p: float

    def __post_init__(self):
        if self.kind not in ("local", "global"):
            raise ValidationError(f"unknown noise kind {self.kind!r}")
        _check_p(self.p)

    def apply(self, rho, qubit_count: int) -> np.ndarray:
        if self.kind == "local":
            return depolarize_local(rho, self.p, qubit_count)
        return depolarize_global(rho, self.p)


@dataclass(frozen=True)
class Observable:
    """Binary qubit observable in either the x-z or x-y Bloch plane.

    plane "xz": Z cos(angle) + X sin(angle);  plane "xy": X cos(angle) + Y sin(angle).
    """

    plane: str
    angle: float

    def __post_init__(self):
        if self.plane not in ("xz", "xy"):
            raise ValidationError(f"unknown plane {self.plane!r}")

    @property
    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.angle), np.sin(self.angle)
        if self.plane == "xz":
            return c * Z + s * X
        return c * X + s * Y


def obs_matrix(o) -> np.ndarray:
    """Accept an Observable, a 2x2 matrix, or None (identity)."""
    if o is None:
        return I2
    if isinstance(o, Observable):
        return o.matrix
    return as_matrix(o)


@dataclass(frozen=True)
class MeasurementSettings:
    """Two observables per party; charlie is None for bipartite scenarios."""

    alice: tuple[Observable, Observable]
    bob: tuple[Observable, Observable]
    charlie: Optional[tuple[Observable, Observable]] = None

    @property
    def parties(self) -> int:
        return 2 if self.charlie is None else 3

    @staticmethod
    def _combo(pair: tuple[Observable, Observable], sign: float) -> np.ndarray:
        return 0.5 * (pair[0].matrix + sign * pair[1].matrix)

    def b_plus(self) -> np.ndarray:
        return self._combo(self.bob, +1.0)

    def b_minus(self) -> np.ndarray:
        return self._combo(self.bob, -1.0)

    def c_plus(self) -> np.ndarray:
        if self.charlie is None:
            raise ValidationError("no third party in these settings")
        return self._combo(self.charlie, +1.0)

    def c_minus(self) -> np.ndarray:
        if self.charlie is None:
            raise ValidationError("no third party in these settings")
        return self._combo(self.charlie, -1.0)

    def combo_angles(self) -> dict[str, float]:
        """Half-sum/half-difference angles of each party's pair of observables."""
        out = {}
        pairs = {"a": self.alice, "b": self.bob}
        if self.charlie is not None:
            pairs["c"] = self.charlie
        for name, (o0, o1) in pairs.items():
            out[name + "+"] = 0.5 * (o0.angle + o1.angle)
            out[name + "-"] = 0.5 * (o0.angle - o1.angle)
        return out


def settings_from_angles(a0, a1, b0, b1, c0=None, c1=None, plane: str = "xz") -> MeasurementSettings:
    charlie = None
    if c0 is not None:
        charlie = (Observable(plane, c0), Observable(plane, c1))
    return MeasurementSettings(
        alice=(Observable(plane, a0), Observable(plane, a1)),
        bob=(Observable(plane, b0), Observable(plane, b1)),
        charlie=charlie,
    )


def optimal_settings(spec: "BellSpec") -> MeasurementSettings:
    """Measurement settings that reach the quantum bound on the noiseless GHZ/Phi+ state."""
    kind = spec.kind
    if kind == "holz":
        # A0=Z, A1=X; B+=C+=(sqrt3/2)X, B-=C-=-(1/2)Z  => b0=c0=2pi/3, b1=c1=pi/3
        return settings_from_angles(0.0, np.pi / 2,
                                    2 * np.pi / 3, np.pi / 3,
                                    2 * np.pi / 3, np.pi / 3)
    if kind == "parity-chsh":
        # A0=Z, A1=X; B+=(1/sqrt2)Z, B-=(1/sqrt2)X; C0=C1=X
        return settings_from_angles(0.0, np.pi / 2,
                                    np.pi / 4, -np.pi / 4,
                                    np.pi / 2, np.pi / 2)
    if kind == "mabk":
        # x-y plane: A0=B0=Y, A1=B1=X, C0=-Y, C1=-X
        return settings_from_angles(np.pi / 2, 0.0,
                                    np.pi / 2, 0.0,
                                    3 * np.pi / 2, np.pi,
                                    plane="xy")
    if kind == "asym-chsh":
        alpha = spec.alpha
        b = np.arctan2(1.0, alpha)
        return settings_from_angles(0.0, np.pi / 2, b, -b)
    raise ValidationError(f"unknown inequality kind {kind!r}")


@dataclass(frozen=True)
class BlockDiagState:
    """Three-qubit state block-diagonal in the GHZ basis.

    Canonical coordinates are the per-block eigenvalues rho[i, j, k] (block
    (j, k) couples the basis elements (0,j,k) and (1,~j,~k); i labels the two
    eigenvalues, sorted so rho[0,j,k] >= rho[1,j,k]) and the eigenvector
    rotation angles t[j, k].  The {lambda_ijk, r_jk} coordinates of the
    matrix representation are a derived view.
    """

    rho: np.ndarray = field(repr=False)  # shape (2, 2, 2)
    t: np.ndarray = field(repr=False)    # shape (2, 2)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float).reshape(2, 2, 2).copy()
        t = np.asarray(self.t, dtype=float).reshape(2, 2).copy()
        if np.any(rho < -1e-10):
            raise ValidationError(f"negative block eigenvalue {rho.min():.3e}")
        rho = np.clip(rho, 0.0, None)
        if abs(rho.sum() - 1.0) > 1e-10:
            raise ValidationError(f"block eigenvalues sum to {rho.sum()!r}")
        # enforce rho_0jk >= rho_1jk; swapping eigenvalues rotates t by pi/2
        swap = rho[0] < rho[1]
        if np.any(swap):
            r0 = np.where(swap, rho[1], rho[0])
            r1 = np.where(swap, rho[0], rho[1])
            rho = np.stack([r0, r1])
            t = np.where(swap, t + np.pi / 2, t)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "t", t)

    @classmethod
    def from_lambda_r(cls, lambdas, r) -> "BlockDiagState":
        """Build from GHZ-basis weights lambda[i,j,k] and real coherences r[j,k]."""
        lam = np.asarray(lambdas, dtype=float).reshape(2, 2, 2)
        r = np.asarray(r, dtype=float).reshape(2, 2)
        rho = np.zeros((2, 2, 2))
        t = np.zeros((2, 2))
        for j in (0, 1):
            for k in (0, 1):
                l0 = lam[0, j, k]
                l1 = lam[1, 1 - j, 1 - k]
                s = np.hypot(l0 - l1, 2.0 * r[j, k])
                rho[0, j, k] = 0.5 * (l0 + l1 + s)
                rho[1, j, k] = 0.5 * (l0 + l1 - s)
                t[j, k] = 0.5 * np.arctan2(2.0 * r[j, k], l0 - l1)
        return cls(rho, t)

    @property
    def lambdas(self) -> np.ndarray:
        """GHZ-basis diagonal weights lambda[i, j, k]."""
        lam = np.zeros((2, 2, 2))
        c2 = np.cos(self.t) ** 2
        s2 = np.sin(self.t) ** 2
        for j in (0, 1):
            for k in (0, 1):
                lam[0, j, k] = c2[j, k] * self.rho[0, j, k] + s2[j, k] * self.rho[1, j, k]
                lam[1, 1 - j, 1 - k] = s2[j, k] * self.rho[0, j, k] + c2[j, k] * self.rho[1, j, k]
        return lam

    @property
    def r(self) -> np.ndarray:
        """Real coherences r[j, k] between (0,j,k) and (1,~j,~k)."""
        return 0.5 * np.sin(2.0 * self.t) * (self.rho[0] - self.rho[1])

    def eigenvalues(self) -> np.ndarray:
        return self.rho.reshape(-1).copy()

    def eigenvectors(self) -> np.ndarray:
        """Columns: eigenvector of rho[i,j,k] in the computational basis, index i*4+j*2+k."""
        v = np.zeros((8, 8))
        for j in (0, 1):
            for k in (0, 1):
                c, s = np.cos(self.t[j, k]), np.sin(self.t[j, k])
                psi0 = ghz_basis_vector(0, j, k).real
                psi1 = ghz_basis_vector(1, 1 - j, 1 - k).real
                v[:, (0 << 2) | (j << 1) | k] = c * psi0 + s * psi1
                v[:, (1 << 2) | (j << 1) | k] = -s * psi0 + c * psi1
        return v

    def to_matrix(self) -> np.ndarray:
        v = self.eigenvectors()
        w = self.rho.reshape(-1)
        return (v * w) @ v.T + 0j

    def correlators(self) -> dict[str, float]:
        """The five expectation values entering the reduced Holz Bell value."""
        d = self.rho[0] - self.rho[1]
        tot = self.rho[0] + self.rho[1]
        c2, s2 = np.cos(2 * self.t), np.sin(2 * self.t)
        sj = np.array([[1.0, 1.0], [-1.0, -1.0]])
        sk = np.array([[1.0, -1.0], [1.0, -1.0]])
        return {
            "XXX": float((d * c2).sum()),
            "ZXX": float((d * s2).sum()),
            "ZZI": float((d * c2 * sj).sum()),
            "ZIZ": float((d * c2 * sk).sum()),
            "IZZ": float((tot * sj * sk).sum()),
        }


def tau_state(nu: float) -> BlockDiagState:
    """Two-eigenvalue tightness family: nu on (0,0,0), 1-nu on (1,0,0)."""
    if not 0.5 <= nu <= 1.0:
        raise ValidationError(f"nu={nu!r} outside [1/2, 1]")
    lam = np.zeros((2, 2, 2))
    lam[0, 0, 0] = nu
    lam[1, 0, 0] = 1.0 - nu
    return BlockDiagState.from_lambda_r(lam, np.zeros((2, 2)))

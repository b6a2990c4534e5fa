"""Bell functionals: correlators and Bell values for the Holz, Parity-CHSH,
MABK and asymmetric-CHSH inequalities, plus the reduced Holz forms used by
the entropy optimizer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .qmath import as_matrix, kron_all
from .states import BlockDiagState, MeasurementSettings, obs_matrix

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class BellSpec:
    """One Bell inequality: its bounds and the per-test-round input-bit cost r."""

    kind: str  # "holz" | "parity-chsh" | "mabk" | "asym-chsh"
    local_bound: float
    quantum_bound: float
    input_bits: int
    alpha: float = 1.0

    def __post_init__(self):
        if self.local_bound >= self.quantum_bound:
            raise ValidationError("local bound must lie below the quantum bound")

    @property
    def parties(self) -> int:
        return 2 if self.kind == "asym-chsh" else 3


def holz() -> BellSpec:
    return BellSpec("holz", 1.0, 1.5, 3)


def parity_chsh() -> BellSpec:
    return BellSpec("parity-chsh", 1.0, SQRT2, 2)


def mabk() -> BellSpec:
    return BellSpec("mabk", 2.0, 4.0, 3)


def asym_chsh(alpha: float = 1.0) -> BellSpec:
    local = 2.0 * max(1.0, abs(alpha))
    return BellSpec("asym-chsh", local, 2.0 * np.hypot(1.0, alpha), 2, alpha=float(alpha))


def chsh() -> BellSpec:
    return asym_chsh(1.0)


def spec_by_name(name: str, alpha: float = 1.0) -> BellSpec:
    table = {
        "holz": holz,
        "parity-chsh": parity_chsh,
        "mabk": mabk,
        "chsh": chsh,
    }
    if name in table:
        return table[name]()
    if name == "asym-chsh":
        return asym_chsh(alpha)
    raise ValidationError(f"unknown inequality {name!r}")


@dataclass(frozen=True)
class BellValue:
    beta: float
    spec: BellSpec

    def __post_init__(self):
        # one-sided: asymmetric functionals (Holz, Parity-CHSH) reach values
        # below -quantum_bound already classically
        if self.beta > self.spec.quantum_bound + 1e-9:
            raise ValidationError(
                f"beta={self.beta!r} exceeds the quantum bound "
                f"{self.spec.quantum_bound!r}"
            )


def correlator(rho, observables) -> float:
    """Tr[rho (O_1 x O_2 x ...)]; entries of `observables` may be None (identity)."""
    rho = as_matrix(rho)
    op = kron_all(*(obs_matrix(o) for o in observables))
    if op.shape != rho.shape:
        raise ValidationError(f"operator dim {op.shape[0]} != state dim {rho.shape[0]}")
    val = complex(np.trace(rho @ op))
    if abs(val.imag) > 1e-10:
        raise ValidationError(f"correlator has imaginary part {val.imag:.3e}")
    return float(val.real)


def bell_value(spec: BellSpec, rho, settings: MeasurementSettings) -> BellValue:
    rho = as_matrix(rho)
    dim = 2 ** spec.parties
    if rho.shape[0] != dim:
        raise ValidationError(
            f"{spec.kind} needs a {spec.parties}-qubit state, got dim {rho.shape[0]}"
        )
    a0, a1 = (o.matrix for o in settings.alice)
    b0, b1 = (o.matrix for o in settings.bob)
    if spec.kind == "asym-chsh":
        al = spec.alpha
        beta = (al * correlator(rho, [a0, b0]) + al * correlator(rho, [a0, b1])
                + correlator(rho, [a1, b0]) - correlator(rho, [a1, b1]))
        return BellValue(beta, spec)
    if settings.charlie is None:
        raise ValidationError(f"{spec.kind} needs settings for three parties")
    c0, c1 = (o.matrix for o in settings.charlie)
    if spec.kind == "holz":
        bp, bm = settings.b_plus(), settings.b_minus()
        cp, cm = settings.c_plus(), settings.c_minus()
        beta = (correlator(rho, [a1, bp, cp]) - correlator(rho, [a0, bm, None])
                - correlator(rho, [a0, None, cm]) - correlator(rho, [None, bm, cm]))
        return BellValue(beta, spec)
    if spec.kind == "parity-chsh":
        bp, bm = settings.b_plus(), settings.b_minus()
        beta = correlator(rho, [a1, bm, c0]) + correlator(rho, [a0, bp, None])
        return BellValue(beta, spec)
    if spec.kind == "mabk":
        beta = (correlator(rho, [a0, b0, c1]) + correlator(rho, [a0, b1, c0])
                + correlator(rho, [a1, b0, c0]) - correlator(rho, [a1, b1, c1]))
        return BellValue(beta, spec)
    raise ValidationError(f"unknown inequality kind {spec.kind!r}")


def holz_reduced_value(state: BlockDiagState, b0: float, a1: float, c_minus: float) -> float:
    """Holz Bell value in the reduced frame (a0=0, b+=c+=pi/2, b1=pi-b0)."""
    c = state.correlators()
    return float(
        (np.cos(a1) * c["ZXX"] + np.sin(a1) * c["XXX"]) * np.sin(b0) * np.cos(c_minus)
        - np.cos(b0) * c["ZZI"]
        + np.sin(c_minus) * c["ZIZ"]
        + np.cos(b0) * np.sin(c_minus) * c["IZZ"]
    )


def holz_vbar(state: BlockDiagState, b0: float) -> float:
    """Maximum of the reduced Holz value over the free angles a1 and c-."""
    c = state.correlators()
    sb, cb = np.sin(b0), np.cos(b0)
    return float(
        np.sqrt(sb * sb * (c["ZXX"] ** 2 + c["XXX"] ** 2)
                + (c["ZIZ"] + cb * c["IZZ"]) ** 2)
        - cb * c["ZZI"]
    )


def parity_vbar(state: BlockDiagState, b0: float) -> float:
    """Parity-CHSH analogue of holz_vbar: the reduced value with c- frozen at 0,
    maximized over a1 only."""
    c = state.correlators()
    return float(
        abs(np.sin(b0)) * np.hypot(c["ZXX"], c["XXX"]) - np.cos(b0) * c["ZZI"]
    )


def reduced_settings(b0: float, a1: float, c_minus: float) -> MeasurementSettings:
    """Full six-angle settings matching the reduced Holz parametrization."""
    from .states import settings_from_angles

    return settings_from_angles(
        0.0, a1,
        b0, np.pi - b0,
        np.pi / 2 + c_minus, np.pi / 2 - c_minus,
    )

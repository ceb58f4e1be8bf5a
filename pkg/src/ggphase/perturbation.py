"""Stationary perturbation theory through third order for nondegenerate
spectra, including the table of closed triple-product phases that the
third-order energy shift sums over.

The third-order double sum runs over matrix-element triples V_nk V_kl V_ln
whose Arg is a gauge-invariant three-state chain phase; the table exposes
each triple's modulus, phase, and energy denominator separately so the phase
content of the shift can be inspected term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSpectrum
from .hilbert import (
    DEFAULT_TOLS,
    Observable,
    StateVector,
    ToleranceConfig,
    wrap_angle,
)

__all__ = [
    "EigenSystem",
    "ShiftSeries",
    "PhaseTermRow",
    "PhaseTermTable",
    "energy_shift",
    "perturbed_state",
    "third_order_phase_terms",
]

_REALITY_TOL = 1e-12


class EigenSystem:
    """A nondegenerate reference spectrum with its orthonormal eigenbasis.

    Parameters
    ----------
    energies : sequence of float
        Strictly ascending level energies.
    basis : sequence of StateVector
        One orthonormal eigenvector per energy, in the same order.
    gap_tol : float
        Smallest admissible level spacing; anything at or below raises
        DegenerateSpectrum, since every formula here divides by gaps.
    """

    __slots__ = ("_energies", "_basis")

    def __init__(
        self,
        energies,
        basis: Sequence[StateVector],
        gap_tol: float = 1e-8,
        tol: ToleranceConfig = DEFAULT_TOLS,
    ):
        e = np.asarray(energies, dtype=np.float64)
        if e.ndim != 1 or e.shape[0] < 2:
            raise ValueError(f"need at least 2 levels, got shape {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("energies contain non-finite entries")
        if len(basis) != e.shape[0]:
            raise ValueError(
                f"{len(basis)} basis states for {e.shape[0]} energies"
            )
        gaps = np.diff(e)
        if np.any(gaps <= 0.0):
            raise ValueError("energies must be strictly ascending")
        if gaps.min() <= gap_tol:
            k = int(np.argmin(gaps))
            raise DegenerateSpectrum(
                f"levels {k} and {k + 1} are separated by {gaps.min():.3e} <= gap_tol"
            )
        stack = np.stack([b.components for b in basis])
        gram_defect = np.abs(stack.conj() @ stack.T - np.eye(stack.shape[0])).max()
        if gram_defect > tol.tol_herm:
            raise ValueError(
                f"basis is not orthonormal: max |<b_a|b_b> - delta_ab| = {gram_defect:.3e}"
            )
        e.setflags(write=False)
        stack.setflags(write=False)
        self._energies = e
        self._basis = stack

    @classmethod
    def standard(cls, energies, gap_tol: float = 1e-8) -> "EigenSystem":
        """Diagonal reference: level k lives on the k-th coordinate axis."""
        e = np.asarray(energies, dtype=np.float64)
        basis = [StateVector.basis_vector(e.shape[0], k) for k in range(e.shape[0])]
        return cls(e, basis, gap_tol=gap_tol)

    @property
    def energies(self) -> np.ndarray:
        return self._energies

    @property
    def basis_matrix(self) -> np.ndarray:
        """Basis states stacked as rows, shape (levels, dim)."""
        return self._basis

    @property
    def level_count(self) -> int:
        return self._energies.shape[0]

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    def __repr__(self) -> str:
        return f"EigenSystem(levels={self.level_count}, dim={self.dim})"


@dataclass(frozen=True)
class ShiftSeries:
    """Energy-shift expansion coefficients for one level.

    total evaluates coupling*order1 + coupling^2*order2 + coupling^3*order3;
    the orders themselves are coupling-independent.
    """

    order1: float
    order2: float
    order3: float
    coupling: float

    @property
    def total(self) -> float:
        c = self.coupling
        return c * self.order1 + c * c * self.order2 + c * c * c * self.order3


@dataclass(frozen=True)
class PhaseTermRow:
    """One closed matrix-element triple: indices, modulus, phase, denominator.

    The denominator is real for stationary perturbation rows and complex
    (regulated) for scattering rows.
    """

    k: int
    l: int
    modulus: float
    gamma_v: float
    denominator: complex


@dataclass(frozen=True)
class PhaseTermTable:
    """Deterministically ordered collection of PhaseTermRow entries."""

    rows: tuple[PhaseTermRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def reconstruct(self) -> complex:
        """Sum of modulus * exp(i gamma_v) / denominator over all rows."""
        terms = [
            row.modulus * complex(math.cos(row.gamma_v), math.sin(row.gamma_v)) / row.denominator
            for row in self.rows
        ]
        return complex(
            math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms)
        )


def _projected_potential(sys: EigenSystem, V: Observable) -> np.ndarray:
    """V in the eigenbasis, symmetrized so W[l,k] == conj(W[k,l]) exactly.

    The exact pairing makes the double sums below real to the last bit
    instead of merely within the hermiticity tolerance of the input.
    """
    if V.dim != sys.dim:
        raise ValueError(f"V dim {V.dim} does not match system dim {sys.dim}")
    b = sys.basis_matrix
    m = b.conj() @ V.entries @ b.T
    return 0.5 * (m + m.conj().T)


def _check_level(sys: EigenSystem, n: int) -> None:
    if not 0 <= n < sys.level_count:
        raise ValueError(f"level {n} out of range for {sys.level_count} levels")


def energy_shift(
    sys: EigenSystem, V: Observable, n: int, coupling: float
) -> ShiftSeries:
    """First three orders of the level-n energy shift under coupling * V.

    order1 = V_nn
    order2 = sum_{k != n} |V_nk|^2 / (E_n - E_k)
    order3 = sum_{k,l != n} V_nk V_kl V_ln / ((E_n - E_k)(E_n - E_l))
             - V_nn sum_{k != n} |V_nk|^2 / (E_n - E_k)^2

    Every order is real; the third-order double sum cancels its imaginary
    parts in (k,l) <-> (l,k) pairs and is verified to below 1e-12.
    """
    _check_level(sys, n)
    if not math.isfinite(coupling):
        raise ValueError(f"coupling must be finite, got {coupling}")
    w = _projected_potential(sys, V)
    e = sys.energies
    others = [k for k in range(sys.level_count) if k != n]
    gaps = {k: e[n] - e[k] for k in others}
    order1 = w[n, n].real
    order2 = math.fsum(abs(w[n, k]) ** 2 / gaps[k] for k in others)
    double = [
        w[n, k] * w[k, l] * w[l, n] / (gaps[k] * gaps[l])
        for k in others
        for l in others
    ]
    residue = math.fsum(z.imag for z in double)
    if abs(residue) > _REALITY_TOL:
        raise ValueError(f"third-order imaginary residue {residue:.3e} exceeds 1e-12")
    correction = order1 * math.fsum(abs(w[n, k]) ** 2 / gaps[k] ** 2 for k in others)
    order3 = math.fsum(z.real for z in double) - correction
    return ShiftSeries(order1, order2, order3, coupling)


def perturbed_state(
    sys: EigenSystem, V: Observable, n: int, coupling: float
) -> StateVector:
    """Level-n eigenvector through second order in coupling * V.

    Uses the normalization <n0|n> = 1, under which the expansion is

    |n> = |n0> + c sum_{k != n} |k0> V_kn / (E_n - E_k)
          + c^2 sum_{k != n} |k0> [ sum_{l != n} V_kl V_ln / ((E_n-E_k)(E_n-E_l))
                                    - V_nn V_kn / (E_n - E_k)^2 ],

    so the result is not unit-normalized.
    """
    _check_level(sys, n)
    if not math.isfinite(coupling):
        raise ValueError(f"coupling must be finite, got {coupling}")
    w = _projected_potential(sys, V)
    e = sys.energies
    b = sys.basis_matrix
    others = [k for k in range(sys.level_count) if k != n]
    vec = b[n].astype(np.complex128)
    for k in others:
        gap_k = e[n] - e[k]
        first = w[k, n] / gap_k
        second = (
            sum(w[k, l] * w[l, n] / (gap_k * (e[n] - e[l])) for l in others)
            - w[n, n] * w[k, n] / gap_k**2
        )
        vec = vec + (coupling * first + coupling**2 * second) * b[k]
    return StateVector(vec)


def third_order_phase_terms(
    sys: EigenSystem,
    V: Observable,
    n: int,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseTermTable:
    """Triple-product decomposition of the third-order double sum for level n.

    One row per ordered pair (k, l) with k, l != n and nonvanishing modulus
    |V_nk V_kl V_ln|; gamma_v is the wrapped sum of the three element Args
    and the denominator is (E_n - E_k)(E_n - E_l). Row order is k-major.

    Summing modulus * cos(gamma_v) / denominator over the rows reproduces
    the double-sum part of ShiftSeries.order3; rows (k, l) and (l, k) carry
    opposite gamma_v.
    """
    _check_level(sys, n)
    w = _projected_potential(sys, V)
    e = sys.energies
    others = [k for k in range(sys.level_count) if k != n]
    rows = []
    for k in others:
        for l in others:
            triple = (w[n, k], w[k, l], w[l, n])
            modulus = abs(triple[0]) * abs(triple[1]) * abs(triple[2])
            if modulus <= tol.tol_zero:
                continue
            gamma = wrap_angle(math.fsum(np.angle(z) for z in triple))
            rows.append(
                PhaseTermRow(
                    k, l, float(modulus), gamma, float((e[n] - e[k]) * (e[n] - e[l]))
                )
            )
    return PhaseTermTable(tuple(rows))

"""Unitary time evolution and the dynamical settings where chain phases show
up: short-time projective-measurement cycles, closed-form two-level chains,
and the perturbative survival amplitude.

Units put hbar = 1 everywhere, so frequencies are energy differences and
exp(-i t H) is the propagator of a time-independent Hermitian H.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonOrthogonalBasis, UndefinedPhase
from .hilbert import (
    DEFAULT_TOLS,
    Observable,
    StateVector,
    ToleranceConfig,
    principal_arg,
    wrap_angle,
)

__all__ = [
    "UnitaryMatrix",
    "TwoLevelParams",
    "TwoLevelKind",
    "CycleResult",
    "evolve",
    "projective_cycle_amplitude",
    "two_level_state",
    "two_level_phase",
    "pauli_x",
    "hadamard",
    "f_mn",
    "survival_amplitude",
]

_UNITARITY_TOL = 1e-10


class UnitaryMatrix:
    """A square complex matrix validated to be unitary.

    Parameters
    ----------
    entries : array_like of complex, shape (dim, dim)
        Must satisfy max |(U^dagger U - 1)_ij| <= 1e-10.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        mat = np.asarray(entries, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"unitary must be square, got shape {mat.shape}")
        if not np.all(np.isfinite(mat.view(np.float64))):
            raise ValueError("unitary entries contain non-finite values")
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > _UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: max |U^H U - 1| = {defect:.3e}")
        mat.setflags(write=False)
        self._entries = mat

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def apply(self, state: StateVector) -> StateVector:
        """U |psi>."""
        return StateVector(self._entries @ state.components)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


@dataclass(frozen=True)
class TwoLevelParams:
    """Bloch angles of cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.

    theta is restricted to [0, 2*pi] and phi to (-pi, pi].
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("angles must be finite")
        if not 0.0 <= self.theta <= 2.0 * math.pi:
            raise ValueError(f"theta must lie in [0, 2*pi], got {self.theta}")
        if not -math.pi < self.phi <= math.pi:
            raise ValueError(f"phi must lie in (-pi, pi], got {self.phi}")


class TwoLevelKind(enum.Enum):
    """Which observable the closed-form two-level chain phase refers to."""

    SWAP_X = "x"
    HADAMARD = "hadamard"


@dataclass(frozen=True)
class CycleResult:
    """Outcome of one short-time projective-measurement cycle.

    Attributes
    ----------
    amplitude : complex
        The raw three-step transition amplitude.
    extracted_phase : float
        Arg(amplitude) with the kinematic (-i epsilon)^3 factor removed,
        wrapped to (-pi, pi].
    epsilon : float
        The time step per projection.
    """

    amplitude: complex
    extracted_phase: float
    epsilon: float


def evolve(H: Observable, t: float) -> UnitaryMatrix:
    """Propagator exp(-i t H) of a Hermitian generator, via eigendecomposition.

    The spectral form keeps the result unitary to roundoff for any t, unlike
    a truncated series.
    """
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    w, q = np.linalg.eigh(H.entries)
    return UnitaryMatrix((q * np.exp(-1j * t * w)) @ q.conj().T)


def projective_cycle_amplitude(
    H: Observable,
    basis: Sequence[StateVector],
    epsilon: float,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> CycleResult:
    """Amplitude of the cycle b0 -> b1 -> b2 -> b0 under exp(-i epsilon H) steps.

    amplitude = <b0|U|b2><b2|U|b1><b1|U|b0> with U = evolve(H, epsilon).
    For small epsilon each off-diagonal factor is -i*epsilon*<.|H|.> to
    leading order, so extracted_phase = wrap(Arg(amplitude) + 3*pi/2) tends
    to Arg(<b0|H|b2><b2|H|b1><b1|H|b0>) linearly in epsilon.

    Raises
    ------
    NonOrthogonalBasis
        If the three states fail the orthonormality check.
    UndefinedPhase
        If any of the three H links vanishes; the limit phase then does not
        exist.
    """
    if len(basis) != 3:
        raise ValueError(f"cycle needs exactly 3 basis states, got {len(basis)}")
    if epsilon <= 0.0 or not math.isfinite(epsilon):
        raise ValueError(f"epsilon must be positive and finite, got {epsilon}")
    stack = np.stack([b.components for b in basis])
    if stack.shape[1] != H.dim:
        raise ValueError(f"basis dim {stack.shape[1]} does not match H dim {H.dim}")
    gram_defect = np.abs(stack.conj() @ stack.T - np.eye(3)).max()
    if gram_defect > tol.tol_herm:
        raise NonOrthogonalBasis(
            f"basis is not orthonormal: max |<b_a|b_b> - delta_ab| = {gram_defect:.3e}"
        )
    links = ((1, 0), (2, 1), (0, 2))
    for a, b in links:
        amp = complex(np.vdot(stack[a], H.entries @ stack[b]))
        if abs(amp) <= tol.tol_zero:
            raise UndefinedPhase(
                f"cycle phase undefined: |<b{a}|H|b{b}>| = {abs(amp):.3e} <= tol_zero"
            )
    u = evolve(H, epsilon).entries
    amplitude = complex(
        np.vdot(stack[0], u @ stack[2])
        * np.vdot(stack[2], u @ stack[1])
        * np.vdot(stack[1], u @ stack[0])
    )
    extracted = wrap_angle(principal_arg(amplitude) + 1.5 * math.pi)
    return CycleResult(amplitude, extracted, epsilon)


def two_level_state(p: TwoLevelParams) -> StateVector:
    """The Bloch state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    half = 0.5 * p.theta
    return StateVector([math.cos(half), math.sin(half) * complex(math.cos(p.phi), math.sin(p.phi))])


def pauli_x() -> Observable:
    """The two-level observable that swaps the basis states."""
    return Observable([[0.0, 1.0], [1.0, 0.0]])


def hadamard() -> Observable:
    """The two-level Hadamard observable (X + Z)/sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return Observable([[r, r], [r, -r]])


def two_level_phase(
    kind: TwoLevelKind | str,
    p: TwoLevelParams,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> float:
    """Closed-form chain phase of (|0>, |Psi(theta,phi)>, |1>) for X or Hadamard.

    For X the cyclic product is e^{i phi} sin(theta)/2, so the phase is
    wrap(phi) on theta in (0, pi) and wrap(pi + phi) on (pi, 2*pi). For the
    Hadamard the product is (cos(theta) + i sin(theta) sin(phi))/(2 sqrt 2),
    so the phase is atan2(sin(theta) sin(phi), cos(theta)); this two-argument
    form stays correct where the single-argument arctan(tan(theta) sin(phi))
    loses the cos(theta) < 0 branch.

    Raises
    ------
    UndefinedPhase
        Where the product modulus vanishes: theta in {0, pi, 2*pi} for X;
        cos(theta) = 0 together with sin(theta) sin(phi) = 0 for Hadamard.
    """
    kind = TwoLevelKind(kind.lower()) if isinstance(kind, str) else kind
    if kind is TwoLevelKind.SWAP_X:
        modulus = 0.5 * abs(math.sin(p.theta))
        if modulus <= tol.tol_zero:
            raise UndefinedPhase(
                f"swap chain modulus |sin(theta)|/2 = {modulus:.3e} vanishes at theta = {p.theta}"
            )
        return wrap_angle(p.phi if p.theta < math.pi else math.pi + p.phi)
    re = math.cos(p.theta)
    im = math.sin(p.theta) * math.sin(p.phi)
    modulus = math.hypot(re, im) / (2.0 * math.sqrt(2.0))
    if modulus <= tol.tol_zero:
        raise UndefinedPhase(
            f"hadamard chain modulus = {modulus:.3e} vanishes at "
            f"theta = {p.theta}, phi = {p.phi}"
        )
    return math.atan2(im, re)


# Series cutoff for exponential divided differences: below this node-cluster
# diameter the downward recursion loses digits to cancellation, above it the
# shifted Taylor series converges slowly. 0.05 keeps both branches < 1e-13.
_CLUSTER_DIAMETER = 0.05
_SERIES_TERMS = 30


def _cluster_series(nodes: np.ndarray) -> complex:
    """Divided difference of exp over a tight node cluster.

    Shifts to the centroid c and sums exp(c) * sum_m h_m(d) / (m + n)! where
    h_m are complete homogeneous symmetric polynomials of the shifts d.
    """
    n = nodes.shape[0] - 1
    center = complex(nodes.mean())
    shifts = nodes - center
    h = np.zeros(_SERIES_TERMS, dtype=np.complex128)
    h[0] = 1.0
    for x in shifts:
        for m in range(1, _SERIES_TERMS):
            h[m] += x * h[m - 1]
    acc = 0.0j
    for m in range(_SERIES_TERMS - 1, -1, -1):
        acc += h[m] / math.factorial(m + n)
    return complex(np.exp(center)) * acc


def _exp_divided_difference(nodes: np.ndarray) -> complex:
    """Divided difference of exp over nodes sorted along the imaginary axis.

    Dynamic program over node intervals: tight intervals use the shifted
    series, wide ones the standard recursion, whose divisor is then large
    enough that the subtraction is benign.
    """
    count = nodes.shape[0]
    table = {(i, i): complex(np.exp(nodes[i])) for i in range(count)}
    for span in range(1, count):
        for i in range(count - span):
            j = i + span
            width = abs(nodes[j] - nodes[i])
            if width <= _CLUSTER_DIAMETER:
                table[(i, j)] = _cluster_series(nodes[i : j + 1])
            else:
                table[(i, j)] = (table[(i + 1, j)] - table[(i, j - 1)]) / (
                    nodes[j] - nodes[i]
                )
    return table[(0, count - 1)]


def _ordered_exponential_integral(freqs: Sequence[float], t: float) -> complex:
    """Nested integral of exp(i w_1 s_1) ... exp(i w_k s_k) over t > s_1 > ... > s_k > 0.

    Equals t^k times the divided difference of exp over the nodes
    {0, i B_1 t, ..., i B_k t} with B_j the partial sums of the frequencies.
    """
    if t == 0.0:
        return 0.0j
    partial = [0.0]
    for w in freqs:
        partial.append(partial[-1] + w)
    nodes = 1j * np.asarray(partial, dtype=np.float64) * t
    nodes = nodes[np.argsort(nodes.imag)]
    return t ** len(freqs) * _exp_divided_difference(nodes)


def f_mn(w1: float, w2: float, w3: float, t: float) -> complex:
    """Third-order ordered time integral of three oscillating factors.

    Returns the nested integral over t >= s1 >= s2 >= s3 >= 0 of
    exp(i w1 s1) exp(i w2 s2) exp(i w3 s3). Every frequency-coincidence
    pattern is a removable singularity of the naive antiderivative; the
    divided-difference evaluation is uniformly accurate across them.
    """
    for name, v in (("w1", w1), ("w2", w2), ("w3", w3), ("t", t)):
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v}")
    return _ordered_exponential_integral((w1, w2, w3), t)


def survival_amplitude(
    H0: Observable,
    V: Observable,
    i: int,
    t: float,
    order: int = 3,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> complex:
    """Interaction-picture amplitude to remain in unperturbed level i.

    Sums the time-ordered series for <i|U_I(t, 0)|i> through the requested
    order in V:

    - order 1 adds -i t V_ii,
    - order 2 adds -sum_m V_im V_mi F2(w_im, w_mi),
    - order 3 adds i sum_{m,n} V_im V_mn V_ni f_mn(w_im, w_mn, w_ni, t),

    with w_pq the level spacing E_p - E_q and F2 the two-fold analogue of
    f_mn. The truncation error is O((t ||V||)^(order+1)).

    Raises
    ------
    ValueError
        If H0 is not diagonal (its basis defines the levels) or order is
        outside 0..3.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError(f"order must be in 0..3, got {order}")
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    h0 = H0.entries
    off = np.abs(h0 - np.diag(np.diagonal(h0))).max()
    if off > tol.tol_zero:
        raise ValueError(f"H0 must be diagonal; max off-diagonal entry is {off:.3e}")
    if not 0 <= i < H0.dim:
        raise ValueError(f"level index {i} out of range for dim {H0.dim}")
    if V.dim != H0.dim:
        raise ValueError(f"V dim {V.dim} does not match H0 dim {H0.dim}")
    energies = np.real(np.diagonal(h0))
    v = V.entries
    amp = 1.0 + 0.0j
    if order >= 1:
        amp += -1j * t * v[i, i]
    if order >= 2:
        terms = []
        for m in range(H0.dim):
            w_im = energies[i] - energies[m]
            terms.append(-v[i, m] * v[m, i] * _ordered_exponential_integral((w_im, -w_im), t))
        amp += complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
    if order >= 3:
        terms = []
        for m in range(H0.dim):
            w_im = energies[i] - energies[m]
            for n in range(H0.dim):
                w_mn = energies[m] - energies[n]
                w_ni = energies[n] - energies[i]
                terms.append(1j * v[i, m] * v[m, n] * v[n, i] * f_mn(w_im, w_mn, w_ni, t))
        amp += complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
    return amp

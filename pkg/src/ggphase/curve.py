"""Discretized Hilbert-space curves, the (generalized) connection, continuous
phases, null-curve construction, and holonomy loop integrals.

A curve is stored as parameter samples plus one state per sample, never as a
closure, so it can be serialized and replayed. The connection along a curve is
A_O(s) = Im(<psi|O|d_s psi> / <psi|O|psi>), sampled with second-order central
differences (first-order one-sided at the two ends) and integrated with the
trapezoid rule. The continuous phase adds the endpoint term
Arg(<psi(L)|O|psi(0)> / <psi(L)|psi(L)>) to that integral.

Null curves make the phase a pure loop integral: along them the connection
integral alone reproduces the relative phase of the endpoints, so closing an
open curve with one contributes no extra phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import OrthogonalEndpoints, SingularConnection, UndefinedPhase
from .hilbert import (
    DEFAULT_TOLS,
    Observable,
    StateVector,
    ToleranceConfig,
    principal_arg,
    wrap_angle,
)
from .phase import PhaseResult

__all__ = [
    "ParamCurve",
    "ConnectionSamples",
    "connection_samples",
    "curve_phase",
    "geodesic_null_curve",
    "o_null_curve",
    "loop_holonomy",
    "triangle_holonomy",
    "gauge_transform",
    "reparametrize",
]


class ParamCurve:
    """An ordered discretization of a curve of rays.

    Parameters
    ----------
    params : array_like of float
        Strictly increasing parameter samples s_0 < ... < s_{M-1}, M >= 3.
    states : array_like of complex, shape (M, dim)
        One nonzero state per sample.
    """

    __slots__ = ("_params", "_states")

    def __init__(self, params, states, tol: ToleranceConfig = DEFAULT_TOLS):
        p = np.asarray(params, dtype=np.float64)
        s = np.asarray(states, dtype=np.complex128)
        if p.ndim != 1 or s.ndim != 2 or p.shape[0] != s.shape[0]:
            raise ValueError(
                f"params shape {p.shape} and states shape {s.shape} are inconsistent"
            )
        if p.shape[0] < 3:
            raise ValueError(f"curve needs at least 3 samples, got {p.shape[0]}")
        if not np.all(np.isfinite(p)):
            raise ValueError("params contain non-finite entries")
        if not np.all(np.diff(p) > 0.0):
            raise ValueError("params must be strictly increasing")
        if not np.all(np.isfinite(s.view(np.float64))):
            raise ValueError("states contain non-finite entries")
        norms = np.einsum("ld,ld->l", s.conj(), s).real
        if np.any(norms <= tol.tol_zero):
            bad = int(np.argmax(norms <= tol.tol_zero))
            raise ValueError(f"curve state at sample {bad} has vanishing norm")
        p.setflags(write=False)
        s.setflags(write=False)
        self._params = p
        self._states = s

    @classmethod
    def from_states(cls, params, states: Sequence[StateVector]) -> "ParamCurve":
        return cls(params, np.stack([s.components for s in states]))

    @property
    def params(self) -> np.ndarray:
        return self._params

    @property
    def states(self) -> np.ndarray:
        return self._states

    @property
    def sample_count(self) -> int:
        return self._params.shape[0]

    @property
    def dim(self) -> int:
        return self._states.shape[1]

    def state(self, index: int) -> StateVector:
        return StateVector(self._states[index])

    def __repr__(self) -> str:
        return f"ParamCurve(samples={self.sample_count}, dim={self.dim})"


@dataclass(frozen=True)
class ConnectionSamples:
    """Sampled connection values along a curve.

    ``extrapolated`` lists endpoint sample indices whose denominator vanished
    and whose value is therefore a one-sided limit taken from the interior,
    not a direct evaluation.
    """

    params: np.ndarray
    values: np.ndarray
    extrapolated: tuple[int, ...] = ()


def _resolve_obs(O: Observable | None, dim: int) -> np.ndarray:
    if O is None:
        return np.eye(dim, dtype=np.complex128)
    if O.dim != dim:
        raise ValueError(f"observable dim {O.dim} does not match curve dim {dim}")
    return O.entries


def _trapezoid(values: np.ndarray, params: np.ndarray) -> float:
    """Trapezoid rule with a deterministic, correctly rounded accumulation."""
    panels = 0.5 * (values[1:] + values[:-1]) * np.diff(params)
    return math.fsum(panels.tolist())


def connection_samples(
    curve: ParamCurve,
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> ConnectionSamples:
    """Sample A_O(s) = Im(<psi|O|D psi> / <psi|O|psi>) along the curve.

    A vanishing denominator at an interior sample is an error. At an endpoint
    sample only, the value is filled by a one-sided linear extrapolation from
    the two nearest interior samples (the limit exists for the constructed
    null curves, where the interior connection is constant) and the index is
    flagged in the result.

    Raises
    ------
    SingularConnection
        Naming the first interior sample where |<psi|O|psi>| <= tol_zero.
    """
    obs = _resolve_obs(O, curve.dim)
    num, den = _kernels.connection_terms(curve.params, curve.states, obs)
    moduli = np.abs(den)
    singular = moduli <= tol.tol_zero
    m = curve.sample_count
    interior_bad = np.flatnonzero(singular[1 : m - 1])
    if interior_bad.size:
        l = int(interior_bad[0]) + 1
        raise SingularConnection(
            f"connection denominator vanishes at interior sample {l} "
            f"(|<psi|O|psi>| = {moduli[l]:.3e})",
            sample_index=l,
        )
    values = np.empty(m, dtype=np.float64)
    good = ~singular
    values[good] = np.imag(num[good] / den[good])
    extrapolated = []
    for end, first, second in ((0, 1, 2), (m - 1, m - 2, m - 3)):
        if not singular[end]:
            continue
        extrapolated.append(end)
        p = curve.params
        if singular[first]:
            # both ends singular on an M=3 curve: only the middle sample remains
            values[end] = values[second]
        else:
            slope = (values[second] - values[first]) / (p[second] - p[first])
            values[end] = values[first] + slope * (p[end] - p[first])
    values.setflags(write=False)
    return ConnectionSamples(curve.params, values, tuple(sorted(extrapolated)))


def _min_used_modulus(den_moduli: np.ndarray, extrapolated: tuple[int, ...]) -> float:
    if not extrapolated:
        return float(den_moduli.min())
    mask = np.ones(den_moduli.shape[0], dtype=bool)
    mask[list(extrapolated)] = False
    return float(den_moduli[mask].min())


def curve_phase(
    curve: ParamCurve,
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseResult:
    """Continuous geometric phase of an open curve.

    value = wrap(Arg(<psi(L)|O|psi(0)> / <psi(L)|psi(L)>) + integral of A_O).
    For dense sampling with O = None this converges to the chain phase over
    the same samples plus the closing link.

    Raises
    ------
    UndefinedPhase
        If the endpoint link amplitude vanishes.
    SingularConnection
        Propagated from the connection sampling.
    """
    obs = _resolve_obs(O, curve.dim)
    last = curve.states[-1]
    endpoint_amp = complex(np.vdot(last, obs @ curve.states[0]))
    if abs(endpoint_amp) <= tol.tol_zero:
        raise UndefinedPhase(
            f"curve phase undefined: endpoint link |<psi(L)|O|psi(0)>| = "
            f"{abs(endpoint_amp):.3e} <= tol_zero"
        )
    endpoint_arg = principal_arg(endpoint_amp / np.vdot(last, last).real)
    samples = connection_samples(curve, O, tol=tol)
    integral = _trapezoid(samples.values, samples.params)
    _, den = _kernels.connection_terms(curve.params, curve.states, obs)
    min_mod = min(abs(endpoint_amp), _min_used_modulus(np.abs(den), samples.extrapolated))
    return PhaseResult(wrap_angle(endpoint_arg + integral), min_mod, curve.sample_count)


def geodesic_null_curve(
    A: StateVector,
    B: StateVector,
    tau: float = 1.0,
    M: int = 1001,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> ParamCurve:
    """The great-circle null curve between two unit states.

    With theta = Arg<A|B>, the construction is
    eps(x) = (e^{i theta x/tau} / sin tau) (sin(tau - x) A + e^{-i theta} sin(x) B),
    which starts at A, ends at B, and carries zero total phase: the identity
    connection integral along it equals Arg<A|B> and cancels the endpoint
    term exactly.

    Parameters
    ----------
    A, B : StateVector
        Unit-normalized endpoints.
    tau : float
        Parameter length, in (0, pi) so sin(tau) != 0.
    M : int
        Number of uniform samples, >= 3.

    Raises
    ------
    OrthogonalEndpoints
        If |<B|A>| <= tol_zero: no geodesic phase reference exists.
    """
    if not 0.0 < tau < math.pi:
        raise ValueError(f"tau must lie in (0, pi), got {tau}")
    if M < 3:
        raise ValueError(f"M must be >= 3, got {M}")
    for name, s in (("A", A), ("B", B)):
        if abs(s.norm_sq - 1.0) > 1e-9:
            raise ValueError(f"{name} must be unit-normalized (norm^2 = {s.norm_sq:.12f})")
    overlap = complex(np.vdot(A.components, B.components))
    if abs(overlap) <= tol.tol_zero:
        raise OrthogonalEndpoints("geodesic undefined between orthogonal states")
    theta = principal_arg(overlap)
    x = np.linspace(0.0, tau, M)
    gauge = np.exp(1j * theta * x / tau)[:, None]
    states = (
        gauge
        * (
            np.sin(tau - x)[:, None] * A.components[None, :]
            + np.exp(-1j * theta) * np.sin(x)[:, None] * B.components[None, :]
        )
        / math.sin(tau)
    )
    return ParamCurve(x, states, tol=tol)


def o_null_curve(
    A: StateVector,
    B: StateVector,
    O: Observable | None = None,
    tau: float = 1.0,
    M: int = 1001,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> ParamCurve:
    """The straight-line O null curve between two states.

    With theta = Arg(<B|O|A> / <B|B>), the construction is
    n(x) = e^{-i theta x/tau} ((1 - x/tau) A + (x/tau) e^{i theta} B).
    Along it the generalized connection is constant, its integral equals
    Arg(<A|O|B> / <B|B>), and curve_phase(result, O) vanishes up to
    discretization error.

    The denominator <n|O|n> may vanish exactly at the endpoints when A and B
    are orthogonal (it stays bounded away from zero in the interior for
    positive-definite O); that case is permitted and handled downstream by
    one-sided limits. A vanishing interior denominator is an error.

    Raises
    ------
    UndefinedPhase
        If |<A|O|B>| <= tol_zero.
    SingularConnection
        If the interpolation passes through an interior zero of <n|O|n>,
        either at a sample or as a sign change between adjacent samples,
        naming the nearest sample.
    """
    if M < 3:
        raise ValueError(f"M must be >= 3, got {M}")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if A.dim != B.dim:
        raise ValueError(f"state dims differ: {A.dim} vs {B.dim}")
    obs = _resolve_obs(O, A.dim)
    link = complex(np.vdot(B.components, obs @ A.components))
    if abs(link) <= tol.tol_zero:
        raise UndefinedPhase(
            f"null curve undefined: |<A|O|B>| = {abs(link):.3e} <= tol_zero"
        )
    theta = principal_arg(link / np.vdot(B.components, B.components).real)
    x = np.linspace(0.0, tau, M)
    frac = x / tau
    gauge = np.exp(-1j * theta * x / tau)[:, None]
    states = gauge * (
        (1.0 - frac)[:, None] * A.components[None, :]
        + frac[:, None] * np.exp(1j * theta) * B.components[None, :]
    )
    curve = ParamCurve(x, states, tol=tol)
    den = np.einsum("ld,de,le->l", states.conj(), obs, states).real
    interior_bad = np.flatnonzero(np.abs(den[1 : M - 1]) <= tol.tol_zero)
    if interior_bad.size:
        l = int(interior_bad[0]) + 1
        raise SingularConnection(
            f"<n|O|n> vanishes at interior sample {l} of the null interpolation",
            sample_index=l,
        )
    # a sign change between samples means the interpolation crossed a zero
    # that the grid did not land on; integrating through it would be silent
    # garbage, so report the sample nearest the crossing instead
    crossings = np.flatnonzero(den[:-1] * den[1:] < 0.0)
    if crossings.size:
        i = int(crossings[0])
        l = i if abs(den[i]) < abs(den[i + 1]) else i + 1
        raise SingularConnection(
            f"<n|O|n> changes sign between samples {i} and {i + 1} of the null interpolation",
            sample_index=l,
        )
    return curve


def loop_holonomy(
    open_curve: ParamCurve,
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseResult:
    """Holonomy of the loop formed by closing an open curve with an O null curve.

    The closing segment runs from the final state back to the initial one; it
    contributes exactly the endpoint term of the open curve, so the loop
    integral of the connection equals curve_phase(open_curve, O).

    Raises
    ------
    UndefinedPhase, SingularConnection
        Propagated from the closing-curve construction or the sampling.
    """
    closing = o_null_curve(
        StateVector(open_curve.states[-1]),
        StateVector(open_curve.states[0]),
        O,
        tau=1.0,
        M=open_curve.sample_count,
        tol=tol,
    )
    open_samples = connection_samples(open_curve, O, tol=tol)
    closing_samples = connection_samples(closing, O, tol=tol)
    value = wrap_angle(
        _trapezoid(open_samples.values, open_samples.params)
        + _trapezoid(closing_samples.values, closing_samples.params)
    )
    obs = _resolve_obs(O, open_curve.dim)
    moduli = []
    for crv, smp in ((open_curve, open_samples), (closing, closing_samples)):
        _, den = _kernels.connection_terms(crv.params, crv.states, obs)
        moduli.append(_min_used_modulus(np.abs(den), smp.extrapolated))
    return PhaseResult(value, min(moduli), open_curve.sample_count + closing.sample_count)


def triangle_holonomy(
    psi1: StateVector,
    psi2: StateVector,
    psi3: StateVector,
    O: Observable | None = None,
    M: int = 1001,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseResult:
    """Holonomy of the geodesic triangle of O null curves through three states.

    The sum of the three connection integrals along the null segments
    psi1 -> psi2 -> psi3 -> psi1 equals the three-state chain phase.
    """
    vertices = (psi1, psi2, psi3)
    total = 0.0
    min_mod = math.inf
    obs = _resolve_obs(O, psi1.dim)
    for a in range(3):
        segment = o_null_curve(vertices[a], vertices[(a + 1) % 3], O, tau=1.0, M=M, tol=tol)
        samples = connection_samples(segment, O, tol=tol)
        total += _trapezoid(samples.values, samples.params)
        _, den = _kernels.connection_terms(segment.params, segment.states, obs)
        min_mod = min(min_mod, _min_used_modulus(np.abs(den), samples.extrapolated))
    return PhaseResult(wrap_angle(total), min_mod, 3 * M)


def gauge_transform(curve: ParamCurve, offsets) -> ParamCurve:
    """Re-phase each sample: states[l] -> e^{i lambda_l} states[l]."""
    lam = np.asarray(offsets, dtype=np.float64)
    if lam.shape != (curve.sample_count,):
        raise ValueError(
            f"offsets length {lam.shape} does not match sample count {curve.sample_count}"
        )
    if not np.all(np.isfinite(lam)):
        raise ValueError("offsets contain non-finite entries")
    return ParamCurve(curve.params, np.exp(1j * lam)[:, None] * curve.states)


def reparametrize(curve: ParamCurve, new_params) -> ParamCurve:
    """Replace the parameter grid, keeping the states; phases are invariant in the continuum."""
    p = np.asarray(new_params, dtype=np.float64)
    if p.shape != (curve.sample_count,):
        raise ValueError(
            f"new_params length {p.shape} does not match sample count {curve.sample_count}"
        )
    return ParamCurve(p, curve.states)

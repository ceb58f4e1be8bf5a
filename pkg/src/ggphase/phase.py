"""Discrete geometric phases: cyclic chains, the density-matrix trace form,
and the weak-value decomposition.

The central quantity is the phase of the cyclic product of matrix elements
<psi_1|O|psi_2><psi_2|O|psi_3>...<psi_N|O|psi_1>. With O = None (identity) it
is the usual N-state Pancharatnam phase; for general Hermitian O it is the
operator-generalized phase. Normalization denominators are real positive and
never shift the Arg, so states may be unnormalized throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import IdentityNotApplicable, UndefinedPhase
from .hilbert import (
    DEFAULT_TOLS,
    DensityMatrix,
    Observable,
    StateVector,
    ToleranceConfig,
    principal_arg,
    relative_phase,
    weak_value,
    wrap_angle,
)

__all__ = [
    "PhaseResult",
    "generalized_phase_chain",
    "bargmann_density_phase",
    "phase_via_weak_values",
    "in_phase",
]


@dataclass(frozen=True)
class PhaseResult:
    """A phase value plus the diagnostics guarding its definedness.

    Attributes
    ----------
    value : float
        The phase, in (-pi, pi].
    min_link_modulus : float
        Smallest |amplitude| encountered while accumulating the phase.
    chain_length : int
        Number of states (or curve samples) that produced the value.
    """

    value: float
    min_link_modulus: float
    chain_length: int


def _state_stack(states: Sequence[StateVector]) -> np.ndarray:
    if len(states) == 0:
        raise ValueError("empty state sequence")
    dim = states[0].dim
    for s in states:
        if s.dim != dim:
            raise ValueError("states must share one dimension")
    return np.stack([s.components for s in states])


def _resolve_obs(O: Observable | None, dim: int) -> np.ndarray:
    if O is None:
        return np.eye(dim, dtype=np.complex128)
    if O.dim != dim:
        raise ValueError(f"observable dim {O.dim} does not match state dim {dim}")
    return O.entries


def generalized_phase_chain(
    states: Sequence[StateVector],
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseResult:
    """Cyclic chain phase of N >= 3 states under an observable.

    Accumulates per-link Args and wraps once at the end, which is immune to
    the modulus underflow a literal product would suffer on long chains.

    Parameters
    ----------
    states : sequence of StateVector
        At least three states; the chain closes cyclically.
    O : Observable or None
        None means identity, giving the plain Pancharatnam chain phase.

    Returns
    -------
    PhaseResult

    Raises
    ------
    UndefinedPhase
        Naming the first link whose amplitude modulus is <= tol_zero.
    """
    if len(states) < 3:
        raise ValueError(f"chain needs at least 3 states, got {len(states)}")
    stack = _state_stack(states)
    obs = _resolve_obs(O, stack.shape[1])
    amps = _kernels.chain_link_amplitudes(stack, obs)
    moduli = np.abs(amps)
    small = np.flatnonzero(moduli <= tol.tol_zero)
    if small.size:
        l = int(small[0])
        raise UndefinedPhase(
            f"chain phase undefined: link {l} -> {(l + 1) % len(states)} has "
            f"|amplitude| = {moduli[l]:.3e} <= tol_zero",
            link_index=l,
        )
    value = wrap_angle(math.fsum(np.angle(amps)))
    return PhaseResult(value, float(moduli.min()), len(states))


def bargmann_density_phase(
    states: Sequence[StateVector],
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> PhaseResult:
    """Three-state phase as Arg Tr(rho_1 O rho_2 O rho_3 O).

    Equals :func:`generalized_phase_chain` on the same inputs; computing it
    through density matrices makes the gauge invariance manifest.
    """
    if len(states) != 3:
        raise ValueError(f"density-matrix form takes exactly 3 states, got {len(states)}")
    obs = _resolve_obs(O, states[0].dim)
    prod = np.eye(states[0].dim, dtype=np.complex128)
    for s in states:
        rho = DensityMatrix.from_state(s).entries
        prod = prod @ rho @ obs
    trace = complex(np.trace(prod))
    if abs(trace) <= tol.tol_zero:
        raise UndefinedPhase(
            f"density phase undefined: |trace| = {abs(trace):.3e} <= tol_zero"
        )
    return PhaseResult(principal_arg(trace), abs(trace), 3)


def phase_via_weak_values(
    states: Sequence[StateVector],
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> float:
    """Three-state O phase reconstructed from weak values.

    Returns wrap(Arg(w_O(1,2) w_O(2,3) w_O(3,1)) + gamma_identity), which
    equals the direct chain phase whenever the decomposition applies.

    Raises
    ------
    IdentityNotApplicable
        If any pairwise inner product vanishes; the decomposition divides
        by all three.
    UndefinedPhase
        Propagated when an O-link vanishes.
    """
    if len(states) != 3:
        raise ValueError(f"weak-value decomposition takes exactly 3 states, got {len(states)}")
    pairs = [(0, 1), (1, 2), (2, 0)]
    ws = []
    for a, b in pairs:
        overlap = np.vdot(states[a].components, states[b].components)
        if abs(overlap) <= tol.tol_zero:
            raise IdentityNotApplicable(
                f"states {a} and {b} are orthogonal; the weak-value identity does not hold"
            )
        ws.append(weak_value(states[a], O, states[b], tol=tol))
    gamma_identity = generalized_phase_chain(states, None, tol=tol).value
    w_product = ws[0] * ws[1] * ws[2]
    if abs(w_product) <= tol.tol_zero:
        raise UndefinedPhase("weak-value product has vanishing modulus")
    return wrap_angle(principal_arg(w_product) + gamma_identity)


def in_phase(
    A: StateVector,
    B: StateVector,
    O: Observable | None = None,
    tol: ToleranceConfig = DEFAULT_TOLS,
) -> bool:
    """True iff the (O) relative phase of A and B vanishes within tol_phase.

    Note the relation is not transitive: A in phase with B and B with C does
    not make A in phase with C.
    """
    return abs(relative_phase(A, B, O, tol=tol)) <= tol.tol_phase

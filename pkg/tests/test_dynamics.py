"""Time evolution, projective cycles, closed two-level forms, Dyson series."""

import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import random_hermitian, rng_for
from ggphase import (
    CycleResult,
    NonOrthogonalBasis,
    Observable,
    StateVector,
    TwoLevelKind,
    TwoLevelParams,
    UndefinedPhase,
    UnitaryMatrix,
    evolve,
    f_mn,
    hadamard,
    pauli_x,
    projective_cycle_amplitude,
    survival_amplitude,
    two_level_phase,
    two_level_state,
    generalized_phase_chain,
    wrap_angle,
    wrapped_distance,
)


def ordered_triple_quad(w1: float, w2: float, w3: float, t: float) -> complex:
    """Adaptive nested quadrature over the ordered simplex 0<t3<t2<t1<t."""

    def inner(t2):
        re = quad(lambda t3: math.cos(w3 * t3), 0.0, t2, epsabs=1e-13, limit=200)[0]
        im = quad(lambda t3: math.sin(w3 * t3), 0.0, t2, epsabs=1e-13, limit=200)[0]
        return complex(re, im)

    def middle(t1):
        re = quad(
            lambda t2: (cmath.exp(1j * w2 * t2) * inner(t2)).real,
            0.0,
            t1,
            epsabs=1e-13,
            limit=200,
        )[0]
        im = quad(
            lambda t2: (cmath.exp(1j * w2 * t2) * inner(t2)).imag,
            0.0,
            t1,
            epsabs=1e-13,
            limit=200,
        )[0]
        return complex(re, im)

    re = quad(lambda t1: (cmath.exp(1j * w1 * t1) * middle(t1)).real, 0.0, t, epsabs=1e-12, limit=200)[0]
    im = quad(lambda t1: (cmath.exp(1j * w1 * t1) * middle(t1)).imag, 0.0, t, epsabs=1e-12, limit=200)[0]
    return complex(re, im)


def exact_survival(H0: Observable, V: Observable, i: int, t: float) -> complex:
    h0 = np.asarray(H0.entries)
    full = h0 + np.asarray(V.entries)
    wf, qf = np.linalg.eigh(full)
    u_full = qf @ np.diag(np.exp(-1j * wf * t)) @ qf.conj().T
    u0_dag = np.diag(np.exp(1j * np.diag(h0) * t))
    return complex((u0_dag @ u_full)[i, i])


class TestUnitaryAndEvolve:
    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            UnitaryMatrix([[1.0, 0.0], [0.0, 2.0]])

    def test_evolve_is_unitary_and_inverts(self):
        rng = rng_for(90)
        h = random_hermitian(rng, 4)
        u = evolve(h, 0.7)
        m = np.asarray(u.entries)
        np.testing.assert_allclose(m.conj().T @ m, np.eye(4), atol=1e-12)
        back = np.asarray(evolve(h, -0.7).entries)
        np.testing.assert_allclose(back @ m, np.eye(4), atol=1e-12)

    def test_eigenstate_picks_up_energy_phase(self):
        h = Observable([[0.3, 0.0], [0.0, -1.1]])
        u = evolve(h, 2.0)
        state = u.apply(StateVector([1.0, 0.0]))
        assert state.components[0] == pytest.approx(cmath.exp(-0.6j), abs=1e-14)

    def test_zero_time_is_identity(self):
        rng = rng_for(91)
        u = evolve(random_hermitian(rng, 3), 0.0)
        np.testing.assert_allclose(np.asarray(u.entries), np.eye(3), atol=1e-15)


class TestProjectiveCycle:
    @staticmethod
    def axes(dim):
        return [StateVector.basis_vector(dim, k) for k in range(3)]

    def test_extracted_phase_converges_to_chain_arg(self):
        rng = rng_for(92)
        h = random_hermitian(rng, 3)
        m = np.asarray(h.entries)
        limit = np.angle(m[0, 2] * m[2, 1] * m[1, 0])
        gaps = []
        for eps in (1e-2, 5e-3, 2.5e-3):
            res = projective_cycle_amplitude(h, self.axes(3), eps)
            gaps.append(wrapped_distance(res.extracted_phase, limit))
        assert gaps[0] / gaps[1] == pytest.approx(2.0, abs=0.3)
        assert gaps[1] / gaps[2] == pytest.approx(2.0, abs=0.3)

    def test_amplitude_magnitude_is_cubic_in_epsilon(self):
        rng = rng_for(93)
        h = random_hermitian(rng, 4)
        a1 = abs(projective_cycle_amplitude(h, self.axes(4), 1e-2).amplitude)
        a2 = abs(projective_cycle_amplitude(h, self.axes(4), 5e-3).amplitude)
        assert a1 / a2 == pytest.approx(8.0, abs=0.8)

    def test_real_cyclic_links_extract_zero(self):
        # every link real positive: the chain Arg is 0 and the extracted
        # phase goes to 0 with epsilon
        h = Observable(
            [[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]]
        )
        res = projective_cycle_amplitude(h, self.axes(3), 1e-3)
        assert abs(res.extracted_phase) < 5e-3

    def test_requires_orthonormal_basis(self):
        rng = rng_for(94)
        h = random_hermitian(rng, 3)
        bad = [
            StateVector([1.0, 0.0, 0.0]),
            StateVector([1.0, 1.0, 0.0]),
            StateVector([0.0, 0.0, 1.0]),
        ]
        with pytest.raises(NonOrthogonalBasis):
            projective_cycle_amplitude(h, bad, 1e-2)

    def test_diagonal_hamiltonian_has_no_cycle(self):
        h = Observable(np.diag([1.0, 2.0, 3.0]))
        with pytest.raises(UndefinedPhase):
            projective_cycle_amplitude(h, self.axes(3), 1e-2)

    def test_result_carries_inputs(self):
        rng = rng_for(95)
        h = random_hermitian(rng, 3)
        res = projective_cycle_amplitude(h, self.axes(3), 2e-3)
        assert isinstance(res, CycleResult)
        assert res.epsilon == 2e-3
        assert res.extracted_phase == wrap_angle(
            cmath.phase(res.amplitude) + 1.5 * math.pi
        )


class TestTwoLevelClosedForms:
    def test_swap_matches_chain_everywhere(self):
        for theta in np.linspace(0.15, 2 * math.pi - 0.15, 17):
            if abs(theta - math.pi) < 0.2:
                continue
            for phi in np.linspace(-3.0, 3.0, 9):
                p = TwoLevelParams(float(theta), float(phi))
                want = generalized_phase_chain(
                    [two_level_state(TwoLevelParams(0.0, 0.0)),
                     two_level_state(p),
                     two_level_state(TwoLevelParams(math.pi, 0.0))],
                    pauli_x(),
                ).value
                assert wrapped_distance(two_level_phase("x", p), want) < 1e-12

    def test_hadamard_matches_chain_everywhere(self):
        obs = hadamard()
        for theta in np.linspace(0.1, 2 * math.pi - 0.1, 15):
            for phi in np.linspace(-3.0, 3.0, 9):
                p = TwoLevelParams(float(theta), float(phi))
                mod = math.hypot(math.cos(theta), math.sin(theta) * math.sin(phi))
                if mod < 1e-3:
                    continue
                want = generalized_phase_chain(
                    [two_level_state(TwoLevelParams(0.0, 0.0)),
                     two_level_state(p),
                     two_level_state(TwoLevelParams(math.pi, 0.0))],
                    obs,
                ).value
                assert wrapped_distance(two_level_phase("hadamard", p), want) < 1e-12

    def test_swap_branch_jump(self):
        phi = 0.7
        upper = two_level_phase("x", TwoLevelParams(1.0, phi))
        lower = two_level_phase("x", TwoLevelParams(math.pi + 1.0, phi))
        assert upper == pytest.approx(phi)
        assert lower == pytest.approx(wrap_angle(math.pi + phi))

    def test_hadamard_two_argument_branch(self):
        # at theta just past pi/2 the single-argument arctan form would fold
        # back; atan2 keeps the second quadrant
        val = two_level_phase("hadamard", TwoLevelParams(2.0, 0.5))
        assert val == pytest.approx(math.atan2(math.sin(2.0) * math.sin(0.5), math.cos(2.0)))
        assert val > math.pi / 2

    def test_swap_undefined_on_poles(self):
        for theta in (0.0, math.pi, 2 * math.pi):
            with pytest.raises(UndefinedPhase):
                two_level_phase("x", TwoLevelParams(theta, 0.3))

    def test_hadamard_undefined_point(self):
        with pytest.raises(UndefinedPhase):
            two_level_phase("hadamard", TwoLevelParams(math.pi / 2, 0.0))
        # cos(theta) = 0 alone is fine when sin(phi) != 0
        assert two_level_phase(
            "hadamard", TwoLevelParams(math.pi / 2, 0.4)
        ) == pytest.approx(math.pi / 2)

    def test_kind_enum_accepted(self):
        p = TwoLevelParams(1.0, 0.2)
        assert two_level_phase(TwoLevelKind.SWAP_X, p) == two_level_phase("x", p)

    def test_params_validated(self):
        with pytest.raises(ValueError):
            TwoLevelParams(-0.1, 0.0)
        with pytest.raises(ValueError):
            TwoLevelParams(1.0, 4.0)


class TestOrderedExponentialIntegral:
    def test_zero_frequencies_closed_form(self):
        assert f_mn(0.0, 0.0, 0.0, 1.3) == pytest.approx(1.3 ** 3 / 6.0, abs=1e-15)

    def test_spec_point_against_quadrature(self):
        got = f_mn(1.0, -0.5, 2.0, 1.3)
        want = ordered_triple_quad(1.0, -0.5, 2.0, 1.3)
        assert abs(got - want) < 1e-9

    @pytest.mark.parametrize(
        "freqs",
        [
            (0.9, 0.9, 0.9),
            (1.0, 1.0 + 1e-9, 1.0 - 1e-9),
            (2.0, -2.0, 0.0),
            (1e-7, -1e-7, 3.0),
            (4.0, 1.7, -2.9),
        ],
    )
    def test_matches_quadrature_including_degenerate(self, freqs):
        for t in (0.4, 1.1):
            got = f_mn(*freqs, t)
            want = ordered_triple_quad(*freqs, t)
            assert abs(got - want) < 1e-11

    def test_negating_frequencies_conjugates(self):
        rng = rng_for(96)
        for _ in range(10):
            w = rng.uniform(-3, 3, size=3)
            t = float(rng.uniform(0.2, 1.5))
            left = f_mn(-w[0], -w[1], -w[2], t)
            right = f_mn(w[0], w[1], w[2], t)
            assert left == pytest.approx(right.conjugate(), abs=1e-13)

    def test_negative_time(self):
        got = f_mn(0.7, -0.3, 1.1, -0.9)
        want = ordered_triple_quad(0.7, -0.3, 1.1, -0.9)
        assert abs(got - want) < 1e-11


class TestSurvivalAmplitude:
    @staticmethod
    def seeded_system(seed, dim):
        rng = rng_for(seed)
        h0 = Observable(np.diag(np.sort(rng.uniform(-2.0, 2.0, size=dim))))
        v = random_hermitian(rng, dim, scale=0.4)
        return h0, v

    def test_order_zero_and_one(self):
        h0, v = self.seeded_system(97, 3)
        assert survival_amplitude(h0, v, 0, 0.5, order=0) == pytest.approx(1.0 + 0.0j)
        got = survival_amplitude(h0, v, 0, 0.5, order=1)
        want = 1.0 - 0.5j * v.entries[0, 0]
        assert got == pytest.approx(want, abs=1e-14)

    def test_third_order_error_scales_sixteenfold(self):
        h0, v = self.seeded_system(98, 4)
        errs = []
        for t in (0.2, 0.1):
            got = survival_amplitude(h0, v, 1, t, order=3)
            errs.append(abs(got - exact_survival(h0, v, 1, t)))
        assert 12.0 <= errs[0] / errs[1] <= 20.0

    def test_second_order_error_scales_eightfold(self):
        h0, v = self.seeded_system(99, 3)
        errs = []
        for t in (0.2, 0.1):
            got = survival_amplitude(h0, v, 0, t, order=2)
            errs.append(abs(got - exact_survival(h0, v, 0, t)))
        assert errs[0] / errs[1] == pytest.approx(8.0, abs=1.5)

    def test_zero_time_is_one(self):
        h0, v = self.seeded_system(100, 3)
        assert survival_amplitude(h0, v, 2, 0.0) == pytest.approx(1.0 + 0.0j)

    def test_requires_diagonal_h0(self):
        rng = rng_for(101)
        h0 = random_hermitian(rng, 3)
        v = random_hermitian(rng, 3)
        with pytest.raises(ValueError):
            survival_amplitude(h0, v, 0, 0.3)

    def test_order_range_checked(self):
        h0, v = self.seeded_system(102, 3)
        with pytest.raises(ValueError):
            survival_amplitude(h0, v, 0, 0.3, order=4)

    def test_level_index_checked(self):
        h0, v = self.seeded_system(103, 3)
        with pytest.raises(ValueError):
            survival_amplitude(h0, v, 5, 0.3)

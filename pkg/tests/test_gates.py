"""Gate composites: controlled-Z bursts, reflections, general targets, cat states."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from corechain import (
    GateProgram,
    HADAMARD,
    Layout,
    PAULI_X,
    PAULI_Z,
    StateVector,
    TargetSpec,
    abc_decompose,
    cat_state_program,
    controlled_reflection_program,
    controlled_unitary_program,
    controlled_z_program,
    execute,
    fidelity_up_to_global_phase,
    mirror_certificate,
    phase_correction,
    phase_gate,
    program_unitary,
    reflection_conjugator,
    zero_phase_profile,
)

import oracles


def run_z(profile, n, x, bits, phi_n=0.0):
    layout = Layout(n, ancilla_count=1)
    program = controlled_z_program(x, layout)
    if phi_n:
        program = GateProgram(
            program.instructions + phase_correction(phi_n, x, layout), layout
        )
    return execute(program, profile, StateVector.basis(layout, bits))


class TestControlledZ:
    def test_two_sites_both_up(self):
        # n = 2, s_x = 1 on the zero-phase pair: sign (-1)^(s_x (n-1)) = -1
        out = run_z(zero_phase_profile(2), 2, 1, "110")
        assert out.amplitudes[0b011] == pytest.approx(-1.0, abs=1e-10)

    def test_control_down_no_phase(self):
        out = run_z(zero_phase_profile(2), 2, 1, "010")
        assert out.amplitudes[0b010] == pytest.approx(1.0, abs=1e-10)

    def test_three_sites_all_up(self):
        # n = 3, s_x = 1, x = 2: (-1)^2 = +1, control lands on the ancilla
        out = run_z(zero_phase_profile(3), 3, 2, "1110")
        assert out.amplitudes[0b1011] == pytest.approx(1.0, abs=1e-10)

    def test_census(self):
        program = controlled_z_program(1, Layout(4, ancilla_count=1))
        assert program.free_evolution_count == 2
        assert program.swap_count == 1

    def test_needs_ancilla(self):
        with pytest.raises(ValueError):
            controlled_z_program(1, Layout(3))

    def test_final_locations(self):
        layout = Layout(3, ancilla_count=1)
        program = controlled_z_program(2, layout)
        locations = program.location_map()
        assert locations[2] == layout.ancilla_position(0)
        assert locations[1] == layout.core_position(1)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_exhaustive_phases_zero_phase_chain(self, n):
        """Bare composite phases are exactly (-1)^(s_x (n-1)) on a phi = 0 chain."""
        profile = zero_phase_profile(n)
        for x in range(1, n + 1):
            for s in range(1 << n):
                bits = format(s, f"0{n}b") + "0"
                out = run_z(profile, n, x, bits)
                s_x = (s >> (n - x)) & 1
                weight = bin(s).count("1")
                target_bits = list(format(s, f"0{n}b"))
                target_bits[x - 1] = "0"
                index = int("".join(target_bits) + str(s_x), 2)
                expected = (-1.0) ** (s_x * (weight - 1))
                assert abs(out.amplitudes[index] - expected) <= 1e-8

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_exhaustive_phases_pi_chain_bare(self, n):
        """Without corrections the pi-phase chain shows e^{-(2n - s_x) i phi}."""
        profile = oracles.mirror_phase_profile(n, phase_pi=True)
        assert abs(abs(mirror_certificate(profile, math.pi).phi_n) - math.pi) < 1e-9
        for x in range(1, n + 1):
            for s in range(1 << n):
                bits = format(s, f"0{n}b") + "0"
                out = run_z(profile, n, x, bits)
                s_x = (s >> (n - x)) & 1
                weight = bin(s).count("1")
                target_bits = list(format(s, f"0{n}b"))
                target_bits[x - 1] = "0"
                index = int("".join(target_bits) + str(s_x), 2)
                expected = np.exp(-1j * (2 * weight - s_x) * math.pi) * (-1.0) ** (
                    s_x * (weight - 1)
                )
                assert abs(out.amplitudes[index] - expected) <= 1e-8

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_exhaustive_phases_pi_chain_corrected(self, n):
        profile = oracles.mirror_phase_profile(n, phase_pi=True)
        for x in range(1, n + 1):
            for s in range(1 << n):
                bits = format(s, f"0{n}b") + "0"
                out = run_z(profile, n, x, bits, phi_n=math.pi)
                s_x = (s >> (n - x)) & 1
                weight = bin(s).count("1")
                target_bits = list(format(s, f"0{n}b"))
                target_bits[x - 1] = "0"
                index = int("".join(target_bits) + str(s_x), 2)
                expected = (-1.0) ** (s_x * (weight - 1))
                assert abs(out.amplitudes[index] - expected) <= 1e-8


class TestPhaseCorrection:
    def test_zero_phase_empty(self):
        assert phase_correction(0.0, 1, Layout(3, ancilla_count=1)) == ()

    def test_corrected_two_site_example(self):
        # pi-phase pair, control up: bare phase -1 is cancelled
        profile = oracles.mirror_phase_profile(2, phase_pi=True)
        out = run_z(profile, 2, 1, "100", phi_n=math.pi)
        assert out.amplitudes[0b001] == pytest.approx(1.0, abs=1e-10)

    def test_gates_all_diagonal(self):
        gates = phase_correction(0.5, 2, Layout(3, ancilla_count=1))
        for gate in gates:
            assert abs(gate.matrix[0, 1]) == 0.0
            assert abs(gate.matrix[1, 0]) == 0.0


class TestReflectionConjugator:
    def test_theta_half_pi_gives_z(self):
        a = reflection_conjugator(math.pi / 2, 0.0)
        assert np.max(np.abs(a @ PAULI_Z @ a.conj().T - PAULI_Z)) <= 1e-12

    def test_x_case(self):
        a = reflection_conjugator(0.0, 0.0)
        assert np.max(np.abs(a @ PAULI_Z @ a.conj().T - PAULI_X)) <= 1e-12

    def test_random_reflections(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            theta, phi = rng.uniform(-math.pi, math.pi, 2)
            v = np.array(
                [
                    [math.sin(theta), np.exp(1j * phi) * math.cos(theta)],
                    [np.exp(-1j * phi) * math.cos(theta), -math.sin(theta)],
                ]
            )
            a = reflection_conjugator(theta, phi)
            assert np.max(np.abs(a @ a.conj().T - np.eye(2))) <= 1e-10
            assert np.max(np.abs(a @ PAULI_Z @ a.conj().T - v)) <= 1e-10


class TestAbcDecompose:
    def test_identity(self):
        a, b, c, alpha = abc_decompose(np.eye(2))
        assert alpha == pytest.approx(0.0)
        for gate in (a, b, c):
            assert_allclose(gate, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize(
        "w", [PAULI_Z, PAULI_X, HADAMARD, phase_gate(math.pi / 4)], ids=["Z", "X", "H", "R45"]
    )
    def test_named_gates(self, w):
        a, b, c, alpha = abc_decompose(w)
        assert np.max(np.abs(a @ b @ c - np.eye(2))) <= 1e-10
        rebuilt = np.exp(1j * alpha) * a @ PAULI_Z @ b @ PAULI_Z @ c
        assert np.max(np.abs(rebuilt - w)) <= 1e-10

    def test_haar_identities(self):
        rng = np.random.default_rng(123)
        for _ in range(1000):
            w = oracles.haar_unitary(rng)
            a, b, c, alpha = abc_decompose(w)
            assert np.max(np.abs(a @ b @ c - np.eye(2))) <= 1e-10
            rebuilt = np.exp(1j * alpha) * a @ PAULI_Z @ b @ PAULI_Z @ c
            assert np.max(np.abs(rebuilt - w)) <= 1e-10

    def test_rejects_nonunitary(self):
        with pytest.raises(ValueError):
            abc_decompose(np.array([[1.0, 0.0], [0.0, 2.0]]))


class TestControlledUnitary:
    def test_identity_targets(self):
        layout = Layout(3, ancilla_count=1)
        program = controlled_unitary_program(
            TargetSpec(1, {2: np.eye(2), 3: np.eye(2)}), layout
        )
        u = program_unitary(program, zero_phase_profile(3))
        assert np.max(np.abs(u - np.eye(16))) <= 1e-8

    def test_flip_targets_basis_action(self):
        layout = Layout(3, ancilla_count=1)
        profile = zero_phase_profile(3)
        program = controlled_unitary_program(TargetSpec(1, {2: PAULI_X, 3: PAULI_X}), layout)
        on = execute(program, profile, StateVector.basis(layout, "1000"))
        assert abs(on.amplitudes[0b1110]) == pytest.approx(1.0, abs=1e-8)
        off = execute(program, profile, StateVector.basis(layout, "0000"))
        assert abs(off.amplitudes[0b0000]) == pytest.approx(1.0, abs=1e-8)

    def test_cost_census_any_size(self):
        for n in range(2, 9):
            layout = Layout(n, ancilla_count=1)
            program = controlled_unitary_program(
                TargetSpec(1, {n: PAULI_X}), layout
            )
            assert program.free_evolution_count == 4
            assert program.swap_count == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_random_targets_match_direct_product(self, n):
        rng = np.random.default_rng(n * 7 + 1)
        profile = zero_phase_profile(n)
        layout = Layout(n, ancilla_count=1)
        dim = 1 << n
        for _ in range(4):
            x = int(rng.integers(1, n + 1))
            targets = {j: oracles.haar_unitary(rng) for j in range(1, n + 1) if j != x}
            program = controlled_unitary_program(TargetSpec(x, targets), layout)
            full = program_unitary(program, profile)
            block = oracles.data_block(full, layout, list(range(n)))
            direct = oracles.controlled_product(n, x, targets)
            aligned = oracles.align_global_phase(block, direct)
            assert np.max(np.abs(aligned - direct)) <= 1e-8

    def test_ancilla_restored(self):
        n = 4
        rng = np.random.default_rng(40)
        layout = Layout(n, ancilla_count=1)
        targets = {j: oracles.haar_unitary(rng) for j in (2, 3, 4)}
        program = controlled_unitary_program(TargetSpec(1, targets), layout)
        full = program_unitary(program, zero_phase_profile(n))
        anc = layout.ancilla_position(0)
        for s in range(1 << n):
            column = full[:, s << 1]  # input has ancilla 0
            leak = sum(
                abs(column[i]) ** 2 for i in range(1 << (n + 1)) if (i >> 0) & 1
            )
            assert leak <= 1e-10

    def test_pi_phase_chain_with_corrections(self):
        n = 4
        rng = np.random.default_rng(44)
        profile = oracles.mirror_phase_profile(n, phase_pi=True)
        layout = Layout(n, ancilla_count=1)
        targets = {j: oracles.haar_unitary(rng) for j in (1, 3)}
        program = controlled_unitary_program(TargetSpec(2, targets), layout, phi_n=math.pi)
        full = program_unitary(program, profile)
        block = oracles.data_block(full, layout, list(range(n)))
        direct = oracles.controlled_product(n, 2, targets)
        aligned = oracles.align_global_phase(block, direct)
        assert np.max(np.abs(aligned - direct)) <= 1e-8

    def test_rejects_control_in_targets(self):
        with pytest.raises(ValueError):
            controlled_unitary_program(
                TargetSpec(1, {1: PAULI_X}), Layout(2, ancilla_count=1)
            )


class TestControlledReflection:
    def test_basis_action(self):
        """One composite conjugated by locals applies the reflections when control is up."""
        n = 3
        profile = zero_phase_profile(n)
        layout = Layout(n, ancilla_count=1)
        rng = np.random.default_rng(11)
        angles = {j: (float(rng.uniform(-1, 1)), float(rng.uniform(-3, 3))) for j in (2, 3)}
        program = controlled_reflection_program(1, angles, layout)
        assert program.free_evolution_count == 2

        reflections = {
            j: np.array(
                [
                    [math.sin(t), np.exp(1j * p) * math.cos(t)],
                    [np.exp(-1j * p) * math.cos(t), -math.sin(t)],
                ]
            )
            for j, (t, p) in angles.items()
        }
        relocate = program.location_map()
        for s in range(1 << n):
            state = execute(
                program, profile, StateVector.basis(layout, format(s, f"0{n}b") + "0")
            )
            # oracle: controlled product, then move the control to the ancilla
            direct = oracles.controlled_product(n, 1, reflections)
            base = np.zeros(1 << n, dtype=complex)
            base[s] = 1.0
            logical = direct @ base
            expected = np.zeros(layout.dim, dtype=complex)
            for idx in range(1 << n):
                if abs(logical[idx]) < 1e-14:
                    continue
                bits = [(idx >> (n - 1 - b)) & 1 for b in range(n)]
                phys = [0] * layout.total_qubits
                for site in range(1, n + 1):
                    phys[relocate[site]] = bits[site - 1]
                expected[int("".join(map(str, phys)), 2)] = logical[idx]
            overlap = abs(np.vdot(expected, state.amplitudes))
            assert overlap >= 1.0 - 1e-8


class TestCatState:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_fidelity(self, n):
        program, final = cat_state_program(n)
        layout = program.layout
        ideal = np.zeros(layout.dim, dtype=complex)
        ideal[0] = 1 / math.sqrt(2)
        up_bits = [0] + [1] * (n - 1) + [1]  # site 1 emptied, control on the ancilla
        ideal[int("".join(map(str, up_bits)), 2)] = 1 / math.sqrt(2)
        fidelity = fidelity_up_to_global_phase(StateVector(layout, ideal), final)
        assert fidelity >= 1.0 - 1e-8

    def test_control_down_does_nothing(self):
        program, _ = cat_state_program(3)
        out = execute(program, zero_phase_profile(3), StateVector.zero(program.layout))
        assert abs(out.amplitudes[0]) == pytest.approx(1.0, abs=1e-10)

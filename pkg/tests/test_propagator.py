import numpy as np
import pytest
from scipy.linalg import expm

import pairces as pc
from pairces.core import NEGATIVE, POSITIVE
from pairces.propagator import KineticPhaseTable, momentum_coefficients, propagate_batch

from oracles import dense_hamiltonian


@pytest.fixture(scope="module")
def toy_field(toy_shape):
    c2 = 100.0  # c = 10
    return pc.FieldConfig(
        shape=toy_shape,
        terms=(
            pc.TimeTerm(kind="static_step", amplitude=0.5 * c2),
            pc.TimeTerm(kind="sinusoid", amplitude=0.8 * c2, frequency=1.5 * c2),
        ),
    )


class TestSchedule:
    def test_uniform_with_t0(self):
        sched = pc.Schedule.uniform(t_total=1.0, n_steps=100, n_samples=4)
        assert sched.sample_steps == (0, 25, 50, 75, 100)
        np.testing.assert_allclose(sched.sample_times, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert sched.dt == 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            pc.Schedule(t_total=0.0, n_steps=10, sample_steps=(10,))
        with pytest.raises(ValueError):
            pc.Schedule(t_total=1.0, n_steps=10, sample_steps=(11,))
        with pytest.raises(ValueError):
            pc.Schedule(t_total=1.0, n_steps=10, sample_steps=(5, 2))
        with pytest.raises(ValueError):
            pc.Schedule.uniform(t_total=1.0, n_steps=100, n_samples=7)


class TestKineticTable:
    def test_matches_dense_exponential(self, toy_grid, toy_const):
        # oracle: scipy expm of the 2x2 Hamiltonian, momentum by momentum
        dt = 3e-3
        table = KineticPhaseTable.build(toy_grid, dt, toy_const)
        c = toy_const.c
        for slot in (0, 1, 5, toy_grid.n_points // 2, toy_grid.n_points - 1):
            p = toy_grid.momenta_fft[slot]
            h0 = np.array([[c * c, c * p], [c * p, -c * c]])
            ref = expm(-0.5j * dt * h0)
            got = np.array([[table.e00[slot], table.e01[slot]], [table.e10[slot], table.e11[slot]]])
            np.testing.assert_allclose(got, ref, atol=1e-14)

    def test_unitarity(self, toy_grid, toy_const):
        table = KineticPhaseTable.build(toy_grid, 1e-3, toy_const)
        col_norm = np.abs(table.e00) ** 2 + np.abs(table.e01) ** 2
        cross = table.e00 * np.conj(table.e01) + table.e01 * np.conj(table.e11)
        assert np.max(np.abs(col_norm - 1.0)) <= 1e-13
        assert np.max(np.abs(cross)) <= 1e-13


class TestKineticHalfStep:
    def test_rest_mode_phase(self, toy_grid, toy_const):
        dt = 2e-3
        table = KineticPhaseTable.build(toy_grid, dt, toy_const)
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == POSITIVE and m.k == 0][0]
        phi = pc.transform(pc.mode_wavefunction(mode, toy_grid), "to_momentum")
        out = pc.kinetic_half_step(phi, table)
        expected = phi.values * np.exp(-0.5j * toy_const.c2 * dt)
        np.testing.assert_allclose(out.values, expected, atol=1e-14)

    def test_eigenmode_pure_phase(self, toy_grid, toy_const):
        dt = 2e-3
        table = KineticPhaseTable.build(toy_grid, dt, toy_const)
        for mode in pc.free_modes(toy_grid, toy_const)[::11]:
            phi = pc.transform(pc.mode_wavefunction(mode, toy_grid), "to_momentum")
            out = pc.kinetic_half_step(phi, table)
            expected = phi.values * np.exp(-0.5j * mode.energy * dt)
            np.testing.assert_allclose(out.values, expected, atol=1e-13)

    def test_norm_preserved(self, toy_grid, toy_const):
        rng = np.random.default_rng(0)
        values = rng.standard_normal((2, toy_grid.n_points)) + 1j * rng.standard_normal(
            (2, toy_grid.n_points)
        )
        state = pc.TwoSpinorField(values=values, rep="momentum", grid=toy_grid)
        out = pc.kinetic_half_step(state, KineticPhaseTable.build(toy_grid, 1e-3, toy_const))
        assert abs(out.norm_squared() - state.norm_squared()) <= 1e-13 * state.norm_squared()

    def test_requires_momentum_rep(self, toy_grid, toy_const):
        state = pc.TwoSpinorField(
            values=np.zeros((2, toy_grid.n_points), dtype=complex), rep="position", grid=toy_grid
        )
        with pytest.raises(ValueError):
            pc.kinetic_half_step(state, KineticPhaseTable.build(toy_grid, 1e-3, toy_const))


class TestPotentialStep:
    def test_zero_profile_is_identity(self, toy_grid):
        rng = np.random.default_rng(1)
        values = rng.standard_normal((2, toy_grid.n_points)) + 0j
        state = pc.TwoSpinorField(values=values, rep="position", grid=toy_grid)
        out = pc.potential_step(state, np.zeros(toy_grid.n_points), 0.1)
        np.testing.assert_array_equal(out.values, values)

    def test_constant_profile_global_phase(self, toy_grid):
        rng = np.random.default_rng(2)
        values = rng.standard_normal((2, toy_grid.n_points)) + 0j
        state = pc.TwoSpinorField(values=values, rep="position", grid=toy_grid)
        v, dt = 7.0, 0.05
        out = pc.potential_step(state, np.full(toy_grid.n_points, v), dt)
        np.testing.assert_allclose(out.values, values * np.exp(-1j * v * dt), atol=1e-14)
        assert abs(out.norm_squared() - state.norm_squared()) <= 1e-14 * state.norm_squared()

    def test_length_mismatch(self, toy_grid):
        state = pc.TwoSpinorField(
            values=np.zeros((2, toy_grid.n_points), dtype=complex), rep="position", grid=toy_grid
        )
        with pytest.raises(ValueError):
            pc.potential_step(state, np.zeros(toy_grid.n_points + 2), 0.1)


class TestStrangStep:
    def test_free_field_negative_mode_phase(self, toy_grid, toy_const, toy_shape):
        config = pc.FieldConfig(shape=toy_shape, terms=())
        sched = pc.Schedule(t_total=0.05, n_steps=10, sample_steps=(10,))
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == NEGATIVE and m.k == 3][0]
        state = pc.mode_wavefunction(mode, toy_grid)
        w0 = state.values.copy()
        for m_step in range(10):
            state = pc.strang_step(state, m_step * sched.dt, sched, config, toy_const)
        expected = w0 * np.exp(1j * abs(mode.energy) * sched.t_total)
        np.testing.assert_allclose(state.values, expected, atol=1e-12)
        # no positive-branch overlap develops
        for pos in [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == POSITIVE][::9]:
            overlap = pc.mode_wavefunction(pos, toy_grid).inner(state)
            assert abs(overlap) <= 1e-12

    def test_single_step_third_order_vs_dense_exponential(self, toy_grid, toy_const, toy_field):
        # frozen from the dense-exponential oracle: local error is O(dt^3)
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == NEGATIVE][10]
        w0 = pc.mode_wavefunction(mode, toy_grid)
        errs = []
        for n_steps in (64, 128, 256):
            sched = pc.Schedule(t_total=np.pi / toy_const.c2, n_steps=n_steps, sample_steps=(n_steps,))
            stepped = pc.strang_step(w0, 0.0, sched, toy_field, toy_const)
            h = dense_hamiltonian(toy_grid, toy_field, toy_const, 0.5 * sched.dt)
            ref = (expm(-1j * h * sched.dt) @ w0.values.ravel()).reshape(2, -1)
            errs.append(np.max(np.abs(stepped.values - ref)))
        assert errs[0] <= 1e-6
        orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
        assert all(2.7 <= o <= 3.3 for o in orders), (errs, orders)

    def test_engine_matches_composed_steps(self, toy_const, toy_field):
        grid = pc.build_grid(3.2, 16)
        sched = pc.Schedule(t_total=8e-3, n_steps=8, sample_steps=(0, 3, 8))
        mode = [m for m in pc.free_modes(grid, toy_const) if m.branch == NEGATIVE and m.k == -2][0]

        state = pc.mode_wavefunction(mode, grid)
        reference = {0: state.values.copy()}
        for m_step in range(8):
            state = pc.strang_step(state, m_step * sched.dt, sched, toy_field, toy_const)
            if m_step + 1 in sched.sample_steps:
                reference[m_step + 1] = state.values.copy()

        snaps = pc.evolve(mode, sched, toy_field, grid, toy_const)
        for step, snap in zip(sched.sample_steps, snaps):
            np.testing.assert_allclose(snap.values, reference[step], atol=1e-12)

    def test_time_reversal(self, toy_grid, toy_const, toy_field):
        n_steps, t_total = 32, 4e-3
        sched = pc.Schedule(t_total=t_total, n_steps=n_steps, sample_steps=(n_steps,))
        dt = sched.dt
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == NEGATIVE and m.k == 5][0]
        w0 = pc.mode_wavefunction(mode, toy_grid)

        state = w0
        for m_step in range(n_steps):
            state = pc.strang_step(state, m_step * dt, sched, toy_field, toy_const)

        back_table = KineticPhaseTable.build(toy_grid, -dt, toy_const)
        for m_step in reversed(range(n_steps)):
            profile = pc.potential_profile(toy_field, toy_grid, (m_step + 0.5) * dt)
            phi = pc.kinetic_half_step(pc.transform(state, "to_momentum"), back_table)
            psi = pc.potential_step(pc.transform(phi, "to_position"), profile, -dt)
            phi = pc.kinetic_half_step(pc.transform(psi, "to_momentum"), back_table)
            state = pc.transform(phi, "to_position")
        np.testing.assert_allclose(state.values, w0.values, atol=1e-8)

    def test_norm_drift_long_run(self, toy_const, toy_shape, toy_field):
        grid = pc.build_grid(3.2, 64)
        sched = pc.Schedule(t_total=40 * np.pi / toy_const.c2, n_steps=2000, sample_steps=(2000,))
        modes = [m for m in pc.free_modes(grid, toy_const) if m.branch == NEGATIVE][::16]
        phi = momentum_coefficients(modes, grid)
        phi = propagate_batch(phi, grid, toy_field, sched, toy_const, lambda *a: None)
        norms = np.sum(np.abs(phi) ** 2, axis=(1, 2)) * grid.dz
        assert np.max(np.abs(norms - 1.0)) <= 1e-10


class TestEvolve:
    def test_free_field_snapshots_equal_initial_up_to_phase(self, toy_grid, toy_const, toy_shape):
        config = pc.FieldConfig(shape=toy_shape, terms=())
        sched = pc.Schedule.uniform(t_total=0.02, n_steps=20, n_samples=4)
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == NEGATIVE and m.k == -7][0]
        w0 = pc.mode_wavefunction(mode, toy_grid)
        for t, snap in zip(sched.sample_times, pc.evolve(mode, sched, config, toy_grid, toy_const)):
            expected = w0.values * np.exp(-1j * mode.energy * t)
            np.testing.assert_allclose(snap.values, expected, atol=1e-12)

    def test_initial_snapshot_is_initial_mode(self, toy_grid, toy_const, toy_field):
        sched = pc.Schedule.uniform(t_total=0.01, n_steps=10, n_samples=2)
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == NEGATIVE and m.k == 0][0]
        snaps = pc.evolve(mode, sched, toy_field, toy_grid, toy_const)
        np.testing.assert_allclose(
            snaps[0].values, pc.mode_wavefunction(mode, toy_grid).values, atol=1e-15
        )

    def test_off_grid_mode_rejected(self, toy_grid, toy_const, toy_field):
        sched = pc.Schedule.uniform(t_total=0.01, n_steps=10, n_samples=2)
        bad = pc.FreeMode(k=999, p=0.0, branch=NEGATIVE, energy=-toy_const.c2,
                          spinor=np.array([0, 1], dtype=complex))
        with pytest.raises(ValueError):
            pc.evolve(bad, sched, toy_field, toy_grid, toy_const)

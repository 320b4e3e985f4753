import numpy as np
import pytest

import pairces as pc
from pairces.core import NEGATIVE, POSITIVE, free_energy

from oracles import direct_inner


class TestGrid:
    def test_paper_scale_spacings(self):
        grid = pc.build_grid(2.5, 4096)
        assert grid.dz == pytest.approx(2.5 / 4096)
        assert grid.dp == pytest.approx(2.5132741228718345)
        assert len(grid.z) == len(grid.momenta) == 4096

    def test_momentum_set_small_box(self):
        grid = pc.build_grid(1.0, 8)
        expected = 2.0 * np.pi * np.arange(-4, 4)
        np.testing.assert_allclose(grid.momenta, expected, rtol=0, atol=0)
        assert set(grid.k_values.tolist()) == set(range(-4, 4))

    def test_fft_layout_matches_ascending_layout(self):
        grid = pc.build_grid(3.0, 16)
        for k in grid.k_values:
            assert grid.momenta_fft[grid.fft_index(int(k))] == grid.momenta[int(k) + 8]

    @pytest.mark.parametrize("length,n", [(2.5, 7), (2.5, 4), (0.0, 16), (-1.0, 16), (1.0, 9)])
    def test_invalid_grids_rejected(self, length, n):
        with pytest.raises(ValueError):
            pc.build_grid(length, n)

    def test_momentum_closure_except_nyquist(self):
        grid = pc.build_grid(2.0, 32)
        momenta = set(grid.momenta.tolist())
        for p in grid.momenta:
            if p == grid.momenta[0]:  # Nyquist has no partner
                continue
            assert -p in momenta


class TestFreeModes:
    def test_count_and_ordering(self, toy_grid, toy_const):
        modes = pc.free_modes(toy_grid, toy_const)
        assert len(modes) == 2 * toy_grid.n_points
        branches = [m.branch for m in modes]
        assert branches == [NEGATIVE] * toy_grid.n_points + [POSITIVE] * toy_grid.n_points
        ks = [m.k for m in modes[: toy_grid.n_points]]
        assert ks == sorted(ks)

    def test_rest_modes(self, toy_grid, toy_const):
        modes = {(m.branch, m.k): m for m in pc.free_modes(toy_grid, toy_const)}
        plus = modes[(POSITIVE, 0)]
        minus = modes[(NEGATIVE, 0)]
        assert plus.energy == pytest.approx(toy_const.c2)
        assert minus.energy == pytest.approx(-toy_const.c2)
        np.testing.assert_allclose(plus.spinor, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(minus.spinor, [0.0, 1.0], atol=1e-15)

    def test_momentum_c_closed_form(self):
        # At p = c the positive energy is sqrt(2) c^2 and the (unnormalized)
        # spinor is (c^2 + sqrt(2) c^2, c^2).
        const = pc.Constants(c=10.0)
        from pairces.core import free_spinor

        e = free_energy(const.c, const.c)
        assert e == pytest.approx(np.sqrt(2.0) * const.c2, rel=1e-14)
        u = free_spinor(const.c, POSITIVE, const.c)
        ref = np.array([const.c2 + np.sqrt(2) * const.c2, const.c2])
        ref = ref / np.linalg.norm(ref)
        np.testing.assert_allclose(u, ref, atol=1e-14)

    def test_eigen_residual_all_modes(self, toy_grid, toy_const):
        c = toy_const.c
        for m in pc.free_modes(toy_grid, toy_const):
            h0 = np.array([[c * c, c * m.p], [c * m.p, -c * c]])
            residual = np.linalg.norm(h0 @ m.spinor - m.energy * m.spinor)
            assert residual <= 1e-12 * abs(m.energy)

    def test_branch_spinors_orthogonal(self, toy_grid, toy_const):
        modes = {(m.branch, m.k): m for m in pc.free_modes(toy_grid, toy_const)}
        for k in toy_grid.k_values:
            u = modes[(POSITIVE, int(k))].spinor
            v = modes[(NEGATIVE, int(k))].spinor
            assert abs(np.vdot(u, v)) <= 1e-14

    def test_phase_convention_largest_component_real_positive(self, toy_grid, toy_const):
        for m in pc.free_modes(toy_grid, toy_const):
            i = int(np.argmax(np.abs(m.spinor)))
            assert m.spinor[i].imag == 0.0
            assert m.spinor[i].real > 0.0

    def test_energy_even_in_momentum(self, toy_grid, toy_const):
        modes = {(m.branch, m.k): m for m in pc.free_modes(toy_grid, toy_const)}
        for k in range(1, toy_grid.n_points // 2):
            assert modes[(POSITIVE, k)].energy == modes[(POSITIVE, -k)].energy


class TestModeWavefunction:
    def test_rest_mode_is_constant(self, toy_grid, toy_const):
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == POSITIVE and m.k == 0][0]
        w = pc.mode_wavefunction(mode, toy_grid)
        expected = 1.0 / np.sqrt(toy_grid.length)
        np.testing.assert_allclose(w.values[0], expected, atol=1e-15)
        np.testing.assert_allclose(w.values[1], 0.0, atol=1e-15)

    def test_unit_norms(self, toy_grid, toy_const):
        for m in pc.free_modes(toy_grid, toy_const)[::7]:
            w = pc.mode_wavefunction(m, toy_grid)
            assert abs(w.norm_squared() - 1.0) <= 1e-12

    def test_orthogonality_by_direct_summation(self, toy_grid, toy_const):
        modes = {(m.branch, m.k): m for m in pc.free_modes(toy_grid, toy_const)}
        w0 = pc.mode_wavefunction(modes[(POSITIVE, 0)], toy_grid)
        w1 = pc.mode_wavefunction(modes[(POSITIVE, 1)], toy_grid)
        overlap = direct_inner(w0.values, w1.values, toy_grid.dz)
        assert abs(overlap) <= 1e-12
        # one full complex oscillation across the box
        ratio = w1.values[0, 1:] / w1.values[0, :-1]
        np.testing.assert_allclose(ratio, ratio[0], atol=1e-12)

    def test_off_grid_momentum_rejected(self, toy_grid, toy_const):
        mode = pc.FreeMode(k=toy_grid.n_points, p=0.0, branch=POSITIVE, energy=toy_const.c2,
                           spinor=np.array([1.0, 0.0], dtype=complex))
        with pytest.raises(ValueError):
            pc.mode_wavefunction(mode, toy_grid)

    @pytest.mark.parametrize("n_points", [16, 64])
    def test_completeness_gram_identity(self, toy_const, n_points):
        grid = pc.build_grid(2.0, n_points)
        modes = pc.free_modes(grid, toy_const)
        w = np.array([pc.mode_wavefunction(m, grid).values.ravel() for m in modes])
        gram = (w.conj() @ w.T) * grid.dz
        assert np.max(np.abs(gram - np.eye(len(modes)))) <= 1e-10


class TestTransform:
    def test_round_trip(self, toy_grid):
        rng = np.random.default_rng(3)
        values = rng.standard_normal((2, toy_grid.n_points)) + 1j * rng.standard_normal(
            (2, toy_grid.n_points)
        )
        state = pc.TwoSpinorField(values=values, rep="position", grid=toy_grid)
        back = pc.transform(pc.transform(state, "to_momentum"), "to_position")
        np.testing.assert_allclose(back.values, values, atol=1e-12)

    def test_parseval(self, toy_grid):
        rng = np.random.default_rng(4)
        values = rng.standard_normal((2, toy_grid.n_points)) + 1j * rng.standard_normal(
            (2, toy_grid.n_points)
        )
        state = pc.TwoSpinorField(values=values, rep="position", grid=toy_grid)
        assert pc.transform(state, "to_momentum").norm_squared() == pytest.approx(
            state.norm_squared(), rel=1e-12
        )

    def test_plane_wave_single_coefficient(self, toy_grid, toy_const):
        mode = [m for m in pc.free_modes(toy_grid, toy_const) if m.branch == POSITIVE and m.k == 0][0]
        phi = pc.transform(pc.mode_wavefunction(mode, toy_grid), "to_momentum")
        coeffs = np.abs(phi.values)
        assert coeffs[0, 0] > 1e-3
        coeffs[:, 0] = 0.0
        assert np.max(coeffs) <= 1e-13

    def test_representation_mismatch(self, toy_grid):
        state = pc.TwoSpinorField(
            values=np.zeros((2, toy_grid.n_points), dtype=complex), rep="position", grid=toy_grid
        )
        with pytest.raises(ValueError):
            pc.transform(state, "to_position")
        with pytest.raises(ValueError):
            pc.transform(pc.transform(state, "to_momentum"), "to_momentum")


def test_constants_validation():
    with pytest.raises(ValueError):
        pc.Constants(c=0.0)
    assert pc.Constants().c == pytest.approx(137.035999084)

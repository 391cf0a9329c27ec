import numpy as np
import pytest
from conftest import eig_stable, symplectic_spectrum

import atomoptomech as am
from atomoptomech.entanglement import is_stable
from atomoptomech.params import DerivedCouplings
from atomoptomech.steadystate import SteadyState


def _couplings_zero(g0=0.0):
    return DerivedCouplings(
        g0=g0, g1=0j, g2=0j, g3=0j, delta_a_prime=0.0,
        g_px=0.0, g_py=0.0, g_mu=0.0, g_nu=0.0, g3_mu=0.0, g3_nu=0.0,
        chi=0.0, drive_amp=0.0, delta_a=0.0,
    )


def _vacuum_ss():
    return SteadyState(beta=0j, excitation=0.0, c_s=0j, x_s=0.0, p_s=0.0,
                       residual=0.0, branch_count=1)


class TestBuildDrift:
    def test_decoupled_structure(self, default_params):
        p = default_params.replace(delta=0.7 * default_params.omega_m)
        ds = am.build_drift(p, _couplings_zero(), _vacuum_ss())
        j = ds.j
        np.testing.assert_allclose(j[0], [0, p.omega_m, 0, 0, 0, 0])
        np.testing.assert_allclose(j[1], [-p.omega_m, -p.gamma_m, 0, 0, 0, 0])
        assert j[2, 2] == -p.kappa and j[3, 3] == -p.kappa
        assert j[2, 3] == p.delta and j[3, 2] == -p.delta
        assert j[4, 4] == -p.gamma_a and j[5, 5] == -p.gamma_a
        np.testing.assert_allclose(
            np.diag(ds.d),
            [0, p.gamma_m * (2 * p.n_thermal + 1), p.kappa, p.kappa, p.gamma_a, p.gamma_a],
        )

    def test_real_amplitudes_kill_phase_couplings(self, default_params):
        # real beta and real cavity amplitude leave only the amplitude-type
        # couplings: all imaginary-part-derived entries vanish
        p = default_params
        ss = SteadyState(beta=-0.3 + 0j, excitation=0.09, c_s=500.0 + 0j,
                         x_s=0.0, p_s=0.0, residual=0.0, branch_count=1)
        cpl = am.derive_couplings(p, ss)
        assert cpl.g_py == 0.0
        assert cpl.g3_mu == 0.0
        ds = am.build_drift(p, cpl, ss)
        assert ds.j[2, 0] == 0.0  # -g_py
        assert ds.j[2, 4] == 0.0  # g3_mu

    def test_fig_case_stable_at_upper_detuning(self, default_params):
        p = default_params.replace(delta=1.22 * default_params.omega_m)
        ss = am.fixed_point(p)
        ds = am.build_drift(p, am.derive_couplings(p, ss), ss)
        assert is_stable(ds)
        assert eig_stable(ds.j)

    def test_routh_matches_eig_over_sweep(self, default_params):
        p = default_params
        for rel in np.linspace(0.05, 3.0, 40):
            pp = p.replace(delta=rel * p.omega_m)
            ss = am.fixed_point(pp)
            ds = am.build_drift(pp, am.derive_couplings(pp, ss), ss)
            assert is_stable(ds) == eig_stable(ds.j)

    def test_drift_similar_to_frequency_matrix(self, steady_case1):
        # the quadrature drift and the frequency-domain system matrix encode
        # the same dynamics: identical eigenvalue sets
        p, ss, cpl = steady_case1
        ds = am.build_drift(p, cpl, ss)
        a0 = am.build_matrix(p, cpl, ss, 0.0).a
        m = -a0
        m[4, :] = -m[4, :]  # the position row of the system matrix is sign-flipped
        ev_j = np.linalg.eigvals(ds.j.astype(complex))
        ev_m = list(np.linalg.eigvals(m))
        scale = max(np.max(np.abs(ev_m)), 1.0)
        # compare as multisets: greedy nearest-match
        for lam in ev_j:
            k = int(np.argmin(np.abs(np.array(ev_m) - lam)))
            assert abs(ev_m[k] - lam) <= 1e-8 * scale
            ev_m.pop(k)


class TestSteadyCovariance:
    def test_decoupled_vacuum_blocks(self, default_params):
        p = default_params.replace(
            delta=0.5 * default_params.omega_m, n_thermal=0.0,
            gamma_a=default_params.kappa,
        )
        ds = am.build_drift(p, _couplings_zero(), _vacuum_ss())
        v = am.steady_covariance(ds)
        np.testing.assert_allclose(v[2:, 2:], 0.5 * np.eye(4), atol=1e-10)
        np.testing.assert_allclose(v[:2, :2], 0.5 * np.eye(2), atol=1e-10)

    def test_thermal_mechanical_occupation(self, default_params):
        n = 3.5
        p = default_params.replace(delta=0.5 * default_params.omega_m, n_thermal=n)
        ds = am.build_drift(p, _couplings_zero(), _vacuum_ss())
        v = am.steady_covariance(ds)
        np.testing.assert_allclose(v[0, 0], n + 0.5, rtol=1e-9)
        np.testing.assert_allclose(v[1, 1], n + 0.5, rtol=1e-9)

    def test_unstable_raises(self, default_params):
        p = default_params.replace(delta=0.0, gamma_m=-1.0)  # bypass validate on purpose
        ds = am.build_drift(p, _couplings_zero(), _vacuum_ss())
        with pytest.raises(am.UnstableDrift):
            am.steady_covariance(ds)

    def test_residual_on_fig_case(self, default_params):
        p = default_params.replace(delta=1.22 * default_params.omega_m)
        ss = am.fixed_point(p)
        ds = am.build_drift(p, am.derive_couplings(p, ss), ss)
        v = am.steady_covariance(ds)
        scale = np.max(np.abs(ds.j))
        res = np.max(np.abs(ds.j / scale @ v + v @ ds.j.T / scale + ds.d / scale))
        assert res <= 1e-9 * np.max(np.abs(ds.d / scale))

    def test_frequency_integral_oracle(self, default_params):
        # independent route to the stationary covariance: integrate the
        # noise-response spectral density over frequency, resolving each
        # resonance, and compare with the Lyapunov solution
        p = default_params.replace(delta=1.22 * default_params.omega_m)
        ss = am.fixed_point(p)
        ds = am.build_drift(p, am.derive_couplings(p, ss), ss)
        v_lyap = am.steady_covariance(ds)

        scale = np.max(np.abs(ds.j))
        j = ds.j / scale
        d = ds.d / scale
        pieces = [np.linspace(-3.0, 3.0, 12001)]
        for lam in np.linalg.eigvals(j):
            hw = max(abs(lam.real), 1e-9)
            pieces.append(np.linspace(lam.imag - 60 * hw, lam.imag + 60 * hw, 20001))
        back = np.logspace(np.log10(3.0), 6, 1500)
        pieces += [back, -back]
        w = np.unique(np.concatenate(pieces))

        resolvents = np.linalg.inv(
            1j * w[:, None, None] * np.eye(6) - j[None, :, :]
        )
        integrand = np.einsum(
            "kij,jl,kml->kim", resolvents, d, resolvents.conj()
        ).real
        v_freq = np.trapezoid(integrand, w, axis=0) / (2 * np.pi)

        err = np.max(np.abs(v_lyap - v_freq)) / np.max(np.abs(v_lyap))
        assert err <= 1e-5
        assert am.log_negativity(v_freq).nu == pytest.approx(
            am.log_negativity(v_lyap).nu, rel=1e-5
        )


class TestLogNegativity:
    def test_vacuum_no_entanglement(self):
        r = am.log_negativity(0.5 * np.eye(6))
        assert r.nu == pytest.approx(0.5, abs=1e-12)
        assert r.e_n == 0.0

    def test_two_mode_squeezed_injection(self):
        r = 0.5
        ch, sh = np.cosh(2 * r), np.sinh(2 * r)
        z = np.diag([1.0, -1.0])
        v = 0.5 * np.eye(6)
        v[:4, :4] = 0.5 * np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
        res = am.log_negativity(v)
        # analytic log-negativity for a two-mode squeezed state: 2r
        assert res.e_n == pytest.approx(1.0, rel=1e-10)

    def test_no_radiation_pressure_no_entanglement(self, default_params):
        p = default_params.replace(delta=1.2 * default_params.omega_m)
        ss = am.fixed_point(p)
        cpl = am.derive_couplings(p, ss)
        from dataclasses import replace

        cpl0 = replace(cpl, g_px=0.0, g_py=0.0)
        ds = am.build_drift(p, cpl0, ss)
        v = am.steady_covariance(ds)
        assert am.log_negativity(v).e_n == pytest.approx(0.0, abs=1e-12)

    def test_partial_transpose_side_symmetry(self):
        # flipping the optical momentum instead of the mechanical one gives
        # the same smallest symplectic eigenvalue
        from conftest import random_covariance, symplectic_nu_oracle

        rng = np.random.default_rng(8)
        for _ in range(25):
            v = random_covariance(rng)
            nu_mech = symplectic_nu_oracle(v)
            flip = np.diag([1.0, 1.0, 1.0, -1.0])
            omega2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
            omega = np.block([[omega2, np.zeros((2, 2))], [np.zeros((2, 2)), omega2]])
            vt = flip @ v @ flip
            nu_opt = float(np.min(np.abs(np.linalg.eigvals(1j * omega @ vt))))
            assert nu_mech == pytest.approx(nu_opt, rel=1e-9)
            assert am.symplectic_nu(v) == pytest.approx(nu_mech, abs=1e-9)

    def test_bona_fide_reduced_covariance(self, default_params):
        p = default_params.replace(delta=1.22 * default_params.omega_m)
        ss = am.fixed_point(p)
        ds = am.build_drift(p, am.derive_couplings(p, ss), ss)
        v = am.steady_covariance(ds)
        nus = symplectic_spectrum(v[:4, :4])
        assert np.all(nus >= 0.5 - 1e-9)


class TestDetuningSweep:
    def test_empty_grid(self, default_params):
        assert am.detuning_sweep(default_params, (1.0, 1.0), 25.0, []) == []

    def test_rows_have_detunings_and_flags(self, default_params):
        p = default_params
        grid = np.linspace(0.2, 2.0, 7) * p.omega_m
        rows = am.detuning_sweep(p, (1.0, 1.0), 25.0, grid)
        assert [r.delta_over_omega_m for r in rows] == pytest.approx(list(grid / p.omega_m))
        for r in rows:
            if r.stable:
                assert r.e_n is not None and r.e_n >= 0.0
                assert r.nu is not None
            else:
                assert r.e_n is None and r.nu is None

    def test_entanglement_dies_at_large_detuning(self, default_params):
        p = default_params
        rows = am.detuning_sweep(p, (1.0, 1.0), 25.0, [8.0 * p.omega_m])
        assert rows[0].stable
        assert rows[0].e_n == pytest.approx(0.0, abs=1e-4)

    def test_workers_identical(self, default_params):
        p = default_params
        grid = np.linspace(0.1, 2.5, 11) * p.omega_m
        a = am.detuning_sweep(p, (1.0, 1.0), 25.0, grid, workers=1)
        b = am.detuning_sweep(p, (1.0, 1.0), 25.0, grid, workers=3)
        assert a == b

import numpy as np
import pytest

from mflow.errors import FlowBudgetExceeded, InvariantViolation, SingularLocus
from mflow.flow import FlowConfig, grad_re_det, integrate_flow, vfield
from mflow.matrices import adjugate, haar_special_unitary, traceless


def fd_grad_re_det(A, step=1e-6):
    """Finite-difference oracle for the gradient of Re det.

    Central differences along every real and imaginary coordinate direction;
    the gradient matrix G satisfies Re tr(G H*) = directional derivative, so
    G[k, l] = D_{E_kl} + i D_{iE_kl}.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    G = np.zeros_like(A)
    for k in range(n):
        for l in range(n):
            E = np.zeros_like(A)
            E[k, l] = 1.0
            d_re = (np.linalg.det(A + step * E).real
                    - np.linalg.det(A - step * E).real) / (2 * step)
            d_im = (np.linalg.det(A + 1j * step * E).real
                    - np.linalg.det(A - 1j * step * E).real) / (2 * step)
            G[k, l] = d_re + 1j * d_im
    return G


class TestGradReDet:
    def test_identity_2x2(self):
        assert np.allclose(grad_re_det(np.eye(2)), np.eye(2))
        assert np.allclose(fd_grad_re_det(np.eye(2)), np.eye(2), atol=1e-6)

    def test_real_diagonal_by_hand(self):
        # Re det(diag(x, y)) = x y, so the partials are (y, x).
        x, y = 1.7, -0.4
        assert np.allclose(grad_re_det(np.diag([x, y])), np.diag([y, x]))

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(41)
        for _ in range(4):
            A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            G = grad_re_det(A)
            F = fd_grad_re_det(A)
            assert np.linalg.norm(G - F) < 1e-5 * max(1.0, np.linalg.norm(G))


class TestVfield:
    def test_positive_diagonal_closed_form(self):
        x, y = 1.3, 0.6
        V = vfield(np.diag([x, y]), m=1)
        assert np.allclose(V, -np.diag([y, x]) / (x * x + y * y), atol=1e-14)

    def test_identity_2x2(self):
        assert np.allclose(vfield(np.eye(2), m=1), -np.eye(2) / 2.0)

    def test_unit_rate_directional_derivative(self):
        rng = np.random.default_rng(43)
        for _ in range(3):
            A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            V = vfield(A, m=1)
            eps = 1e-5
            dd = (np.linalg.det(A + eps * V).real
                  - np.linalg.det(A - eps * V).real) / (2 * eps)
            assert abs(dd + 1.0) < 1e-8

    def test_singular_locus_error(self):
        with pytest.raises(SingularLocus):
            vfield(np.zeros((3, 3)), m=1)

    def test_m_requires_nonnegative_det(self):
        A = np.diag([1.0, -2.0])  # Re det = -2
        with pytest.raises(InvariantViolation):
            vfield(A, m=2)

    def test_power_normalization_identity(self):
        # V for det equals the m-normalized field of det^m on the real slice.
        rng = np.random.default_rng(47)
        for m in (2, 3):
            D = np.diag(rng.uniform(0.5, 2.0, size=3))
            k1 = haar_special_unitary(3, rng)
            k2 = haar_special_unitary(3, rng)
            A = k1 @ (D / np.linalg.det(D) ** (1 / 3)) @ k2
            det = np.linalg.det(A)
            g_pow = m * np.conj(det) ** (m - 1) * adjugate(A).conj().T
            gn2 = np.sum(np.abs(g_pow) ** 2)
            v_pow = -g_pow / gn2 * (m * (det.real ** m) ** (1.0 - 1.0 / m))
            assert np.linalg.norm(v_pow - vfield(A, m=1)) < 1e-8


class TestIntegrateFlow:
    def test_sl2_diagonal_paper_endpoint(self):
        traj = integrate_flow(np.diag([2.0, 0.5]))
        expected = np.diag([np.sqrt(3.75), 0.0])
        assert np.linalg.norm(traj.terminal - expected) < 1e-6

    def test_identity_flows_to_zero(self):
        traj = integrate_flow(np.eye(2))
        assert np.max(np.abs(traj.terminal)) < 1e-6

    def test_trajectory_invariants(self):
        traj = integrate_flow(np.diag([2.0, 0.5]))
        ts = traj.times()
        assert ts[0] == 0.0
        assert np.all(np.diff(ts) > 0)
        assert abs(np.linalg.det(traj.terminal)) <= traj.config.det_stop_tol
        assert traj.step_stats.accepted == len(traj.samples) - 1

    def test_decay_law_every_accepted_step(self):
        for m in (1, 2, 3):
            traj = integrate_flow(np.diag([2.0, 0.5]), FlowConfig(m=m))
            tol = 1e-7 if m == 1 else 1e-6
            assert np.max(np.abs(traj.law_residuals())) < tol

    def test_momentum_conserved(self):
        rng = np.random.default_rng(53)
        B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        B = B / np.linalg.det(B) ** (1 / 3)
        traj = integrate_flow(B)
        assert np.max(traj.momentum_drift()) < 1e-6 * np.linalg.norm(B) ** 2

    def test_singular_value_gaps_conserved(self):
        rng = np.random.default_rng(59)
        B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        B = B / np.linalg.det(B) ** (1 / 3)
        traj = integrate_flow(B)
        base = np.linalg.svd(B, compute_uv=False) ** 2
        for _, M in traj.samples:
            s2 = np.linalg.svd(M, compute_uv=False) ** 2
            gaps = np.subtract.outer(s2, s2) - np.subtract.outer(base, base)
            assert np.max(np.abs(gaps)) < 1e-6

    def test_equivariance(self):
        rng = np.random.default_rng(61)
        D = np.diag([2.0, 0.5])
        k1 = haar_special_unitary(2, rng)
        k2 = haar_special_unitary(2, rng)
        traj = integrate_flow(k1 @ D @ k2)
        expected = k1 @ np.diag([np.sqrt(3.75), 0.0]) @ k2
        assert np.linalg.norm(traj.terminal - expected) < 1e-6
        # pointwise along the path, against the diagonal reference flow
        ref = integrate_flow(D)
        for t in np.linspace(0.0, 0.999, 7):
            assert np.linalg.norm(traj.at(t) - k1 @ ref.at(t) @ k2) < 1e-6

    def test_normalizations_share_endpoints(self):
        rng = np.random.default_rng(67)
        B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        B = B / np.linalg.det(B) ** (1 / 3)
        t1 = integrate_flow(B, FlowConfig(m=1))
        t2 = integrate_flow(B, FlowConfig(m=2))
        t3 = integrate_flow(B, FlowConfig(m=3))
        assert np.linalg.norm(t1.terminal - t2.terminal) < 1e-6
        assert np.linalg.norm(t1.terminal - t3.terminal) < 1e-6

    def test_max_steps_budget(self):
        with pytest.raises(FlowBudgetExceeded):
            integrate_flow(np.diag([2.0, 0.5]), FlowConfig(max_steps=3))

    def test_rejects_nonpositive_or_complex_determinant(self):
        with pytest.raises(InvariantViolation):
            integrate_flow(np.diag([1.0, -1.0]))
        with pytest.raises(InvariantViolation):
            integrate_flow(np.diag([1j, 1.0]))

    def test_traceless_momentum_of_start_matches_terminal(self):
        B = np.diag([2.0, 0.5])
        traj = integrate_flow(B)
        mu0 = traceless(B.conj().T @ B)
        mu1 = traceless(traj.terminal.conj().T @ traj.terminal)
        assert np.linalg.norm(mu0 - mu1) < 1e-6

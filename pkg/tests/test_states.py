"""states: GHZ basis, depolarization channels, block-diagonal family,
observables and optimal settings."""

import numpy as np
import pytest

from tribell import qmath, states
from tribell.errors import ValidationError
from tribell.states import (BlockDiagState, NoiseModel, Observable,
                            ghz_basis_state, ghz_basis_vector, ghz_state,
                            settings_from_angles, tau_state)

I2, X, Y, Z = states.I2, states.X, states.Y, states.Z


def _embed_identity_half(reduced, q, n):
    """I/2 at qubit q tensored with `reduced` on the remaining qubits."""
    d = 2 ** n
    out = np.zeros((d, d), dtype=complex)
    kept = [i for i in range(n) if i != q]
    for i in range(d):
        for j in range(d):
            bi = [(i >> (n - 1 - k)) & 1 for k in range(n)]
            bj = [(j >> (n - 1 - k)) & 1 for k in range(n)]
            if bi[q] != bj[q]:
                continue
            ri = sum(bi[k] << (len(kept) - 1 - a) for a, k in enumerate(kept))
            rj = sum(bj[k] << (len(kept) - 1 - a) for a, k in enumerate(kept))
            out[i, j] = 0.5 * reduced[ri, rj]
    return out


def naive_local_depolarize(rho, p, n):
    """Oracle: per qubit, rho -> p*rho + (1-p) * (I/2 (x) tr_qubit(rho))."""
    out = rho.copy()
    for q in range(n):
        keep = [i for i in range(n) if i != q]
        reduced = qmath.partial_trace(out, n, keep)
        out = p * out + (1 - p) * _embed_identity_half(reduced, q, n)
    return out


class TestGhzBasis:
    def test_000_is_ghz(self):
        assert np.allclose(ghz_basis_state(0, 0, 0), ghz_state(3))

    def test_orthonormality_all_pairs(self):
        vs = [ghz_basis_vector(i, j, k)
              for i in (0, 1) for j in (0, 1) for k in (0, 1)]
        for a in range(8):
            for b in range(8):
                ip = np.vdot(vs[a], vs[b])
                assert abs(ip - (1.0 if a == b else 0.0)) < 1e-12

    def test_xxx_eigenrelation(self):
        xxx = qmath.kron_all(X, X, X)
        for i in (0, 1):
            for j in (0, 1):
                for k in (0, 1):
                    v = ghz_basis_vector(i, j, k)
                    assert np.allclose(xxx @ v, (-1.0) ** i * v)

    def test_bad_bits(self):
        with pytest.raises(ValidationError):
            ghz_basis_state(2, 0, 0)


class TestDepolarize:
    def test_local_identity_at_p1(self):
        rho = ghz_state(3)
        assert np.allclose(states.depolarize_local(rho, 1.0, 3), rho)

    def test_local_fully_mixed_at_p0(self):
        rho = ghz_state(3)
        assert np.allclose(states.depolarize_local(rho, 0.0, 3), np.eye(8) / 8)

    def test_local_ghz_correlators(self):
        noisy = states.depolarize_local(ghz_state(3), 0.9, 3)
        xxx = qmath.kron_all(X, X, X)
        zzi = qmath.kron_all(Z, Z, I2)
        assert np.trace(noisy @ xxx).real == pytest.approx(0.729, abs=1e-12)
        assert np.trace(noisy @ zzi).real == pytest.approx(0.81, abs=1e-12)

    def test_local_vs_channel_oracle(self):
        rng = np.random.default_rng(23)
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        for p in (0.0, 0.3, 0.8, 1.0):
            got = states.depolarize_local(rho, p, 3)
            want = naive_local_depolarize(rho, p, 3)
            assert np.allclose(got, want, atol=1e-12)
            assert abs(np.trace(got) - 1.0) < 1e-12

    def test_local_composition(self):
        rho = ghz_state(3)
        a = states.depolarize_local(states.depolarize_local(rho, 0.9, 3), 0.8, 3)
        b = states.depolarize_local(rho, 0.72, 3)
        assert np.allclose(a, b, atol=1e-12)

    def test_global_endpoints(self):
        rho = ghz_state(3)
        assert np.allclose(states.depolarize_global(rho, 1.0), rho)
        assert np.allclose(states.depolarize_global(rho, 0.0), np.eye(8) / 8)

    def test_global_scales_traceless_correlators(self):
        rho = ghz_state(3)
        noisy = states.depolarize_global(rho, 0.8)
        for ops in ([X, X, X], [Z, Z, I2], [X, Y, Y], [Z, I2, Z]):
            op = qmath.kron_all(*ops)
            clean = np.trace(rho @ op).real
            assert np.trace(noisy @ op).real == pytest.approx(0.8 * clean, abs=1e-12)

    def test_p_out_of_range(self):
        with pytest.raises(ValidationError):
            states.depolarize_local(ghz_state(3), 1.2, 3)
        with pytest.raises(ValidationError):
            states.depolarize_global(ghz_state(3), -0.1)
        with pytest.raises(ValidationError):
            NoiseModel("local", 2.0)
        with pytest.raises(ValidationError):
            NoiseModel("thermal", 0.5)


class TestObservable:
    def test_involutions(self):
        for plane in ("xz", "xy"):
            for angle in np.linspace(0, 2 * np.pi, 37):
                m = Observable(plane, angle).matrix
                assert np.max(np.abs(m @ m - I2)) < 1e-12
                assert np.max(np.abs(m - m.conj().T)) < 1e-12

    def test_plane_conventions(self):
        assert np.allclose(Observable("xz", 0.0).matrix, Z)
        assert np.allclose(Observable("xz", np.pi / 2).matrix, X)
        assert np.allclose(Observable("xy", 0.0).matrix, X)
        assert np.allclose(Observable("xy", np.pi / 2).matrix, Y)

    def test_bad_plane(self):
        with pytest.raises(ValidationError):
            Observable("yz", 0.0)


class TestMeasurementSettings:
    def test_combo_matrices_match_angle_formulas(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            a0, a1, b0, b1, c0, c1 = rng.uniform(0, 2 * np.pi, 6)
            s = settings_from_angles(a0, a1, b0, b1, c0, c1)
            combos = s.combo_angles()
            bp, bm = combos["b+"], combos["b-"]
            want_bp = np.cos(bm) * (np.cos(bp) * Z + np.sin(bp) * X)
            want_bm = -np.sin(bm) * (np.sin(bp) * Z - np.cos(bp) * X)
            assert np.max(np.abs(s.b_plus() - want_bp)) < 1e-12
            assert np.max(np.abs(s.b_minus() - want_bm)) < 1e-12
            cp, cm = combos["c+"], combos["c-"]
            want_cp = np.cos(cm) * (np.cos(cp) * Z + np.sin(cp) * X)
            assert np.max(np.abs(s.c_plus() - want_cp)) < 1e-12

    def test_bipartite_has_no_charlie(self):
        s = settings_from_angles(0.0, 1.0, 2.0, 3.0)
        with pytest.raises(ValidationError):
            s.c_plus()


class TestBlockDiagState:
    def test_round_trip_lambda_r(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            rho = rng.dirichlet([0.7] * 8).reshape(2, 2, 2)
            t = rng.uniform(-np.pi / 2, np.pi / 2, size=(2, 2))
            st = BlockDiagState(rho, t)
            back = BlockDiagState.from_lambda_r(st.lambdas, st.r)
            assert np.max(np.abs(back.rho - st.rho)) < 1e-9
            assert np.max(np.abs(back.to_matrix() - st.to_matrix())) < 1e-9

    def test_matrix_is_valid_state_with_block_support(self):
        rng = np.random.default_rng(37)
        izz = qmath.kron_all(I2, Z, Z)
        basis = np.column_stack([ghz_basis_vector(i, j, k)
                                 for i in (0, 1) for j in (0, 1) for k in (0, 1)])
        for _ in range(100):
            st = BlockDiagState(rng.dirichlet([0.5] * 8).reshape(2, 2, 2),
                                rng.uniform(-2, 2, size=(2, 2)))
            m = st.to_matrix()
            assert abs(np.trace(m) - 1.0) < 1e-12
            w, _ = qmath.eig_hermitian(m)
            assert w.min() > -1e-10
            assert np.max(np.abs(m @ izz - izz @ m)) < 1e-12
            # GHZ-basis representation: only diagonal and (0jk)<->(1,~j,~k)
            g = basis.conj().T @ m @ basis
            for a in range(8):
                for b in range(8):
                    ia, ja, ka = a >> 2, (a >> 1) & 1, a & 1
                    ib, jb, kb = b >> 2, (b >> 1) & 1, b & 1
                    allowed = (a == b) or (ia != ib and ja != jb and ka != kb)
                    if not allowed:
                        assert abs(g[a, b]) < 1e-12

    def test_eigen_convention_enforced(self):
        rho = np.zeros((2, 2, 2))
        rho[0, 0, 0] = 0.2
        rho[1, 0, 0] = 0.8
        st = BlockDiagState(rho, np.zeros((2, 2)))
        assert np.all(st.rho[0] >= st.rho[1] - 1e-15)
        # same matrix as the unsorted input
        direct = (0.2 * ghz_basis_state(0, 0, 0)
                  + 0.8 * np.outer(ghz_basis_vector(1, 1, 1),
                                   ghz_basis_vector(1, 1, 1)))
        assert np.max(np.abs(st.to_matrix() - direct)) < 1e-12

    def test_validation(self):
        with pytest.raises(ValidationError):
            BlockDiagState(np.full((2, 2, 2), 0.2), np.zeros((2, 2)))
        bad = np.zeros((2, 2, 2))
        bad[0, 0, 0] = 1.5
        bad[1, 0, 0] = -0.5
        with pytest.raises(ValidationError):
            BlockDiagState(bad, np.zeros((2, 2)))


class TestTauState:
    def test_endpoint_ghz(self):
        assert np.max(np.abs(tau_state(1.0).to_matrix() - ghz_state(3))) < 1e-12

    def test_equal_mixture(self):
        m = tau_state(0.5).to_matrix()
        want = 0.5 * ghz_basis_state(0, 0, 0) + 0.5 * np.outer(
            ghz_basis_vector(1, 0, 0), ghz_basis_vector(1, 0, 0))
        assert np.max(np.abs(m - want)) < 1e-12

    def test_three_quarters(self):
        st = tau_state(0.75)
        w = np.sort(st.eigenvalues())[::-1]
        assert np.allclose(w[:2], [0.75, 0.25])
        assert qmath.von_neumann_entropy(st.to_matrix()) == pytest.approx(
            0.811278, abs=1e-6)

    def test_domain(self):
        with pytest.raises(ValidationError):
            tau_state(0.4)
        with pytest.raises(ValidationError):
            tau_state(1.01)

import numpy as np
import pytest
from math import sqrt
from itertools import combinations_with_replacement

from jastrow1d.ci import (build_fock_basis, build_hamiltonian, ci_ground_state,
                          moshinsky_brackets, solve_spectrum, two_body_tensor)
from jastrow1d.interaction import Interaction, potential_value
from jastrow1d.oscillator import gauss_hermite_rule, hermite_function_table
from jastrow1d.twobody import solve_relative

Q1D = Interaction("quasi1d_coulomb", 0.5, 0.1)


class TestFockBasis:
    def test_three_fermions_four_orbitals(self):
        basis = build_fock_basis(3, 4, "fermions")
        assert basis.states == ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

    def test_three_bosons_four_orbitals(self):
        assert build_fock_basis(3, 4, "bosons").dimension == 20

    def test_single_particle(self):
        assert build_fock_basis(1, 5, "bosons").dimension == 5
        assert build_fock_basis(1, 5, "fermions").dimension == 5

    def test_fermion_orbital_shortage(self):
        with pytest.raises(ValueError):
            build_fock_basis(3, 2, "fermions")

    def test_shell_truncation_caps_total_quanta(self):
        basis = build_fock_basis(2, 4, "bosons", truncation="shell")
        assert all(sum(s) <= 3 for s in basis.states)
        assert basis.dimension == 8

    def test_lexicographic_order(self):
        basis = build_fock_basis(2, 3, "bosons")
        assert basis.states == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class TestMoshinskyBrackets:
    def test_orthogonality(self):
        m = 6
        bk = moshinsky_brackets(m)
        # rows of one shell form an orthogonal transformation
        for shell in range(m):
            pairs = [(a, shell - a) for a in range(shell + 1)]
            mat = np.array([[bk[a, b, kk] for kk in range(shell + 1)] for a, b in pairs])
            assert np.allclose(mat @ mat.T, np.eye(shell + 1), atol=1e-12)

    def test_against_direct_overlap(self):
        # B[a,b;K,n] equals the 2D overlap of chi_a(x1)chi_b(x2) with
        # chi_K((x1+x2)/sqrt2) chi_n((x1-x2)/sqrt2); polynomial integrand so
        # a modest Gauss-Hermite product rule is exact
        m = 5
        bk = moshinsky_brackets(m)
        rule = gauss_hermite_rule(24)
        x = rule.nodes
        wdw = np.exp(rule.deweighted_log())
        xs = x[:, None] + 0 * x[None, :]
        ys = x[None, :] + 0 * x[:, None]
        chi1 = hermite_function_table(2 * m - 1, x)
        chi_sum = hermite_function_table(2 * m - 1, (xs + ys) / np.sqrt(2.0))
        chi_diff = hermite_function_table(2 * m - 1, (xs - ys) / np.sqrt(2.0))
        w2 = wdw[:, None] * wdw[None, :]
        for a in range(m):
            for b in range(m):
                for kk in range(a + b + 1):
                    n = a + b - kk
                    direct = float(np.sum(w2 * np.outer(chi1[a], chi1[b])
                                          * chi_sum[kk] * chi_diff[n]))
                    assert direct == pytest.approx(bk[a, b, kk], abs=1e-12)


class TestTwoBodyTensor:
    def test_none_is_zero(self):
        assert np.all(two_body_tensor(Interaction("none"), 6) == 0.0)

    def test_contact_ground_element(self):
        t = two_body_tensor(Interaction("contact", 1.0), 4)
        assert t[0, 0, 0, 0] == pytest.approx(1.0 / np.sqrt(2.0 * np.pi), abs=1e-12)

    def test_contact_against_orbital_product_integral(self):
        # independent oracle: g * integral chi_a chi_b chi_c chi_d, evaluated
        # exactly by substituting x = u/sqrt2 into a Gauss-Hermite sum
        g = 1.7
        m = 5
        t = two_body_tensor(Interaction("contact", g), m)
        rule = gauss_hermite_rule(48)
        z = rule.nodes / np.sqrt(2.0)
        chi = hermite_function_table(m, z) * np.exp(z * z / 2.0)[None, :]  # polynomial part
        w = rule.weights / np.sqrt(2.0)
        for idx in [(0, 0, 0, 0), (0, 1, 0, 1), (2, 1, 0, 3), (4, 4, 2, 2)]:
            a, b, c, d = idx
            ref = g * float(np.sum(w * chi[a] * chi[b] * chi[c] * chi[d]))
            assert t[idx] == pytest.approx(ref, abs=1e-10)

    def test_quasi1d_against_richardson_trapezoid(self):
        t = two_body_tensor(Q1D, 8)
        vals = {}
        for n2 in (2000, 4000):
            xg = np.linspace(-10.0, 10.0, n2)
            h = xg[1] - xg[0]
            chi0 = hermite_function_table(1, xg)[0]
            v = potential_value(Q1D, xg[:, None] - xg[None, :])
            vals[n2] = float((chi0[:, None] ** 2 * v * chi0[None, :] ** 2).sum() * h * h)
        richardson = vals[4000] + (vals[4000] - vals[2000]) / 3.0
        assert t[0, 0, 0, 0] == pytest.approx(richardson, abs=1e-7)

    def test_symmetries(self):
        t = two_body_tensor(Q1D, 6)
        assert np.max(np.abs(t - t.transpose(1, 0, 3, 2))) < 1e-12  # x <-> y
        assert np.max(np.abs(t - t.transpose(2, 3, 0, 1))) < 1e-12  # bra <-> ket
        idx = np.indices(t.shape).sum(axis=0)
        assert np.max(np.abs(t[idx % 2 == 1])) == 0.0  # parity

    def test_insufficient_rule_rejected(self):
        with pytest.raises(ValueError):
            two_body_tensor(Q1D, 8, gauss_hermite_rule(24))


def _pair_basis_hamiltonian(inter, m, shell=None):
    """Independent N=2 boson construction in the symmetrized product basis."""
    t = two_body_tensor(inter, m)
    states = [s for s in combinations_with_replacement(range(m), 2)
              if shell is None or sum(s) <= shell]
    dim = len(states)
    h = np.zeros((dim, dim))
    for i, (a, b) in enumerate(states):
        for j, (c, d) in enumerate(states):
            if i > j:
                continue
            ob = a + b + 1.0 if (a, b) == (c, d) else 0.0
            na = sqrt(2.0) if a == b else 1.0
            nc = sqrt(2.0) if c == d else 1.0
            tv = (t[a, b, c, d] + t[a, b, d, c] + t[b, a, c, d] + t[b, a, d, c]) / (na * nc * 2.0)
            h[i, j] = h[j, i] = ob + tv
    return h


class TestBuildHamiltonian:
    def test_free_fermions_diagonal(self):
        basis = build_fock_basis(3, 4, "fermions")
        h = build_hamiltonian(basis, np.zeros((4, 4, 4, 4)))
        assert np.allclose(h, np.diag([4.5, 5.5, 6.5, 7.5]), atol=0.0)

    def test_exactly_symmetric(self):
        basis = build_fock_basis(3, 6, "bosons")
        h = build_hamiltonian(basis, two_body_tensor(Q1D, 6))
        assert np.max(np.abs(h - h.T)) == 0.0

    def test_against_independent_pair_construction(self):
        # second-quantized N=2 bosons must match the direct symmetrized
        # product-basis matrix eigenvalue for an interacting case
        for inter in (Q1D, Interaction("contact", 1.0)):
            basis = build_fock_basis(2, 8, "bosons")
            h = build_hamiltonian(basis, two_body_tensor(inter, 8))
            direct = _pair_basis_hamiltonian(inter, 8)
            e1 = np.linalg.eigvalsh(h)[0]
            e2 = np.linalg.eigvalsh(direct)[0]
            assert e1 == pytest.approx(e2, abs=1e-10)

    def test_fermion_antisymmetrized_pair_oracle(self):
        # N=2 fermions vs the antisymmetrized product basis
        inter = Q1D
        m = 8
        t = two_body_tensor(inter, m)
        basis = build_fock_basis(2, m, "fermions")
        h = build_hamiltonian(basis, t)
        states = list(basis.states)
        dim = len(states)
        direct = np.zeros((dim, dim))
        for i, (a, b) in enumerate(states):
            for j, (c, d) in enumerate(states):
                ob = a + b + 1.0 if (a, b) == (c, d) else 0.0
                tv = 0.5 * (t[a, b, c, d] - t[a, b, d, c] - t[b, a, c, d] + t[b, a, d, c])
                direct[i, j] = ob + tv
        assert np.linalg.eigvalsh(h)[0] == pytest.approx(np.linalg.eigvalsh(direct)[0], abs=1e-10)

    def test_two_particle_separability_on_shell_basis(self):
        # complete-shell truncation makes the center-of-mass/relative split
        # exact: CI ground = 0.5 + E_rel with the same orbital budget
        for inter, parity, stats in ((Q1D, "even", "bosons"),
                                     (Interaction("contact", 5.0), "even", "bosons"),
                                     (Interaction("soft_coulomb", 5.0, 0.1), "even", "bosons"),
                                     (Q1D, "odd", "fermions")):
            m = 15
            sol = solve_relative(inter, m, parity)
            basis = build_fock_basis(2, m, stats, truncation="shell")
            h = build_hamiltonian(basis, two_body_tensor(inter, m))
            e0 = np.linalg.eigvalsh(h)[0]
            assert e0 == pytest.approx(0.5 + sol.energy, abs=1e-8)

    def test_orbital_truncation_breaks_separability(self):
        # with plain orbital truncation the partial shells couple the
        # center-of-mass and relative motions at a measurable level
        m = 15
        sol = solve_relative(Interaction("contact", 1.0), m, "even")
        basis = build_fock_basis(2, m, "bosons")
        h = build_hamiltonian(basis, two_body_tensor(Interaction("contact", 1.0), m))
        e0 = np.linalg.eigvalsh(h)[0]
        assert 1e-4 < (0.5 + sol.energy) - e0 < 2e-2


class TestSolveSpectrum:
    def test_free_spectra(self):
        for stats, e0 in (("fermions", 4.5), ("bosons", 1.5)):
            spec = ci_ground_state(Interaction("none"), 3, 8, stats, 3)
            assert spec.energies[0] == pytest.approx(e0, abs=1e-10)
            assert spec.gap == pytest.approx(1.0, abs=1e-10)

    def test_kohn_gap_survives_interaction(self):
        spec = ci_ground_state(Q1D, 3, 15, "bosons", 2)
        assert spec.gap == pytest.approx(1.0, abs=0.02)

    def test_variational_monotonicity_in_orbitals(self):
        e = {m: ci_ground_state(Q1D, 3, m, "bosons", 2).energies[0] for m in (10, 12, 15)}
        assert e[15] <= e[12] <= e[10]

    def test_boson_ground_vector_nodeless(self):
        basis = build_fock_basis(3, 10, "bosons")
        h = build_hamiltonian(basis, two_body_tensor(Q1D, 10))
        _, vec = np.linalg.eigh(h)
        dominant = vec[:, 0][np.abs(vec[:, 0]) > 1e-6]
        assert np.all(dominant > 0) or np.all(dominant < 0)

    def test_k_exceeding_dimension_rejected(self):
        basis = build_fock_basis(3, 4, "fermions")
        h = build_hamiltonian(basis, np.zeros((4, 4, 4, 4)))
        with pytest.raises(ValueError):
            solve_spectrum(h, 10, basis, Interaction("none"))

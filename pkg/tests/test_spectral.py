from fractions import Fraction

import numpy as np
import pytest
import sympy

from nbspectra.errors import PreconditionError
from nbspectra.graph_core import complete, complete_bipartite, cycle, disjoint_union, petal, wheel
from nbspectra.spectral import (build_laplacian, classify_symmetry, eigenpair_sum_zero,
                                eigenspaces, exact_identities, laplacian_eigenpairs,
                                line_graph_rw_spectrum, modulus_envelope,
                                nk_determination_check, p_orthogonality, regular_B_spectrum_match,
                                restricted_singular_min, symmetric_LP_equivalence,
                                zero_multiplicity_check)


def test_K4_entries():
    lap = build_laplacian(complete(4))
    assert lap.size == 12
    L = lap.L
    for i in range(12):
        assert L[i, i] == 1
        for j in range(12):
            if i != j:
                assert L[i, j] in (0, Fraction(-1, 2))
    # T has two 1/2 entries per row
    assert all(sum(1 for j in range(12) if lap.T[i, j]) == 2 for i in range(12))


def test_rejects_degree_one():
    with pytest.raises(PreconditionError):
        build_laplacian(complete_bipartite(1, 3))


def test_identities_on_suite(suite6):
    for g in suite6:
        assert exact_identities(build_laplacian(g)).all_hold


def test_charpoly_against_sympy():
    for g in (complete(4), petal(2, 3), wheel(5)):
        lap = build_laplacian(g)
        M = sympy.Matrix(lap.L.entries())
        x = sympy.symbols("x")
        ref = sympy.Poly(M.charpoly(x).as_expr(), x).all_coeffs()
        assert [Fraction(int(c.p), int(c.q)) for c in ref] == list(lap.charpoly.coeffs)


def test_one_never_two_iff_bipartite(suite6):
    for g in suite6:
        cp = build_laplacian(g).charpoly
        assert cp(1) != 0
        assert (cp(2) == 0) == g.is_bipartite()


def test_zero_multiplicity_counts_components(suite6):
    for g in suite6:
        zm, comps = zero_multiplicity_check(g)
        assert zm == comps
    assert zero_multiplicity_check(disjoint_union(complete(4), complete(4))) == (2, 2)
    # a cycle's NB graph splits into its two orientations
    assert zero_multiplicity_check(cycle(5)) == (2, 2)


def test_spectrum_in_disc(suite6):
    for g in suite6:
        vals = build_laplacian(g).spectrum.values
        assert np.all(np.abs(vals - 1) <= 1 + 1e-9)


def test_eigenfunction_properties(nb_connected6):
    for g in nb_connected6[::3]:
        lap = build_laplacian(g)
        pairs = laplacian_eigenpairs(lap)
        for p in pairs:
            assert p.residual < 1e-8
            if abs(p.value) > 1e-6:
                assert eigenpair_sum_zero(p) < 1e-8
            rep = classify_symmetry(p, lap)
            if abs(p.value.imag) > 1e-6:
                assert abs(rep.p_selfproduct) / np.linalg.norm(p.vector) ** 2 < 1e-8
            if rep.symmetry_class != "neither":
                assert rep.real_value
                assert rep.flow_balance_residual < 1e-6
        po = p_orthogonality(pairs)
        assert po.max_cross < 1e-6 and po.max_self_nonreal < 1e-6


def test_sum_zero_rejects_zero_eigenvalue():
    lap = build_laplacian(complete(4))
    zero = min(laplacian_eigenpairs(lap), key=lambda p: abs(p.value))
    with pytest.raises(PreconditionError):
        eigenpair_sum_zero(zero)


def test_symmetric_eigenvalues_transfer_to_line_graph(suite6):
    for g in suite6[::4]:
        if g.is_connected() and g.is_cycle():
            continue
        rep = symmetric_LP_equivalence(g)
        assert rep.lp_symmetric
        assert rep.max_residual() < 1e-6 and rep.max_spectrum_distance() < 1e-6


def test_line_graph_spectrum_K4():
    # line graph of K4 is the octahedron, 4-regular: eigenvalues 1 - {4,0,0,0,-2,-2}/4
    got = np.sort(line_graph_rw_spectrum(complete(4)))
    assert np.allclose(got, [0, 1, 1, 1, 1.5, 1.5])


@pytest.mark.parametrize("g", [complete(4), complete(5), complete_bipartite(3, 3), petal(2, 3)],
                         ids=["K4", "K5", "K33", "petal23"])
def test_regular_antisymmetric_count(g):
    lap = build_laplacian(g)
    if g.min_degree != g.max_degree:
        with pytest.raises(PreconditionError):
            regular_B_spectrum_match(g)
        return
    d = g.max_degree
    target = 1 - 1 / (d - 1)
    anti = sum(sp.antisymmetric.shape[1] for sp in eigenspaces(lap) if abs(sp.value - target) < 1e-6)
    assert anti == g.m - g.n + 1
    assert regular_B_spectrum_match(g)


def test_eigenspaces_cover_dimension(nb_connected6):
    for g in nb_connected6[::5]:
        spaces = eigenspaces(build_laplacian(g))
        for sp in spaces:
            assert 1 <= sp.geometric <= sp.algebraic
            assert sp.symmetric.shape[1] + sp.antisymmetric.shape[1] <= sp.geometric


def test_nk_determination():
    lap = build_laplacian(petal(2, 3))
    for p in laplacian_eigenpairs(lap):
        for k in (1, 2, 3):
            assert nk_determination_check(p, lap, k) < 1e-8


@pytest.mark.parametrize("a", [0.0, 1.0])
def test_envelope_exact_cases(nb_connected6, a):
    for g in nb_connected6:
        assert modulus_envelope(g, a).holds


def test_restricted_envelope_half(nb_connected6):
    for g in nb_connected6:
        env = modulus_envelope(g, 0.5)
        assert env.restricted_lower_holds and env.upper_holds


def test_literal_envelope_half_counterexample():
    # 1/2 is an eigenvalue of the wheel W6, so the distance is 0 while s_2 > 0
    env = modulus_envelope(wheel(6), 0.5)
    assert env.min_distance < 1e-9 and env.s2 > 0.05 and not env.lower_holds


def test_restricted_equals_s2_at_zero_and_one(nb_connected6):
    for g in nb_connected6[::6]:
        lap = build_laplacian(g)
        for a in (0.0, 1.0):
            env = modulus_envelope(g, a, lap=lap)
            assert abs(restricted_singular_min(lap, a) - env.s2) < 1e-9


def test_envelope_needs_connected_nb():
    with pytest.raises(PreconditionError):
        modulus_envelope(disjoint_union(complete(4), complete(4)))

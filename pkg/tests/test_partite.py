from math import gcd

import numpy as np
import pytest

from nbspectra.errors import CapabilityError, PreconditionError
from nbspectra.graph_core import (complete, complete_bipartite, cycle, disjoint_union,
                                  enumerate_graphs, graphs_by_edges, path, petal,
                                  wheel)
from nbspectra.nb_construct import build_nb
from nbspectra.partite import (BRUTE_FORCE_CAP, brute_force_partite, circular_partite_analysis,
                               circular_partition, digraph_period, nb_k_colorable,
                               roots_of_unity_eigenvalues, roots_of_unity_report)


def divisors(n):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


def test_agrees_with_brute_force():
    seen = 0
    for g in (g for m in range(1, 7) for g in graphs_by_edges(m)):
        feasible = circular_partite_analysis(g).feasible_k
        for k in range(1, 2 * g.m + 1):
            assert (k in feasible) == brute_force_partite(g, k), (g.to_graph6(), k)
        seen += 1
    assert seen == 1 + 2 + 5 + 11 + 26 + 68


def test_brute_force_cap():
    with pytest.raises(CapabilityError):
        brute_force_partite(complete(5), 2)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12])
def test_cycles_are_partite_for_divisors(n):
    assert circular_partite_analysis(cycle(n)).feasible_k == divisors(n)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_paths_take_every_k(m):
    rep = circular_partite_analysis(path(m))
    assert rep.feasible_k == tuple(range(1, 2 * m + 1)) and rep.max_k == 2 * m


@pytest.mark.parametrize("p, k", [(2, 3), (2, 4), (3, 4), (3, 5)])
def test_petals(p, k):
    assert circular_partite_analysis(petal(p, k)).feasible_k == divisors(k)


def test_known_values():
    assert circular_partite_analysis(complete(4)).feasible_k == (1,)
    assert circular_partite_analysis(complete_bipartite(2, 3)).feasible_k == (1, 2, 4)
    assert circular_partite_analysis(wheel(5)).max_k == 1


def test_witnesses_are_valid(suite6):
    for g in suite6:
        rep = circular_partite_analysis(g)
        nb = build_nb(g)
        assert rep.witness.is_valid(nb) and rep.witness.k == rep.max_k
        for k in rep.feasible_k:
            part = circular_partition(g, k)
            assert part.is_valid(nb)
            assert all(part.classes())


def test_two_partite_iff_bipartite(suite6):
    for g in suite6:
        assert (2 in circular_partite_analysis(g).feasible_k) == g.is_bipartite()


def trace_period(nb):
    B = nb.B.astype(np.int64)
    out, Bt = 0, np.eye(nb.size, dtype=np.int64)
    for t in range(1, nb.size + 1):
        Bt = np.minimum(Bt @ B, 1)  # keep entries as reachability flags
        if np.trace(Bt):
            out = gcd(out, t)
    return out


def test_strongly_connected_feasible_set_is_divisors_of_period(nb_connected6):
    for g in nb_connected6:
        nb = build_nb(g)
        period = digraph_period(nb)
        assert period == trace_period(nb)
        assert circular_partite_analysis(g).feasible_k == divisors(period)


def test_period_needs_strong_connectivity():
    with pytest.raises(PreconditionError):
        digraph_period(build_nb(path(2)))


def test_roots_of_unity(suite6):
    for g in suite6:
        for k in circular_partite_analysis(g).feasible_k:
            rep = roots_of_unity_report(g, k)
            assert rep.divides and max(rep.residuals) < 1e-10
    assert roots_of_unity_eigenvalues(petal(2, 3), 3)
    with pytest.raises(PreconditionError):
        roots_of_unity_report(complete(4), 2)


def test_colourable_is_weaker_than_circular():
    # NB(K4) admits a proper 3-colouring, yet K4 is not circularly 3-partite
    nb = build_nb(complete(4))
    assert nb_k_colorable(nb, 3) and not nb_k_colorable(nb, 2)
    assert 3 not in circular_partite_analysis(complete(4)).feasible_k


def test_disconnected_components_shift_independently():
    g = disjoint_union(cycle(3), cycle(4))
    feasible = circular_partite_analysis(g).feasible_k
    assert feasible == (1,)
    # a cycle component still forces k | 4; an extra edge only adds labels
    assert circular_partite_analysis(disjoint_union(cycle(4), path(1))).feasible_k == (1, 2, 4)
    assert circular_partite_analysis(disjoint_union(path(1), path(1))).feasible_k == (1, 2, 3, 4)

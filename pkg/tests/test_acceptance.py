"""One test per acceptance criterion; each records a PASS/FAIL line."""

import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from nbspectra.bounds import (gap_report, gram_formulas_hold, has_cycle_component,
                              independence_numbers, inertia_bounds_check, petal_epsilon,
                              petal_spectrum, s2_identity_minus_L, theorem_upper_bound)
from nbspectra.cospectral import OPERATORS, cospectral_scan
from nbspectra.graph_core import cycle, enumerate_graphs, graphs_by_edges, graphs_on, petal
from nbspectra.linalg import cyclotomic_xk_minus_1, singular_values
from nbspectra.nb_construct import (build_nb, count_min_degree_graphs, nb_fraction,
                                    nb_isomorphism_theorem_check)
from nbspectra.partite import BRUTE_FORCE_CAP, brute_force_partite, circular_partite_analysis
from nbspectra.spectral import (build_laplacian, classify_symmetry, eigenpair_sum_zero,
                                exact_identities, laplacian_eigenpairs, line_graph_rw_spectrum,
                                p_product)

TOL = 1e-8


def test_criterion_1_table(report):
    res = cospectral_scan(7)
    got = {r.label: (r.graphs, tuple(r.counts[op] for op in OPERATORS)) for r in res.rows()}
    want = {"<=6": (76, (0, 2, 0, 0)), "7": (510, (26, 4, 0, 0))}
    ok = got == want
    assert report("1", ok, f"rows {got} (exact)")


def test_criterion_2_petals(report):
    worst_spec = worst_eps = worst_bound = 0.0
    for p, k in [(2, 3), (2, 4), (3, 3), (2, 5)]:
        g = petal(p, k)
        lap = build_laplacian(g)
        num = lap.spectrum.values
        closed = petal_spectrum(p, k).values
        cost = np.abs(num[:, None] - closed[None, :])
        rows, cols = linear_sum_assignment(cost)
        worst_spec = max(worst_spec, cost[rows, cols].max())
        gap = gap_report(g, lap=lap)
        worst_eps = max(worst_eps, abs(gap.epsilon - (2 * p - 1) ** (-1 / k)))
        # sharpness: the bound with max_k = k is (2p-1)^(-(2p-1)/(k(2p-1)))
        assert gap.max_k == k
        worst_bound = max(worst_bound, abs(theorem_upper_bound(g, k) - petal_epsilon(p, k)))
    ok = worst_spec <= TOL and worst_eps <= TOL and worst_bound <= 1e-12
    assert report("2", ok, f"max matched distance {worst_spec:.2e}, |eps - (2p-1)^(-1/k)| {worst_eps:.2e}, "
                           f"|bound - eps| {worst_bound:.2e} (tol 1e-8)")


def test_criterion_3_gap_sweep(report, suite6):
    violations, checked = [], 0
    for g in suite6:
        if has_cycle_component(g):
            continue
        checked += 1
        rep = gap_report(g, TOL)
        if not (rep.lower_ok and rep.upper_ok and rep.chain_ok and rep.E_is_one is not False):
            violations.append(g.to_graph6())
    assert report("3", not violations, f"{checked} graphs, {len(violations)} violations")


def test_criterion_4_exact_identities(report, suite6):
    bad = []
    for g in suite6:
        lap = build_laplacian(g)
        ids = exact_identities(lap)
        cp = lap.charpoly
        checks = [
            ids.transpose_symmetry, ids.row_sums_one, all(gram_formulas_hold(lap)),
            lap.nb.arc_count == sum(d * d for d in g.degrees) - 2 * g.m,
            cp(1) != 0,
            (cp(2) == 0) == g.is_bipartite(),
            cp.zero_multiplicity() == len(lap.nb.weak_components()),
        ]
        if not all(checks):
            bad.append(g.to_graph6())
    assert report("4", not bad, f"{len(suite6)} graphs, {len(bad)} violations (exact)")


def test_criterion_5_eigenfunctions(report, suite6):
    worst = {"sum": 0.0, "selfP": 0.0, "imag": 0.0, "flow": 0.0, "line": 0.0}
    for g in suite6:
        lap = build_laplacian(g)
        line = line_graph_rw_spectrum(g)
        for pair in laplacian_eigenpairs(lap):
            f = pair.vector
            if abs(pair.value) > 1e-6:
                worst["sum"] = max(worst["sum"], eigenpair_sum_zero(pair))
            if abs(pair.value.imag) > 1e-6:
                worst["selfP"] = max(worst["selfP"], abs(p_product(f, f)) / np.linalg.norm(f) ** 2)
            c = classify_symmetry(pair, lap)
            if c.symmetry_class != "neither":
                worst["imag"] = max(worst["imag"], abs(pair.value.imag))
                worst["flow"] = max(worst["flow"], c.flow_balance_residual)
            if c.symmetry_class == "symmetric":
                worst["line"] = max(worst["line"], float(np.min(np.abs(line - pair.value))))
    ok = (worst["sum"] <= 1e-6 and worst["selfP"] <= 1e-6 and worst["imag"] <= TOL
          and worst["flow"] <= 1e-6 and worst["line"] <= TOL)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    assert report("5", ok, f"worst residuals: {detail}")


def test_criterion_6_partite(report, suite6):
    agree = total = 0
    graphs = [g for m in range(1, BRUTE_FORCE_CAP // 2 + 1) for g in graphs_by_edges(m)]
    for g in graphs:
        feasible = circular_partite_analysis(g).feasible_k
        for k in range(1, 2 * g.m + 1):
            total += 1
            agree += (k in feasible) == brute_force_partite(g, k)
    cycles_ok = all(circular_partite_analysis(cycle(n)).feasible_k ==
                    tuple(d for d in range(1, n + 1) if n % d == 0) for n in range(3, 13))
    div_fail = 0
    for g in suite6:
        cp = build_laplacian(g).transition_charpoly
        div_fail += sum(not cp.divisible_by(cyclotomic_xk_minus_1(k))
                        for k in circular_partite_analysis(g).feasible_k)
    ok = agree == total and cycles_ok and div_fail == 0
    assert report("6", ok, f"oracle agreement {agree}/{total} over {len(graphs)} graphs, cycles 3..12 divisors {cycles_ok}, "
                           f"x^k-1 divisibility failures {div_fail}")


def brute_nb_digraphs(n_nodes):
    targets = []
    for n in range(1, n_nodes + 1):
        for g in graphs_on(n, 1):
            if 2 * g.m == n_nodes:
                d = nx.DiGraph()
                d.add_nodes_from(range(n_nodes))
                d.add_edges_from(build_nb(g).arcs())
                targets.append(d)
    pairs = list(itertools.permutations(range(n_nodes), 2))
    hits = 0
    for mask in range(1 << len(pairs)):
        d = nx.DiGraph()
        d.add_nodes_from(range(n_nodes))
        d.add_edges_from(p for b, p in enumerate(pairs) if mask >> b & 1)
        hits += any(nx.is_isomorphic(d, t) for t in targets)
    return hits, len(pairs)


def test_criterion_7_counting(report):
    hits, slots = brute_nb_digraphs(2)
    frac_ok = nb_fraction(2) == Fraction(1, 4) == Fraction(hits, 2 ** slots)
    count_ok = True
    for n in range(5):
        edges = list(itertools.combinations(range(n), 2))
        for m in range(len(edges) + 1):
            brute = sum(len({v for e in es for v in e}) == n for es in itertools.combinations(edges, m))
            count_ok &= count_min_degree_graphs(n, m) == brute
    odd_ok = all(nb_fraction(n) == 0 for n in range(1, 10, 2))
    ok = frac_ok and count_ok and odd_ok
    assert report("7", ok, f"F(2) = {nb_fraction(2)} vs brute {hits}/{2 ** slots}; "
                           f"labelled counts n<=4 {count_ok}; odd N<=9 zero {odd_ok}")


def test_criterion_8_isomorphism(report):
    rng = random.Random(20240601)
    pool = list(enumerate_graphs(6, 1, n_min=2))
    by_degrees = {}
    for g in pool:
        by_degrees.setdefault(tuple(sorted(g.degrees)), []).append(g)
    mates = [v for v in by_degrees.values() if len(v) > 1]

    def shuffled(g):
        perm = list(range(g.n))
        rng.shuffle(perm)
        return g.relabel(perm)

    pairs = []
    for _ in range(100):
        g = rng.choice(pool)
        pairs.append((shuffled(g), shuffled(g)))
    for i in range(100):
        # half share a degree sequence, half are drawn freely
        a, b = rng.sample(rng.choice(mates), 2) if i % 2 else rng.sample(pool, 2)
        pairs.append((shuffled(a), shuffled(b)))
    results = [nb_isomorphism_theorem_check(a, b) for a, b in pairs]
    agree = sum(r.agree for r in results)
    iso = sum(r.iso_graphs for r in results)
    assert report("8", agree == 200, f"{agree}/200 agree ({iso} isomorphic pairs)")


def envelope_violations(suite, a):
    bad = 0
    for g in suite:
        lap = build_laplacian(g)
        sv = singular_values(lap.L.shift(Fraction(a)))
        vals = lap.spectrum.values
        dist = np.abs(vals[np.abs(vals) > 1e-6] - a)
        bad += bool(dist.size and (dist.min() < sv[2] - TOL or dist.max() > sv[len(sv)] + TOL))
    return bad


def test_criterion_9_holding_parts(report, suite6):
    env = {a: envelope_violations(suite6, a) for a in (0, 1)}
    s2_bad = sum(abs(s2_identity_minus_L(build_laplacian(g)) - 1 / (g.max_degree - 1)) > TOL for g in suite6)
    inertia_bad = 0
    for g in suite6:
        indep = independence_numbers(g)
        inertia_bad += sum(not inertia_bounds_check(g, a, TOL, indep=indep).all_hold for a in (0.0, 0.5, 1.0))
    ok = not any(env.values()) and s2_bad == 0 and inertia_bad == 0
    assert report("9 (a=0, a=1, s2, inertia)", ok,
                  f"envelope violations a=0: {env[0]}, a=1: {env[1]}; s2(Id-L) {s2_bad}; inertia {inertia_bad}")


@pytest.mark.xfail(strict=True, reason="s2 lower envelope fails at a=1/2; see the restricted bound")
def test_criterion_9(report, suite6):
    bad = {a: envelope_violations(suite6, a) for a in (0, 1, Fraction(1, 2))}
    ok = not any(bad.values())
    report("9", ok, f"envelope violations a=0: {bad[0]}, a=1: {bad[1]}, a=1/2: {bad[Fraction(1, 2)]} "
                    f"of {len(suite6)} graphs")
    assert ok

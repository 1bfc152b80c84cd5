"""Named theorem checks run against a single graph.

Each check yields ``pass``, ``fail``, ``skip`` (precondition not met) or
``info`` (conjectures: reported, never counted as failures).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import (CYCLE_CAP, INDEPENDENCE_CAP, cycle_signature_check, gap_report,
                     independence_numbers, inertia_bounds_check,
                     s2_identity_minus_L)
from .graph_core import SimpleGraph
from .linalg import DEFAULT_TOL
from .nb_construct import (bipartite_nb_partition_check, build_nb, connectivity_class,
                           reconstruct_stats)
from .partite import BRUTE_FORCE_CAP, brute_force_partite, circular_partite_analysis, roots_of_unity_report
from .spectral import (build_laplacian, classify_symmetry, eigenpair_sum_zero, exact_identities,
                       laplacian_eigenpairs, modulus_envelope, p_orthogonality,
                       symmetric_LP_equivalence)


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)


@dataclass
class VerifyReport:
    graph6: str
    checks: list[Check] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool | None, **detail):
        status = "skip" if ok is None else ("pass" if ok else "fail")
        self.checks.append(Check(name, status, detail))

    def info(self, name: str, **detail):
        self.checks.append(Check(name, "info", detail))

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "graph6": self.graph6,
            "ok": self.ok,
            "summary": self.summary,
            "checks": [{"name": c.name, "status": c.status, **c.detail} for c in self.checks],
        }


def verify_graph(g: SimpleGraph, tol: float = DEFAULT_TOL) -> VerifyReport:
    rep = VerifyReport(g.to_graph6())
    nb = build_nb(g)
    deg = g.degrees
    rep.add("nb_arc_count", nb.arc_count == sum(d * d for d in deg) - 2 * g.m,
            arcs=nb.arc_count, formula=sum(d * d for d in deg) - 2 * g.m)
    stats = reconstruct_stats(nb)
    rep.add("nb_reconstruction", stats.edge_count == g.m and stats.vertex_count ==
            sum(1 for d in deg if d > 0))

    if g.min_degree < 1:
        rep.summary["note"] = "isolated vertices: NB checks only"
        return rep
    part = circular_partite_analysis(g)
    rep.summary["feasible_k"] = list(part.feasible_k)
    rep.add("partite_witness", part.witness.is_valid(nb), max_k=part.max_k)
    rep.add("partite_k2_iff_bipartite", (2 in part.feasible_k) == g.is_bipartite())
    if nb.size <= BRUTE_FORCE_CAP:
        agree = all((k in part.feasible_k) == brute_force_partite(g, k) for k in range(1, nb.size + 1))
        rep.add("partite_brute_force_agreement", agree)

    if g.min_degree < 2:
        rep.summary["note"] = "min degree < 2: Laplacian checks skipped"
        return rep
    bip = bipartite_nb_partition_check(g)
    rep.add("bipartite_nb_partition", bip.equivalence_holds, bipartite=bip.graph_bipartite)
    if g.is_connected() and g.is_cycle():
        rep.summary["note"] = "cycle graph: Laplacian checks skipped"
        return rep

    if g.is_connected():
        conn = connectivity_class(g)
        rep.add("connectivity_equivalence", conn.equivalence_holds)

    lap = build_laplacian(g)
    ids = exact_identities(lap)
    rep.add("transpose_symmetry_LT_eq_PLP", ids.transpose_symmetry)
    rep.add("LP_symmetric", ids.lp_symmetric)
    rep.add("row_sums_one", ids.row_sums_one)
    rep.add("off_diagonal_formula", ids.off_diagonal_formula)
    cp = lap.charpoly
    rep.add("one_not_eigenvalue", cp(1) != 0)
    rep.add("two_eigenvalue_iff_bipartite", (cp(2) == 0) == g.is_bipartite())
    zm, comps = cp.zero_multiplicity(), len(nb.weak_components())
    rep.add("zero_multiplicity_eq_components", zm == comps, multiplicity=zm, components=comps)

    for k in part.feasible_k:
        rou = roots_of_unity_report(g, k)
        rep.add(f"roots_of_unity_k{k}", rou.divides and max(rou.residuals) <= 1e-8,
                residual=max(rou.residuals))

    pairs = laplacian_eigenpairs(lap)
    sums, selfp, flows, imags = [0.0], [0.0], [0.0], [0.0]
    for p in pairs:
        if abs(p.value) > 1e-6:
            sums.append(eigenpair_sum_zero(p))
        c = classify_symmetry(p, lap)
        nrm = float(np.linalg.norm(p.vector)) ** 2
        if abs(p.value.imag) > 1e-6:
            selfp.append(abs(c.p_selfproduct) / nrm)
        if c.symmetry_class != "neither":
            flows.append(c.flow_balance_residual)
            imags.append(abs(p.value.imag))
    rep.add("eigenfunction_sum_zero", max(sums) <= 1e-6, max_residual=max(sums))
    rep.add("nonreal_p_selfproduct_zero", max(selfp) <= 1e-6, max_residual=max(selfp))
    rep.add("classified_eigenvalues_real", max(imags) <= tol, max_imag=max(imags))
    rep.add("flow_balance", max(flows) <= 1e-6, max_residual=max(flows))
    po = p_orthogonality(pairs)
    rep.add("p_orthogonality", po.max_cross <= 1e-6, max_residual=po.max_cross,
            flagged_pairs=len(po.flagged_pairs))
    sym = symmetric_LP_equivalence(g)
    rep.add("symmetric_to_line_graph", sym.lp_symmetric and sym.max_spectrum_distance() <= tol
            and sym.max_residual() <= 1e-6, transfers=len(sym.transfers),
            max_distance=sym.max_spectrum_distance())

    gap = gap_report(g, tol, lap=lap, max_k=part.max_k)
    rep.summary.update(epsilon=gap.epsilon, E=gap.E)
    rep.add("gap_lower_bound", gap.lower_ok, epsilon=gap.epsilon, bound=gap.lower_bound)
    rep.add("gap_theorem_upper_bound", gap.upper_ok, bound=gap.upper_bound_thm, note=gap.note)
    rep.add("gap_theorem_chain", gap.chain_ok)
    rep.add("gap_E_equals_one", gap.E_is_one)
    rep.add("gap_corollary", gap.corollary_ok, bound=gap.corollary_bound)
    rep.info("conjecture_eps_le_1_over_delta_minus_1", holds=gap.conjecture_holds,
             bound=gap.conjecture_bound)

    if lap.size <= CYCLE_CAP:
        cyc = cycle_signature_check(g, tol)
        rep.add("cycle_signatures", cyc.all_present, cycles=len(cyc.signatures))
        rep.info("cycle_signature_multiplicities", holds=cyc.multiplicities_ok)

    if lap.size <= INDEPENDENCE_CAP:
        indep = independence_numbers(g)
        rep.summary.update(alpha_out=indep.alpha_out, alpha_s_out=indep.alpha_s_out)
        for a in (0.0, 1.0):
            inert = inertia_bounds_check(g, a, tol, lap=lap, indep=indep)
            rep.add(f"inertia_bounds_a{a:g}", inert.all_hold, counts=inert.counts)

    rep.add("s2_identity_minus_L", abs(s2_identity_minus_L(lap) - 1 / (g.max_degree - 1)) <= tol,
            value=s2_identity_minus_L(lap), expected=Fraction(1, g.max_degree - 1))
    if comps == 1:
        for a in (0.0, 1.0):
            env = modulus_envelope(g, a, tol, lap=lap)
            rep.add(f"modulus_envelope_a{a:g}", env.holds, s2=env.s2, s_max=env.s_max,
                    min_distance=env.min_distance)
        env = modulus_envelope(g, 0.5, tol, lap=lap)
        rep.add("modulus_envelope_restricted_a0.5", env.restricted_lower_holds and env.upper_holds,
                bound=env.restricted_lower, min_distance=env.min_distance)
        rep.info("modulus_envelope_s2_a0.5", holds=env.holds, s2=env.s2)
    else:
        rep.add("modulus_envelope", None, note="NB graph not connected")
    return rep

"""Staged compute, analyze and verdict runs over one scenario.

Stages run in dependency order (zeta, laurent, verdict, identities, cocycle).
A failing stage records its error in the report and only the stages that
need its output are skipped.
"""

import json
import time
from dataclasses import dataclass, field
from itertools import product

from igusa.cocycle import (
    coboundary_witness_search,
    cocycle_identity_check,
    default_candidate_space,
    nonvanishing_criterion,
    residue_cocycle_value,
)
from igusa.errors import IgusaError
from igusa.lattice_orbits import (
    CONDITIONS_NOT_MET,
    admissible_orbits,
    find_separating_element,
    pole_bound_verdict,
    stratum_lattice,
)
from igusa.laurent_identities import (
    CoefficientTable,
    bound_replay,
    generalized_order_check,
    laurent_recursion_check,
    linear_independence_witness,
)
from igusa.symbolic import format_ratfunc, laurent_at, pole_order_at
from igusa.zeta_engine import FITTED, equivariance_check

IDENTITY_CHECKS = ("igu-inv", "equivariance", "generalized-order", "independence", "bound-replay")
COCYCLE_CHECKS = ("identity", "coboundary", "nonvanishing")


@dataclass
class Requests:
    zeta: bool = True
    laurent: tuple = ()
    terms: int = 3
    verdict: bool = False
    identities: tuple = ()
    cocycle: tuple = ()
    g: tuple = ()
    basis_level: tuple = (1, 1)
    timing: bool = False


@dataclass
class Report:
    scenario: dict
    stages: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    timing: dict = None

    def to_json(self):
        out = {"scenario": self.scenario, **self.stages, "errors": self.errors}
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @property
    def exit_code(self):
        if self.errors:
            return 1
        verdict = self.stages.get("verdict")
        if verdict and verdict["conclusion"] == CONDITIONS_NOT_MET:
            return 2
        return 0


def default_g_samples(scenario):
    """Unit vectors of Lambda."""
    r = scenario.group.rank
    return [tuple(int(i == j) for i in range(r)) for j in range(r)]


def default_nonvanishing_g(scenario):
    """One separating element per stratum carrying an admissible orbit."""
    out = []
    for stratum in scenario.stratification.strata:
        if admissible_orbits(stratum, scenario.chi):
            gens = stratum_lattice(stratum, scenario.chi)
            out.append(find_separating_element(scenario.nu, gens, scenario.group.rank).valuations)
    return out


def _error(exc):
    return {"type": type(exc).__name__, "message": str(exc)}


def run_pipeline(scenario, requests=None):
    """Run the requested stages; never raises for stage failures."""
    req = requests or Requests()
    report = Report(scenario.to_json())
    timing = {}
    ctx = {}

    def stage(name, fn, needs=()):
        missing = [d for d in needs if d not in ctx]
        if missing:
            report.errors[name] = {"type": "Skipped", "message": f"needs stage {missing[0]}"}
            return
        start = time.perf_counter()
        try:
            ctx[name] = fn()
            report.stages[name] = ctx[name]["json"]
        except (IgusaError, ArithmeticError, ValueError, KeyError, IndexError) as exc:
            report.errors[name] = _error(exc)
        timing[name] = round(time.perf_counter() - start, 6)

    def do_zeta():
        res = scenario.zeta()
        k = pole_order_at(res.Z, 0)
        data = res.to_json()
        data["human"] = format_ratfunc(res.Z)
        data["pole_order_at_0"] = k
        if res.provenance == FITTED:
            data["igusa_relation"] = res.fit_metadata["igusa_relation"]
        return {"result": res, "k0": k, "json": data}

    def do_laurent():
        Z = ctx["zeta"]["result"].Z
        entries = []
        for s0 in req.laurent:
            k = pole_order_at(Z, s0)
            series = laurent_at(Z, s0, max(req.terms - 1, 0))
            entries.append({"s0": s0, "pole_order": k, "series": series.to_json()})
        return {"json": entries}

    def do_verdict():
        v = pole_bound_verdict(scenario.stratification, scenario.chi, scenario.nu,
                               ctx["zeta"]["k0"], scenario.measure_character())
        return {"json": v.to_json()}

    table = CoefficientTable(scenario)
    gs = [scenario.element(g) for g in req.g] if req.g else None
    M, N = req.basis_level

    def do_identities():
        basis = scenario.basis(M, N)
        samples = gs or [scenario.element(g) for g in default_g_samples(scenario)]
        k0 = ctx["zeta"]["k0"]
        out = {}
        for check in req.identities:
            if check == "igu-inv":
                results = [laurent_recursion_check(scenario, g, i, basis, table=table)
                           for g in samples for i in range(-k0, 2)]
                out[check] = _combine("laurent_recursion", results)
            elif check == "equivariance":
                results = [equivariance_check(scenario, g, phi) for g in samples for phi in basis]
                out[check] = {"identity": "equivariance", "holds": all(results),
                              "params": {"g": [str(g) for g in samples], "basis_size": len(basis)}}
            elif check == "generalized-order":
                results = [generalized_order_check(scenario, -k0, [[g] for g in samples], basis, table)]
                if k0:
                    tuples = [list(t) for t in product(samples, repeat=k0 + 1)]
                    results.append(generalized_order_check(scenario, 0, tuples, basis, table))
                out[check] = _combine("generalized_order", results)
            elif check == "independence":
                out[check] = linear_independence_witness(scenario, basis, table=table).to_json()
            elif check == "bound-replay":
                out[check] = bound_replay(scenario, basis, table).to_json()
            else:
                raise ValueError(f"unknown identity check {check!r}")
        return {"json": out}

    def do_cocycle():
        basis = scenario.basis(M, N)
        samples = gs or [scenario.element(g) for g in default_g_samples(scenario)]
        out = {}
        for check in req.cocycle:
            if check == "identity":
                results = [cocycle_identity_check(scenario, a, b, basis, table=table)
                           for a in samples for b in samples]
                out[check] = {
                    "criterion": "cocycle",
                    "result": all(r.result for r in results),
                    "audit": [a for r in results for a in r.audit],
                    "values": {str(g): residue_cocycle_value(scenario, g, scenario.phi, table=table).to_json()
                               for g in samples},
                }
            elif check == "coboundary":
                cands = default_candidate_space(scenario)
                w = coboundary_witness_search(scenario, cands, samples, basis, table)
                out[check] = {
                    "criterion": "coboundary",
                    "result": "no_witness_in_space" if w is None else "witness",
                    "audit": [{"candidates": [d.orbit.name for d in cands],
                               "g": [str(g) for g in samples], "basis_size": len(basis)}],
                    "witness": None if w is None else w.to_json(),
                }
            elif check == "nonvanishing":
                g_list = gs if gs is not None else default_nonvanishing_g(scenario)
                out[check] = nonvanishing_criterion(scenario, scenario.chi, g_list,
                                                    k0=ctx["zeta"]["k0"]).to_json()
            else:
                raise ValueError(f"unknown cocycle check {check!r}")
        return {"json": out}

    if req.zeta or req.laurent or req.verdict or req.identities or req.cocycle:
        stage("zeta", do_zeta)
    if req.laurent:
        stage("laurent", do_laurent, ("zeta",))
    if req.verdict:
        stage("verdict", do_verdict, ("zeta",))
    if req.identities:
        stage("identities", do_identities, ("zeta",))
    if req.cocycle:
        stage("cocycle", do_cocycle, ("zeta",))
    if req.timing:
        report.timing = timing
    return report


def _combine(name, reports):
    failed = [r for r in reports if not r.holds]
    first = failed[0] if failed else None
    return {
        "identity": name,
        "holds": not failed,
        "params": {"checks": len(reports)},
        "witness": None if first is None else {"params": first.details, "witness": first.witness},
    }

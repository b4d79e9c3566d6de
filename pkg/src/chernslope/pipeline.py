"""End-to-end report: target slope -> parameters -> sampled degree-q cover.

`run_pipeline` chains the density solver with (optionally) a sampled cover:
a prime q is chosen (or taken from the hint), a good branch assignment is
searched with a deterministic seed schedule, and the cover invariants plus
the nef summary at q are attached. Identical inputs yield byte-identical
JSON. Parameter sets whose resolved configuration would be enormous skip
the sampled leg and say so in the report.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import density
from .geometry import Family, build_resolution
from .nefcheck import closed_entries, _t_value
from .numtheory import next_prime
from .partitions import NotFound, PartitionProblem, sample_with_stats, search_assignment
from .rootcover import chern_of_cover
from .serialize import canonical_json

DEFAULT_COMPONENT_CAP = 250_000
DEFAULT_NODE_CAP = 20_000


def _estimated_components(params) -> int:
    extra = 0 if params.family is Family.APRIME else 1
    return params.d + extra + params.u + params.w + params.delta * (1 + params.chain_length)


def _min_feasible_q(params) -> int:
    if params.family is Family.APRIME:
        return max(params.l, params.delta) + 1
    weight = params.e * params.chain_length
    return weight * (params.d + params.u) + params.delta + params.w + 1


@dataclass(frozen=True)
class PipelineResult:
    report: dict

    def to_json(self) -> str:
        return canonical_json(self.report)

    @property
    def status(self) -> str:
        return self.report["status"]


def run_pipeline(
    target,
    epsilon,
    p: int = 2,
    family: Family | str = Family.A,
    q_hint: int | None = None,
    seed: int = 0,
    g: int = 0,
    e: int = 1,
    w: int = 1,
    sample: bool = True,
    component_cap: int = DEFAULT_COMPONENT_CAP,
    node_cap: int = DEFAULT_NODE_CAP,
    max_tries: int = 200,
) -> PipelineResult:
    family = Family(family)
    if family is Family.APRIME:
        solved = density.solve_family_aprime(target, epsilon, p=p)
    else:
        solved = density.solve_family_a(target, epsilon, p=p, g=g, e=e, w=w)

    report: dict = {
        "target": solved.target,
        "target_approx": float(solved.target),
        "epsilon": solved.epsilon,
        "family": family.value,
        "p": p,
        "seed": seed,
        "status": solved.status,
        "diagnostics": solved.diagnostics,
        "sampled": None,
    }
    if solved.params is not None:
        pp = solved.params
        report["params"] = {
            "family": pp.family.value, "p": pp.p, "r": pp.r, "e": pp.e,
            "d": pp.d, "g": pp.g, "u": pp.u, "w": pp.w,
        }
        report["limit_slope"] = solved.achieved_limit
        report["limit_slope_approx"] = float(solved.achieved_limit)
        report["error"] = solved.error
        report["error_approx"] = float(solved.error)
    else:
        report["params"] = None

    if not (sample and solved.status == "ok" and solved.params is not None):
        return PipelineResult(report)

    params = solved.params
    est = _estimated_components(params)
    if est > component_cap:
        report["sampled"] = {
            "skipped": f"configuration would have ~{est} components "
                       f"(cap {component_cap}); rerun with a larger cap or a looser epsilon",
        }
        return PipelineResult(report)

    config = build_resolution(params)
    if config.t2 > node_cap:
        report["sampled"] = {
            "skipped": f"configuration has {config.t2} nodes (cap {node_cap}); "
                       f"a good assignment would need a prime q far beyond desk scale",
        }
        return PipelineResult(report)
    # Rejection sampling needs q well above the node count, so start the
    # prime search there; if neither the sampler nor the deterministic
    # backtracking search lands an assignment, double q and retry.
    if q_hint is not None:
        q = q_hint
    else:
        q = next_prime(max(17, _min_feasible_q(params), config.t2))
    while q == p:
        q = next_prime(q + 1)

    result = None
    tries = 0
    method = None
    attempts_log: list[dict] = []
    for _escalation in range(6):
        problem = PartitionProblem(config, q)
        result, tries = sample_with_stats(problem, seed=seed, max_tries=max_tries)
        if not isinstance(result, NotFound):
            method = "rejection"
            break
        rejection_tries = result.tries
        result = search_assignment(problem, seed=seed)
        if not isinstance(result, NotFound):
            method = "backtracking"
            break
        attempts_log.append({
            "q": q,
            "rejection_tries": rejection_tries,
            "search_attempts": result.tries,
        })
        if q_hint is not None:
            break  # the caller pinned q; report the failure there
        q = next_prime(2 * q)
        while q == p:
            q = next_prime(q + 1)
    if isinstance(result, NotFound):
        report["status"] = "not_found"
        report["sampled"] = {
            "q": q,
            "tries": result.tries,
            "zero_hits": result.zero_hits,
            "fewest_bad": result.fewest_bad,
            "worst_node": list(result.worst_node) if result.worst_node else None,
            "escalations": attempts_log,
        }
        return PipelineResult(report)

    cover = chern_of_cover(config, result)
    limit = solved.achieved_limit
    nef = closed_entries(params, q)
    report["sampled"] = {
        "q": q,
        "method": method,
        "tries": tries,
        "c1sq": cover.c1sq,
        "c2": cover.c2,
        "chi": cover.chi,
        "slope": cover.slope,
        "slope_approx": float(cover.slope),
        "slope_vs_limit_approx": abs(float(cover.slope) - float(limit)),
        "c_correction": cover.c_correction,
        "l_correction": cover.l_correction,
        "defect_bound": cover.defect_bound,
        "nef": {
            "all_nonnegative": all(v >= 0 for v in nef.values()),
            "t_value": _t_value(params, q),
        },
    }
    return PipelineResult(report)

"""Probe-selection strategies: the estimate-driven outside-degree ranking
plus the popular baselines (degree, dispersion, community-crossing,
clustering, random).

Every strategy scores the candidate nodes of an observed graph and a shared
selector takes the top b, breaking ties by ascending label so runs are
reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .communities import detect_communities
from .errors import ConfigError, EstimationError, UnknownNodeError
from .estimators import (
    DEFAULT_ESTIMATION_PROBES,
    EstimateSet,
    METHOD_PROBE,
    known_edge_sample_estimates,
    known_node_sample_estimates,
    probe_based_estimates,
)
from .graphs import CompleteGraph, ObservedGraph, local_clustering, two_hop_open_wedges
from .probing import ProbeLedger

STRATEGY_NAMES = (
    "maxoutprobe",
    "highdeg",
    "lowdeg",
    "highdisp",
    "lowdisp",
    "crosscomm",
    "highcc",
    "lowcc",
    "random",
)

HIGH = "high"
LOW = "low"


@dataclass(frozen=True)
class CandidateScore:
    """Ranking score for one candidate; the estimate-driven strategy also
    records its components (estimated true degree, observed degree, and the
    open-wedge partner count)."""

    node: str
    score: float
    est_degree: float = 0.0
    known_degree: int = 0
    open_wedge_count: int = 0


@dataclass(frozen=True)
class ProbePlan:
    strategy: str
    nodes: tuple[str, ...]
    scores: tuple[float, ...]


def _direction_sign(direction: str) -> float:
    if direction == HIGH:
        return 1.0
    if direction == LOW:
        return -1.0
    raise ConfigError(f"direction must be 'high' or 'low', got {direction!r}")


def score_max_out_probe(obs: ObservedGraph, est: EstimateSet) -> list[CandidateScore]:
    """Score candidates by estimated neighbors outside the observed graph.

    For candidate u: estimated true degree minus observed degree, minus the
    expected number of open-wedge partners that are really neighbors
    (clustering estimate times partner count).  Negative scores clamp to 0.
    """
    scores = []
    for u in obs.candidate_nodes():
        d_known = obs.degree(u)
        d_hat = est.scale_multiplier * d_known
        w_u = len(two_hop_open_wedges(obs, u))
        outside = d_hat - d_known - est.clustering * w_u
        scores.append(
            CandidateScore(
                node=u,
                score=max(0.0, outside),
                est_degree=d_hat,
                known_degree=d_known,
                open_wedge_count=w_u,
            )
        )
    if not scores:
        raise EstimationError("no candidate nodes to score")
    return scores


def select_top_b(
    scores: Sequence[CandidateScore], b_remaining: int, strategy: str = ""
) -> ProbePlan:
    """The b_remaining highest-scoring candidates, ties by ascending label."""
    if b_remaining < 1:
        raise ConfigError(f"b_remaining must be at least 1, got {b_remaining}")
    ranked = sorted(scores, key=lambda s: (-s.score, s.node))[:b_remaining]
    return ProbePlan(
        strategy=strategy,
        nodes=tuple(s.node for s in ranked),
        scores=tuple(s.score for s in ranked),
    )


def score_degree(obs: ObservedGraph, direction: str = HIGH) -> list[CandidateScore]:
    sign = _direction_sign(direction)
    return [
        CandidateScore(node=u, score=sign * obs.degree(u), known_degree=obs.degree(u))
        for u in obs.candidate_nodes()
    ]


def edge_dispersion(obs: ObservedGraph, u: str, v: str) -> int:
    """Dispersion of an observed edge: the number of pairs of common
    neighbors of u and v that are not connected and share no common
    neighbor other than u and v themselves."""
    if not obs.has_edge(u, v):
        raise UnknownNodeError(f"({u!r}, {v!r}) is not an observed edge")
    common = sorted(obs.neighbor_set(u) & obs.neighbor_set(v))
    neighbor_sets = {s: obs.neighbor_set(s) for s in common}
    count = 0
    for i, s in enumerate(common):
        for t in common[i + 1:]:
            if t in neighbor_sets[s]:
                continue
            if (neighbor_sets[s] & neighbor_sets[t]) - {u, v}:
                continue
            count += 1
    return count


def score_dispersion(obs: ObservedGraph, direction: str = HIGH) -> list[CandidateScore]:
    """Mean dispersion of a candidate's incident observed edges."""
    sign = _direction_sign(direction)
    scores = []
    for u in obs.candidate_nodes():
        neighbors = obs.neighbors(u)
        if neighbors:
            mean_disp = sum(edge_dispersion(obs, u, v) for v in neighbors) / len(neighbors)
        else:
            mean_disp = 0.0
        scores.append(CandidateScore(node=u, score=sign * mean_disp, known_degree=len(neighbors)))
    return scores


def score_cross_comm(
    obs: ObservedGraph, partition: dict[str, int]
) -> list[CandidateScore]:
    """Fraction of a candidate's observed neighbors outside its community."""
    scores = []
    for u in obs.candidate_nodes():
        if u not in partition:
            raise UnknownNodeError(f"node {u!r} missing from the community partition")
        neighbors = obs.neighbors(u)
        if not neighbors:
            scores.append(CandidateScore(node=u, score=0.0))
            continue
        cu = partition[u]
        outside = 0
        for v in neighbors:
            if v not in partition:
                raise UnknownNodeError(f"node {v!r} missing from the community partition")
            if partition[v] != cu:
                outside += 1
        scores.append(
            CandidateScore(node=u, score=outside / len(neighbors), known_degree=len(neighbors))
        )
    return scores


def score_clustering(obs: ObservedGraph, direction: str = HIGH) -> list[CandidateScore]:
    sign = _direction_sign(direction)
    return [
        CandidateScore(node=u, score=sign * local_clustering(obs, u))
        for u in obs.candidate_nodes()
    ]


def select_random(obs: ObservedGraph, b_remaining: int, seed: int) -> ProbePlan:
    """Uniform sample of candidates, without replacement, seed-deterministic."""
    if b_remaining < 1:
        raise ConfigError(f"b_remaining must be at least 1, got {b_remaining}")
    pool = obs.candidate_nodes()
    rng = random.Random(seed)
    chosen = rng.sample(pool, min(b_remaining, len(pool)))
    return ProbePlan(
        strategy="random",
        nodes=tuple(chosen),
        scores=tuple(0.0 for _ in chosen),
    )


def make_probe_plan(
    strategy: str,
    g: CompleteGraph,
    obs: ObservedGraph,
    ledger: ProbeLedger,
    selection_seed: int,
    estimation_seed: int = 0,
    estimation_probes: int = DEFAULT_ESTIMATION_PROBES,
    known_sample: tuple[str, float] | None = None,
    charge_estimation: bool = True,
) -> tuple[ProbePlan, EstimateSet | None]:
    """Build the probe plan for a named strategy against one observed graph.

    For the estimate-driven strategy this runs the estimation phase first
    (consuming budget unless charge_estimation is False), or uses the
    closed-form estimators when known_sample carries ("node", fraction) or
    ("edge", fraction).  Estimation probes are drawn from the budget-many
    highest-degree candidates and capped at half the budget so selection
    always keeps at least half.

    Returns the plan over the remaining budget plus the estimate set used
    (None for baselines).
    """
    if strategy not in STRATEGY_NAMES:
        raise ConfigError(
            f"unknown strategy {strategy!r}; expected one of {STRATEGY_NAMES}"
        )
    est: EstimateSet | None = None
    if strategy == "maxoutprobe":
        if known_sample is not None:
            kind, fraction = known_sample
            if kind == "node":
                est = known_node_sample_estimates(obs, fraction)
            elif kind == "edge":
                est = known_edge_sample_estimates(obs, fraction)
            else:
                raise ConfigError(f"known_sample kind must be 'node' or 'edge', got {kind!r}")
        else:
            n_probes = min(
                estimation_probes,
                ledger.budget // 2,
                ledger.remaining,
                len(obs.candidate_nodes()),
            )
            if n_probes >= 1:
                est = probe_based_estimates(
                    g, obs, ledger, n_probes=n_probes, seed=estimation_seed
                )
                if not charge_estimation:
                    ledger.budget += est.probes_used
            else:
                # budget too small to estimate anything: with a neutral
                # multiplier and zero clustering the ranking falls back to
                # observed degree
                est = EstimateSet(
                    method=METHOD_PROBE, scale_multiplier=2.0, clustering=0.0
                )
        scores = score_max_out_probe(obs, est)
        return select_top_b(scores, ledger.remaining, strategy=strategy), est

    if strategy == "random":
        return select_random(obs, ledger.remaining, selection_seed), None
    if strategy in ("highdeg", "lowdeg"):
        scores = score_degree(obs, HIGH if strategy == "highdeg" else LOW)
    elif strategy in ("highdisp", "lowdisp"):
        scores = score_dispersion(obs, HIGH if strategy == "highdisp" else LOW)
    elif strategy == "crosscomm":
        partition = detect_communities(obs, seed=selection_seed)
        scores = score_cross_comm(obs, partition)
    else:  # highcc / lowcc
        scores = score_clustering(obs, HIGH if strategy == "highcc" else LOW)
    return select_top_b(scores, ledger.remaining, strategy=strategy), None

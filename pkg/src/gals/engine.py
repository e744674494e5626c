"""The generational driver: MRW seeding, crossover + local search, (mu + lambda) survival."""
from __future__ import annotations

import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .encoding import Partition, decode, is_safe
from .graph import Network
from .modularity import modularity_q
from .operators import Individual, breed, mrw_init, survivor_indices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaConfig:
    iterations: int = 500
    mu: int = 80
    lam: int = 60
    seed: int | None = None
    trace_every: int = 1
    stagnation: int | None = None
    """Stop after this many generations without a best-Q improvement (off when None)."""
    check_invariants: bool = False
    """Assert safety and cached fitness of every individual created (slow)."""

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.mu < 2:
            raise ValueError("mu must be >= 2")
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")
        if self.trace_every < 1:
            raise ValueError("trace_every must be >= 1")
        if self.stagnation is not None and self.stagnation < 1:
            raise ValueError("stagnation must be >= 1")


@dataclass
class RunResult:
    best_partition: Partition
    best_q: float
    generations_run: int
    q_trace: list[tuple[int, float]]
    elapsed: float
    seed: int

    def to_dict(self, net: Network) -> dict:
        return {
            "q": self.best_q,
            "communities": self.best_partition.communities(net.node_names),
            "trace": [[g, q] for g, q in self.q_trace],
            "seed": self.seed,
            "elapsed_ms": self.elapsed * 1000.0,
        }

    def to_json(self, net: Network) -> str:
        return json.dumps(self.to_dict(net))


@dataclass
class RunSummary:
    results: list[RunResult]
    mean_q: float = field(init=False)
    min_q: float = field(init=False)
    max_q: float = field(init=False)
    std_q: float = field(init=False)
    mean_elapsed: float = field(init=False)

    def __post_init__(self):
        qs = [r.best_q for r in self.results]
        self.min_q = min(qs)
        self.max_q = max(qs)
        # fmean can round one ulp outside [min, max] when all values are equal
        self.mean_q = min(max(statistics.fmean(qs), self.min_q), self.max_q)
        self.std_q = statistics.pstdev(qs)
        self.mean_elapsed = statistics.fmean(r.elapsed for r in self.results)

    @property
    def best(self) -> RunResult:
        return max(self.results, key=lambda r: r.best_q)


@dataclass
class Population:
    """Row-aligned chromosomes, their decoded labels and cached Q, best first after selection."""

    alleles: np.ndarray
    labels: np.ndarray
    q: np.ndarray

    def __len__(self):
        return len(self.q)

    @property
    def individuals(self) -> list[Individual]:
        return [Individual(a, l, float(q)) for a, l, q in zip(self.alleles, self.labels, self.q)]

    @classmethod
    def from_individuals(cls, inds: list[Individual]) -> "Population":
        return cls(np.stack([i.alleles for i in inds]), np.stack([i.labels for i in inds]),
                   np.array([i.q for i in inds]))

    def check(self, net: Network):
        """Assert every member is safe and its cached Q matches a fresh decode."""
        for ind in self.individuals:
            assert is_safe(ind.alleles, net), "unsafe chromosome in population"
            q = modularity_q(net, decode(ind.alleles))
            assert abs(q - ind.q) <= 1e-12, f"cached Q {ind.q} != recomputed {q}"


def run_gals(net: Network, cfg: GaConfig = GaConfig(),
             on_generation: Callable[[int, Population, Population], None] | None = None,
             ) -> RunResult:
    """One full run.

    ``on_generation(gen, offspring, population)`` is called after each
    selection with that generation's offspring and the surviving population.
    """
    if net.edge_count == 0:
        raise ValueError("network has no edges")
    seed = cfg.seed if cfg.seed is not None else int(np.random.SeedSequence().entropy % 2**63)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()

    pop = Population.from_individuals(
        [Individual.evaluate(net, mrw_init(net, rng)) for _ in range(cfg.mu)])
    if cfg.check_invariants:
        pop.check(net)
    best_q = float(pop.q.max())
    trace = [(0, best_q)]
    since_improvement = 0
    generation = 0
    for generation in range(1, cfg.iterations + 1):
        kids = Population(*breed(net, pop.alleles, rng, cfg.lam))
        keep = survivor_indices(np.concatenate([pop.q, kids.q]), cfg.mu)
        pool_alleles = np.concatenate([pop.alleles, kids.alleles])
        pool_labels = np.concatenate([pop.labels, kids.labels])
        pop = Population(pool_alleles[keep], pool_labels[keep],
                         np.concatenate([pop.q, kids.q])[keep])
        if cfg.check_invariants:
            kids.check(net)
            pop.check(net)
        if on_generation is not None:
            on_generation(generation, kids, pop)

        top = float(pop.q[0])
        if top > best_q:
            best_q = top
            since_improvement = 0
        else:
            since_improvement += 1
        if generation % cfg.trace_every == 0 or generation == cfg.iterations:
            trace.append((generation, best_q))
        if cfg.stagnation is not None and since_improvement >= cfg.stagnation:
            if trace[-1][0] != generation:
                trace.append((generation, best_q))
            logger.info("stopping after %d stagnant generations", since_improvement)
            break

    return RunResult(
        best_partition=Partition.from_labels(pop.labels[0], net),
        best_q=float(pop.q[0]),
        generations_run=generation,
        q_trace=trace,
        elapsed=time.perf_counter() - start,
        seed=seed,
    )


def _run_seed(args):
    net, cfg = args
    return run_gals(net, cfg)


def run_many(net: Network, cfg: GaConfig = GaConfig(), runs: int = 1,
             workers: int = 1) -> RunSummary:
    """Independent runs with seeds ``seed, seed + 1, ...``."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    base = cfg.seed if cfg.seed is not None else int(np.random.SeedSequence().entropy % 2**62)
    jobs = [(net, replace(cfg, seed=base + r)) for r in range(runs)]
    if workers > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_seed, jobs))
    else:
        results = [_run_seed(job) for job in jobs]
    return RunSummary(results)

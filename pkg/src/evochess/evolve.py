"""Genetic algorithm over search-parameter chromosomes.

Fitness of an organism is the reciprocal of the total nodes it spends on a
tactical suite (unsolved positions billed at the full cap), so fewer nodes
means fitter.  Selection is fitness-proportional roulette, crossover is
uniform, mutation is per-bit, and the elite survives unchanged — which makes
the best total non-increasing generation over generation.

Determinism contract: every random draw comes from per-generation generators
derived from (seed, generation), and evaluation parallelism never touches
them, so a run is bit-for-bit reproducible at any --jobs setting and can be
resumed from the last log line.
"""

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .genome import CHROMOSOME_BITS, Chromosome, decode, random_chromosome
from .harness import run_suite
from .search import SearchParams

CSV_COLUMNS = ("generation", "best_nodes", "mean_nodes", "best_solved",
               "best_chromosome", "best_fitness", "mean_fitness",
               "population", "nodes", "solved")


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 10
    crossover_rate: float = 0.75
    mutation_rate: float = 0.05
    generations: int = 50
    elitism_count: int = 1
    seed: int = 0
    node_cap: int = 500_000

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must be in [0, population_size)")
        if self.node_cap < 1:
            raise ValueError("node_cap must be >= 1")

    def asdict(self) -> dict:
        return {
            "population_size": self.population_size,
            "crossover_rate": self.crossover_rate,
            "mutation_rate": self.mutation_rate,
            "generations": self.generations,
            "elitism_count": self.elitism_count,
            "seed": self.seed,
            "node_cap": self.node_cap,
        }


@dataclass(frozen=True)
class FitnessReport:
    chromosome: Chromosome
    total_nodes: int
    solved_count: int

    @property
    def fitness(self) -> float:
        return 1.0 / self.total_nodes


@dataclass(frozen=True)
class GenerationRecord:
    """Everything logged for one generation; the population and per-organism
    numbers make the line sufficient to resume from."""

    generation: int
    population: tuple          # 70-char bit strings
    nodes: tuple               # per-organism total nodes
    solved: tuple              # per-organism solved counts

    @property
    def best_index(self) -> int:
        return min(range(len(self.nodes)), key=lambda i: (self.nodes[i], i))

    @property
    def best_nodes(self) -> int:
        return self.nodes[self.best_index]

    @property
    def best_solved(self) -> int:
        return self.solved[self.best_index]

    @property
    def best_chromosome(self) -> str:
        return self.population[self.best_index]

    @property
    def best_fitness(self) -> float:
        return 1.0 / self.best_nodes

    @property
    def mean_nodes(self) -> float:
        return sum(self.nodes) / len(self.nodes)

    @property
    def mean_fitness(self) -> float:
        return sum(1.0 / n for n in self.nodes) / len(self.nodes)

    def as_json(self) -> str:
        return json.dumps({
            "record": "generation",
            "generation": self.generation,
            "best_nodes": self.best_nodes,
            "mean_nodes": self.mean_nodes,
            "best_solved": self.best_solved,
            "best_chromosome": self.best_chromosome,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "population": list(self.population),
            "nodes": list(self.nodes),
            "solved": list(self.solved),
        }, sort_keys=True)

    def as_csv(self) -> str:
        return ",".join([
            str(self.generation), str(self.best_nodes),
            f"{self.mean_nodes:.2f}", str(self.best_solved),
            self.best_chromosome, f"{self.best_fitness:.12e}",
            f"{self.mean_fitness:.12e}", "|".join(self.population),
            "|".join(str(n) for n in self.nodes),
            "|".join(str(s) for s in self.solved),
        ])

    @staticmethod
    def from_json(line: str) -> "GenerationRecord":
        obj = json.loads(line)
        return GenerationRecord(obj["generation"], tuple(obj["population"]),
                                tuple(obj["nodes"]), tuple(obj["solved"]))

    @staticmethod
    def from_csv(line: str) -> "GenerationRecord":
        parts = line.rstrip("\n").split(",")
        gen = int(parts[0])
        population = tuple(parts[7].split("|"))
        nodes = tuple(int(x) for x in parts[8].split("|"))
        solved = tuple(int(x) for x in parts[9].split("|"))
        return GenerationRecord(gen, population, nodes, solved)


@dataclass
class EvolutionResult:
    log: list                       # GenerationRecord per generation
    best_chromosome: Chromosome
    best_params: SearchParams = field(init=False)

    def __post_init__(self):
        self.best_params = decode(self.best_chromosome)


# ---------------------------------------------------------------------------
# GA operators
# ---------------------------------------------------------------------------

def fitness_of(c: Chromosome, suite, node_cap: int = 500_000) -> FitnessReport:
    """Evaluate one organism over the suite; unsolved positions cost the cap."""
    report = run_suite(suite, decode(c), node_cap)
    return FitnessReport(c, report.total_nodes, report.solved_count)


def roulette_select(reports: Sequence[FitnessReport],
                    rng: random.Random) -> Chromosome:
    """Pick an organism with probability proportional to its fitness."""
    total = sum(r.fitness for r in reports)
    pick = rng.random() * total
    acc = 0.0
    for r in reports:
        acc += r.fitness
        if pick < acc:
            return r.chromosome
    return reports[-1].chromosome


def uniform_crossover(a: Chromosome, b: Chromosome, crossover_rate: float,
                      rng: random.Random) -> Chromosome:
    """With probability crossover_rate, mix bits 50/50; otherwise clone a."""
    if rng.random() >= crossover_rate:
        return a
    bits = "".join(x if rng.getrandbits(1) else y
                   for x, y in zip(a.bits, b.bits))
    return Chromosome(bits)


def mutate(c: Chromosome, mutation_rate: float,
           rng: random.Random) -> Chromosome:
    """Flip each bit independently with probability mutation_rate."""
    if mutation_rate == 0.0:
        return c
    bits = "".join(
        ("1" if ch == "0" else "0") if rng.random() < mutation_rate else ch
        for ch in c.bits)
    return Chromosome(bits)


# ---------------------------------------------------------------------------
# evaluation plumbing
# ---------------------------------------------------------------------------

_WORKER_SUITE = None


def _worker_init(suite_specs):
    global _WORKER_SUITE
    from .harness import _record_from_spec
    _WORKER_SUITE = [_record_from_spec(s) for s in suite_specs]


def _worker_eval(args):
    bits, node_cap = args
    report = fitness_of(Chromosome(bits), _WORKER_SUITE, node_cap)
    return report.total_nodes, report.solved_count


class _Evaluator:
    """Caches fitness by chromosome text and fans uncached evaluations out to
    a process pool.  Results are identical for any job count because the task
    list and its order are fixed before dispatch."""

    def __init__(self, suite, node_cap: int, jobs: int = 1):
        self.suite = suite
        self.node_cap = node_cap
        self.jobs = jobs
        self.cache = {}

    def evaluate(self, population: Sequence[Chromosome]):
        fresh = []
        for c in population:
            if c.bits not in self.cache and c.bits not in fresh:
                fresh.append(c.bits)
        if fresh:
            if self.jobs > 1:
                from .harness import _record_spec
                specs = [_record_spec(r) for r in self.suite]
                with ProcessPoolExecutor(
                        max_workers=self.jobs, initializer=_worker_init,
                        initargs=(specs,)) as ex:
                    results = list(ex.map(
                        _worker_eval,
                        [(bits, self.node_cap) for bits in fresh]))
            else:
                results = []
                for bits in fresh:
                    r = fitness_of(Chromosome(bits), self.suite,
                                   self.node_cap)
                    results.append((r.total_nodes, r.solved_count))
            for bits, (nodes, solved) in zip(fresh, results):
                self.cache[bits] = (nodes, solved)
        return [FitnessReport(c, *self.cache[c.bits]) for c in population]


def _gen_rng(seed: int, generation: int) -> random.Random:
    """Generator for one generation's draws, stable across platforms."""
    digest = hashlib.sha256(f"evochess:{seed}:{generation}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# the evolution loop
# ---------------------------------------------------------------------------

def _initial_population(config: GaConfig):
    rng = _gen_rng(config.seed, 0)
    return [random_chromosome(rng) for _ in range(config.population_size)]


def _next_population(config: GaConfig, reports, generation: int):
    rng = _gen_rng(config.seed, generation)
    order = sorted(range(len(reports)),
                   key=lambda i: (reports[i].total_nodes, i))
    population = [reports[i].chromosome for i in order[:config.elitism_count]]
    while len(population) < config.population_size:
        pa = roulette_select(reports, rng)
        pb = roulette_select(reports, rng)
        child = uniform_crossover(pa, pb, config.crossover_rate, rng)
        population.append(mutate(child, config.mutation_rate, rng))
    return population


def run_evolution(config: GaConfig, suite, jobs: int = 1,
                  log_writer=None, resume_from: Optional[Sequence[GenerationRecord]] = None,
                  progress=None) -> EvolutionResult:
    """Evolve and log config.generations generations in total; generation 0
    is the random initial population, so generations=1 means evaluating that
    population and stopping.

    log_writer, when given, is called with each GenerationRecord as it is
    produced.  resume_from replays an existing log prefix: evolution restarts
    after its last record and, because all randomness is per-generation, the
    continuation matches an uninterrupted run exactly."""
    if not suite:
        raise ValueError("suite is empty")
    evaluator = _Evaluator(suite, config.node_cap, jobs)
    log = []

    if resume_from:
        log = list(resume_from)
        for rec in log:
            if len(rec.population) != config.population_size:
                raise ValueError("resume log population size does not match")
            for bits, nodes, solved in zip(rec.population, rec.nodes,
                                           rec.solved):
                evaluator.cache[bits] = (nodes, solved)
        population = [Chromosome(b) for b in log[-1].population]
        reports = evaluator.evaluate(population)
        start = log[-1].generation + 1
    else:
        population = _initial_population(config)
        reports = evaluator.evaluate(population)
        rec = _record_of(0, reports)
        log.append(rec)
        if log_writer:
            log_writer(rec)
        if progress:
            progress(rec)
        start = 1

    for gen in range(start, config.generations):
        population = _next_population(config, reports, gen)
        reports = evaluator.evaluate(population)
        rec = _record_of(gen, reports)
        log.append(rec)
        if log_writer:
            log_writer(rec)
        if progress:
            progress(rec)

    best = min(log, key=lambda r: r.best_nodes)
    return EvolutionResult(log, Chromosome(best.best_chromosome))


def _record_of(generation: int, reports) -> GenerationRecord:
    return GenerationRecord(
        generation,
        tuple(r.chromosome.bits for r in reports),
        tuple(r.total_nodes for r in reports),
        tuple(r.solved_count for r in reports),
    )


# ---------------------------------------------------------------------------
# log files
# ---------------------------------------------------------------------------

def write_log_header(fh, fmt: str, config: GaConfig, version: str) -> None:
    if fmt == "json":
        fh.write(json.dumps({"record": "header", "version": version,
                             "seed": config.seed, "config": config.asdict()},
                            sort_keys=True) + "\n")
    else:
        fh.write(f"# version={version} seed={config.seed} "
                 f"config={json.dumps(config.asdict(), sort_keys=True)}\n")
        fh.write(",".join(CSV_COLUMNS) + "\n")


def read_log(path) -> tuple:
    """Parse an evolution log; returns (header_config_dict, records)."""
    header = None
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                _, _, rest = line.partition("config=")
                if rest:
                    header = json.loads(rest)
                continue
            if line.startswith("{"):
                obj = json.loads(line)
                if obj.get("record") == "header":
                    header = obj["config"]
                else:
                    records.append(GenerationRecord.from_json(line))
                continue
            if line.startswith("generation,"):
                continue
            records.append(GenerationRecord.from_csv(line))
    return header, records

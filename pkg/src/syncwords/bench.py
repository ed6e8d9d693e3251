"""Benchmark sweeps comparing the oracle against the approximation algorithms.

A sweep config lists instances and algorithms::

    {
      "seed": 1,
      "budget": 1000000,
      "instances": [
        {"family": "wielandt", "params": {"n": 3}},
        {"family": "random_maximal", "params": {"k": 2, "states": 12}, "count": 5}
      ],
      "algorithms": ["exact", "greedy", "log", "eps:1/2"]
    }

Families: wielandt(n), uniform(k, length), two_word(n) and random_maximal
(k, states; always filtered to synchronizing decoders).  Each (instance,
algorithm) cell becomes one CSV row; oracle failures are recorded in the row,
never fatal.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .automaton import PartialAutomaton, Sync
from .codes import generate_code, literal_decoder
from .randgen import random_synchronizing_decoder
from .search import (
    BudgetExceededError,
    NotSynchronizingError,
    SearchBudget,
    approx_sync_eps,
    approx_sync_log,
    greedy_sync,
    shortest_word_exact,
)

CSV_COLUMNS = (
    "instance",
    "family",
    "n",
    "k",
    "seed",
    "algorithm",
    "length",
    "oracle_length",
    "ratio",
    "time_s",
    "status",
)


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    params: dict[str, int] = field(default_factory=dict)
    count: int = 1


@dataclass(frozen=True)
class BenchConfig:
    instances: tuple[InstanceSpec, ...]
    algorithms: tuple[str, ...]
    seed: int = 0
    max_subset_nodes: int = 1_000_000


def load_config(text: str) -> BenchConfig:
    raw = json.loads(text)
    instances = tuple(
        InstanceSpec(
            spec["family"],
            dict(spec.get("params", {})),
            int(spec.get("count", 1)),
        )
        for spec in raw.get("instances", [])
    )
    return BenchConfig(
        instances,
        tuple(raw.get("algorithms", [])),
        int(raw.get("seed", 0)),
        int(raw.get("budget", 1_000_000)),
    )


def _materialize(
    spec: InstanceSpec, index: int, seed: int
) -> tuple[str, PartialAutomaton]:
    params = ",".join(f"{k}={v}" for k, v in sorted(spec.params.items()))
    label = f"{spec.family}({params})"
    if spec.family == "random_maximal":
        rng = random.Random((seed, spec.family, params, index))
        _, A = random_synchronizing_decoder(
            rng, spec.params.get("k", 2), spec.params.get("states", 10)
        )
        return f"{label}#{index}", A
    if spec.count != 1 or index != 0:
        raise ValueError(f"family {spec.family!r} is deterministic; count must be 1")
    code = generate_code(spec.family, **spec.params)
    return label, literal_decoder(code)


def _run_algorithm(A: PartialAutomaton, algorithm: str, budget: SearchBudget):
    if algorithm == "exact":
        witness = shortest_word_exact(A, Sync(), budget)
        if witness is None:
            raise NotSynchronizingError("not synchronizing")
        return witness
    if algorithm == "greedy":
        return greedy_sync(A)
    if algorithm == "log":
        return approx_sync_log(A, budget)
    if algorithm.startswith("eps:"):
        return approx_sync_eps(A, Fraction(algorithm[4:]), budget)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def bench_sweep(config: BenchConfig) -> list[dict[str, object]]:
    """One row per (instance, algorithm), sorted for deterministic output."""
    budget = SearchBudget(max_subset_nodes=config.max_subset_nodes)
    rows: list[dict[str, object]] = []
    for spec in config.instances:
        for index in range(spec.count):
            label, A = _materialize(spec, index, config.seed)
            oracle_len: Optional[int] = None
            oracle_status = "ok"
            try:
                oracle = shortest_word_exact(A, Sync(), budget)
                if oracle is None:
                    oracle_status = "not_synchronizing"
                else:
                    oracle_len = len(oracle.word)
            except BudgetExceededError:
                oracle_status = "budget_exceeded"
            for algorithm in config.algorithms:
                row: dict[str, object] = {
                    "instance": label,
                    "family": spec.family,
                    "n": A.n,
                    "k": A.k,
                    "seed": config.seed,
                    "algorithm": algorithm,
                    "length": "",
                    "oracle_length": "" if oracle_len is None else oracle_len,
                    "ratio": "",
                    "time_s": "",
                    "status": "ok",
                }
                start = time.perf_counter()
                try:
                    witness = _run_algorithm(A, algorithm, budget)
                    row["length"] = len(witness.word)
                    if oracle_len is not None:
                        row["ratio"] = (
                            "1.0000"
                            if oracle_len == len(witness.word)
                            else f"{len(witness.word) / oracle_len:.4f}"
                        )
                    elif oracle_status != "ok":
                        row["status"] = f"oracle_{oracle_status}"
                except NotSynchronizingError:
                    row["status"] = "not_synchronizing"
                except BudgetExceededError:
                    row["status"] = "budget_exceeded"
                row["time_s"] = f"{time.perf_counter() - start:.4f}"
                rows.append(row)
    rows.sort(key=lambda r: (str(r["instance"]), str(r["algorithm"])))
    return rows


def rows_to_csv(rows: list[dict[str, object]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()

"""Empirical thresholds for monochromatic sumsets inside {1..M}.

A coloring of {1..M} is "bad" for size k when no k-element X drawn from
{1..x_max} has all its pairwise sums (doubles included) in one color.  X
ranges over {1..floor(M/2)} by default so that X + X stays inside the
colored universe; the bound is a parameter because that finitization
convention is a choice, not a theorem.

find_bad_coloring hunts for a bad coloring by depth-first search over
assignments with two exact devices: the color of 1 is pinned to 0 (color
names are interchangeable, and the lexicographically least bad coloring
has color 0 at position 1), and after coloring an even position t = 2x
every X with max(X) = x has its full sumset colored, so a monochromatic
one kills the whole subtree.  A surviving leaf is re-verified by a fresh
exhaustive scan before being reported.

threshold_scan drives the hunt for M = 1..M_max and classifies each M as
ESCAPABLE (a verified bad coloring exists), FORCED (the search space was
exhausted: every coloring admits a monochromatic sumset), or UNDECIDED
(budget ran out).  The coloring space is always split into the same fixed
prefix tasks whatever the worker count, each task gets the full budget,
and the first witness in task order wins, so results are reproducible
bit for bit under any parallelism.  FORCED verdicts are monotone in M;
the scan asserts this and aborts loudly on a violation, since one would
mean the X-range convention was broken somewhere.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from multiprocessing import get_context
from pathlib import Path
from typing import Callable, Iterable, Sequence

FORCED = "FORCED"
ESCAPABLE = "ESCAPABLE"
UNDECIDED = "UNDECIDED"

DEFAULT_CHECKPOINT_INTERVAL = 100_000


@dataclass(frozen=True)
class NatColoring:
    """Coloring of {1..M}; colors[i-1] is the color of i."""

    r: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("need at least one color")
        bad = [c for c in self.colors if not 0 <= c < self.r]
        if bad:
            raise ValueError(f"colors out of range for r={self.r}: {bad}")

    @property
    def M(self) -> int:
        return len(self.colors)

    def color_of(self, i: int) -> int:
        if not 1 <= i <= self.M:
            raise ValueError(f"{i} outside the colored universe 1..{self.M}")
        return self.colors[i - 1]

    def serialize(self) -> str:
        return "".join(f"{i}:{c}\n" for i, c in enumerate(self.colors, start=1))

    @classmethod
    def parse(cls, text: str, r: int) -> "NatColoring":
        table = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            left, _, right = line.partition(":")
            table[int(left)] = int(right)
        if set(table) != set(range(1, len(table) + 1)):
            raise ValueError(f"positions must be exactly 1..{len(table)}")
        return cls(r=r, colors=tuple(table[i] for i in range(1, len(table) + 1)))


def _x_limit(M: int, x_max: int | None) -> int:
    limit = M // 2 if x_max is None else x_max
    if limit < 0 or 2 * limit > M:
        raise ValueError(f"x_max={limit} puts sums past the universe 1..{M}")
    return limit


def has_mono_sumset(coloring: NatColoring, k: int, x_max: int | None = None):
    """Lexicographically least X of size k with X + X monochromatic, else None.

    The scan is exhaustive over subsets of {1..x_max}, so None is a proof
    for the given coloring.
    """
    if k < 1:
        raise ValueError("witness size must be positive")
    limit = _x_limit(coloring.M, x_max)
    for X in combinations(range(1, limit + 1), k):
        sums = {a + b for a, b in combinations(X, 2)} | {2 * a for a in X}
        seen = {coloring.color_of(s) for s in sums}
        if len(seen) == 1:
            return X
    return None


@dataclass(frozen=True)
class BadSearch:
    """Outcome of a bad-coloring hunt; exhausted distinguishes a completed
    scan from a budget cutoff when no coloring was found."""

    coloring: NatColoring | None
    exhausted: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.coloring is not None


class _SearchBudget(Exception):
    pass


def find_bad_coloring(
    k: int,
    r: int,
    M: int,
    budget: int | None = None,
    x_max: int | None = None,
    forced_prefix: Sequence[int] = (),
    resume_from: Sequence[int] | None = None,
    checkpoint: Callable[[tuple[int, ...], int], None] | None = None,
    checkpoint_interval: int = DEFAULT_CHECKPOINT_INTERVAL,
) -> BadSearch:
    """Depth-first hunt for a coloring of {1..M} without a monochromatic
    k-sumset, in lexicographic order of assignments.

    forced_prefix pins the colors of the first positions (the task
    decomposition hook); an empty prefix pins only color(1) = 0.
    resume_from fast-forwards to a previously checkpointed assignment
    prefix, skipping every branch the earlier run already cleared.  The
    checkpoint callback receives (assignment prefix, nodes) every
    checkpoint_interval nodes.
    """
    if k < 1 or r < 1 or M < 0:
        raise ValueError("need k >= 1, r >= 1, M >= 0")
    limit = _x_limit(M, x_max)
    if len(forced_prefix) > M:
        raise ValueError("forced prefix longer than the universe")
    bad_values = [c for c in forced_prefix if not 0 <= c < r]
    if bad_values:
        raise ValueError(f"forced prefix colors out of range: {bad_values}")
    if resume_from is not None:
        for i, c in enumerate(forced_prefix):
            if i < len(resume_from) and resume_from[i] != c:
                raise ValueError("resume point contradicts the forced prefix")

    assignment = [0] * M
    nodes = 0

    def choices(pos: int) -> Sequence[int]:
        if pos <= len(forced_prefix):
            return (forced_prefix[pos - 1],)
        if pos == 1:
            return (0,)
        return range(r)

    def subtree_dead(pos: int) -> bool:
        if pos % 2 == 1:
            return False
        x = pos // 2
        if not 1 <= x <= limit:
            return False
        for rest in combinations(range(1, x), k - 1):
            X = rest + (x,)
            sums = {a + b for a, b in combinations(X, 2)} | {2 * a for a in X}
            if len({assignment[s - 1] for s in sums}) == 1:
                return True
        return False

    def walk(pos: int, on_resume_path: bool):
        nonlocal nodes
        if pos > M:
            candidate = NatColoring(r=r, colors=tuple(assignment))
            if has_mono_sumset(candidate, k, x_max=limit) is not None:
                raise RuntimeError(
                    "pruning admitted a coloring with a monochromatic sumset; "
                    "the X-range convention is broken"
                )
            return candidate
        resuming_here = (
            on_resume_path and resume_from is not None and pos <= len(resume_from)
        )
        for color in choices(pos):
            if resuming_here and color < resume_from[pos - 1]:
                continue
            assignment[pos - 1] = color
            nodes += 1
            if budget is not None and nodes > budget:
                raise _SearchBudget
            if checkpoint is not None and nodes % checkpoint_interval == 0:
                checkpoint(tuple(assignment[:pos]), nodes)
            if not subtree_dead(pos):
                result = walk(
                    pos + 1, resuming_here and color == resume_from[pos - 1]
                )
                if result is not None:
                    return result
        return None

    try:
        witness = walk(1, resume_from is not None)
    except _SearchBudget:
        return BadSearch(coloring=None, exhausted=False, nodes=nodes)
    if witness is not None:
        return BadSearch(coloring=witness, exhausted=False, nodes=nodes)
    return BadSearch(coloring=None, exhausted=True, nodes=nodes)


@dataclass(frozen=True)
class ThresholdRecord:
    k: int
    r: int
    M: int
    verdict: str
    witness: NatColoring | None
    # Node counts depend on the schedule (sequential runs stop at the first
    # witness, pooled runs drain every task), so they are diagnostics only.
    nodes: int = field(compare=False)

    def __post_init__(self):
        if self.verdict not in (FORCED, ESCAPABLE, UNDECIDED):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if (self.verdict == ESCAPABLE) != (self.witness is not None):
            raise ValueError("exactly the ESCAPABLE records carry a witness")


def _task_prefixes(r: int, M: int) -> list[tuple[int, ...]]:
    """Fixed decomposition of the c(1)=0 coloring space by short prefixes.

    Depends only on (r, M), never on the worker count, so any schedule
    explores the same tasks and merges to the same answer.
    """
    depth = min(2, max(M - 1, 0))
    return [(0,) + extra for extra in product(range(r), repeat=depth)]


def _run_prefix_task(args):
    k, r, M, budget, x_max, prefix = args
    result = find_bad_coloring(k, r, M, budget=budget, x_max=x_max, forced_prefix=prefix)
    colors = result.coloring.colors if result.coloring is not None else None
    return (colors, result.exhausted, result.nodes)


def _verify_escapable(record_witness: NatColoring, k: int, x_max: int | None) -> None:
    leftover = has_mono_sumset(record_witness, k, x_max=x_max)
    if leftover is not None:
        raise RuntimeError(
            f"stored bad coloring admits the monochromatic sumset X={leftover}"
        )


def _scan_one(
    k: int,
    r: int,
    M: int,
    budget: int | None,
    x_max: int | None,
    workers: int,
    task_hook: Callable[[int, tuple[int, ...]], BadSearch] | None = None,
) -> ThresholdRecord:
    prefixes = _task_prefixes(r, M)
    witness = None
    all_exhausted = True
    nodes = 0
    if workers > 1:
        with get_context().Pool(workers) as pool:
            outcomes = pool.map(
                _run_prefix_task,
                [(k, r, M, budget, x_max, prefix) for prefix in prefixes],
            )
        for colors, exhausted, task_nodes in outcomes:
            nodes += task_nodes
            if colors is not None and witness is None:
                witness = NatColoring(r=r, colors=colors)
            all_exhausted = all_exhausted and exhausted
    else:
        for index, prefix in enumerate(prefixes):
            if task_hook is not None:
                result = task_hook(index, prefix)
            else:
                result = find_bad_coloring(
                    k, r, M, budget=budget, x_max=x_max, forced_prefix=prefix
                )
            nodes += result.nodes
            if result.found:
                witness = result.coloring
                break
            all_exhausted = all_exhausted and result.exhausted
    if witness is not None:
        _verify_escapable(witness, k, x_max)
        return ThresholdRecord(k=k, r=r, M=M, verdict=ESCAPABLE, witness=witness, nodes=nodes)
    if all_exhausted:
        return ThresholdRecord(k=k, r=r, M=M, verdict=FORCED, witness=None, nodes=nodes)
    return ThresholdRecord(k=k, r=r, M=M, verdict=UNDECIDED, witness=None, nodes=nodes)


def threshold_scan(
    k: int,
    r: int,
    M_max: int,
    budget: int | None = None,
    workers: int = 1,
    x_max: int | None = None,
    checkpoint_path: str | Path | None = None,
    checkpoint_interval: int = DEFAULT_CHECKPOINT_INTERVAL,
) -> list[ThresholdRecord]:
    """Classify every M <= M_max as FORCED, ESCAPABLE, or UNDECIDED.

    Witnesses re-verify by a fresh exhaustive scan before being recorded,
    and a FORCED verdict followed by an ESCAPABLE one at larger M aborts
    the run.  With a checkpoint path (single worker only) the scan persists
    completed records plus the in-flight DFS prefix and resumes from them.
    """
    if workers < 1:
        raise ValueError("need at least one worker")
    if checkpoint_path is not None and workers > 1:
        raise ValueError("checkpointing requires a single worker")
    state = _ScanCheckpoint(checkpoint_path, k, r, budget, x_max, checkpoint_interval)
    # M_max is not part of the checkpoint identity: the records for each M
    # are the same no matter how far a run intends to go, so a later run may
    # extend (or truncate its view of) an earlier scan.
    records = state.completed_records()[:M_max]
    forced_seen = any(record.verdict == FORCED for record in records)
    for M in range(len(records) + 1, M_max + 1):
        record = _scan_one(
            k, r, M, budget, x_max, workers, task_hook=state.task_hook_for(M)
        )
        if record.verdict == ESCAPABLE and forced_seen:
            raise RuntimeError(
                f"monotonicity violated: FORCED below M={M} but a bad coloring "
                f"exists at M={M}"
            )
        forced_seen = forced_seen or record.verdict == FORCED
        records.append(record)
        state.record_done(records)
    state.finish()
    return records


class _ScanCheckpoint:
    """Persistence for threshold_scan: completed records plus, inside the
    M being scanned, per-task outcomes and the current DFS prefix."""

    def __init__(self, path, k, r, budget, x_max, interval):
        self.path = Path(path) if path is not None else None
        self.config = {"k": k, "r": r, "budget": budget, "x_max": x_max}
        self.interval = interval
        self.state = {"config": self.config, "records": [], "in_flight": None}
        if self.path is not None and self.path.exists():
            loaded = json.loads(self.path.read_text())
            if loaded.get("config") != self.config:
                raise ValueError(
                    f"checkpoint {self.path} was written for config {loaded.get('config')}"
                )
            self.state = loaded

    def completed_records(self) -> list[ThresholdRecord]:
        records = []
        for row in self.state["records"]:
            witness = (
                NatColoring(r=self.config["r"], colors=tuple(row["witness"]))
                if row["witness"] is not None
                else None
            )
            records.append(
                ThresholdRecord(
                    k=self.config["k"],
                    r=self.config["r"],
                    M=row["M"],
                    verdict=row["verdict"],
                    witness=witness,
                    nodes=row["nodes"],
                )
            )
        return records

    def task_hook_for(self, M: int):
        if self.path is None:
            return None
        in_flight = self.state.get("in_flight")
        done: dict[int, tuple] = {}
        resume_task = None
        resume_prefix = None
        if in_flight is not None and in_flight["M"] == M:
            done = {
                entry["task"]: (entry["exhausted"], entry["nodes"])
                for entry in in_flight["tasks_done"]
            }
            resume_task = in_flight["task"]
            resume_prefix = tuple(in_flight["prefix"])
        tasks_done: list[dict] = [
            {"task": t, "exhausted": e, "nodes": n} for t, (e, n) in sorted(done.items())
        ]

        def hook(index: int, prefix: tuple[int, ...]) -> BadSearch:
            if index in done:
                exhausted, nodes = done[index]
                return BadSearch(coloring=None, exhausted=exhausted, nodes=nodes)

            def save(dfs_prefix: tuple[int, ...], nodes: int) -> None:
                self.state["in_flight"] = {
                    "M": M,
                    "task": index,
                    "prefix": list(dfs_prefix),
                    "nodes": nodes,
                    "tasks_done": tasks_done,
                }
                self._write()

            config = self.config
            result = find_bad_coloring(
                config["k"],
                config["r"],
                M,
                budget=config["budget"],
                x_max=config["x_max"],
                forced_prefix=prefix,
                resume_from=resume_prefix if index == resume_task else None,
                checkpoint=save,
                checkpoint_interval=self.interval,
            )
            if not result.found:
                tasks_done.append(
                    {"task": index, "exhausted": result.exhausted, "nodes": result.nodes}
                )
            return result

        return hook

    def record_done(self, records: list[ThresholdRecord]) -> None:
        if self.path is None:
            return
        self.state["records"] = [
            {
                "M": record.M,
                "verdict": record.verdict,
                "witness": list(record.witness.colors) if record.witness else None,
                "nodes": record.nodes,
            }
            for record in records
        ]
        self.state["in_flight"] = None
        self._write()

    def finish(self) -> None:
        if self.path is not None:
            self._write()

    def _write(self) -> None:
        self.path.write_text(json.dumps(self.state, sort_keys=True, indent=2) + "\n")


def spot_check_forced(
    k: int, r: int, M: int, samples: int, seed: int, x_max: int | None = None
) -> bool:
    """Random colorings must all admit a witness when M is FORCED."""
    rng = random.Random(seed)
    for _ in range(samples):
        coloring = NatColoring(
            r=r, colors=tuple(rng.randrange(r) for _ in range(M))
        )
        if has_mono_sumset(coloring, k, x_max=x_max) is None:
            return False
    return True


def write_csv(
    records: Iterable[ThresholdRecord],
    path: str | Path,
    header_comments: Sequence[str] = (),
) -> list[Path]:
    """Results table plus one witness file per ESCAPABLE record.

    Witness files live next to the table as <stem>-bad-M<M>.txt with
    "i:color" lines; the witness column holds their names.
    """
    path = Path(path)
    written = []
    lines = [f"# {comment}" for comment in header_comments]
    lines.append("k,r,M,verdict,witness")
    for record in records:
        name = ""
        if record.witness is not None:
            name = f"{path.stem}-bad-M{record.M}.txt"
            witness_path = path.with_name(name)
            witness_path.write_text(record.witness.serialize())
            written.append(witness_path)
        lines.append(f"{record.k},{record.r},{record.M},{record.verdict},{name}")
    path.write_text("\n".join(lines) + "\n")
    return [path] + written

"""Experiment harness: scenario geometry, seeded episodes, study tables.

Builds the three built-in worlds, runs seeded episodes with the greedy
controller, records one row per turn (position, chosen action, every
per-action reachable-count, optional counterfactual estimates for the
other embodiments at the current position), and produces the
estimator-quality study table.

Scenario geometry for experiments 2 and 3 follows the reference
renderings cell by cell; the coordinates in the builders are the
authoritative values for this artifact.

File formats
------------
* scenario config: JSON with the fields of ``ScenarioConfig`` (enums by
  name, coordinates as lists);
* trace: two comment header lines (seed + config hash, column names),
  then one CSV row per turn: turn, x, y, z, alive, chosen action, the
  per-action reachable counts in action-set order, then, if recorded,
  the three counterfactual counts (climbing, non-climbing, flying);
* study/plot series: plain text, one "m value" pair per line.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .blockworld import (
    Action,
    Cell,
    Embodiment,
    WorldState,
    action_set,
    render_snapshot,
    step,
)
from .controller import choose_action, counterfactual_stream
from .empowerment import (
    approximation_model,
    estimator_study_distributions,
    mc_discovery_estimate,
    sparse_empowerment,
)

_STUDY_DOMAIN = 3

ALL_EMBODIMENTS = (Embodiment.CLIMBING, Embodiment.NON_CLIMBING, Embodiment.FLYING)

#: sample sizes used for the study curves: every m up to 100, then steps of 10
DEFAULT_SAMPLE_GRID = tuple(range(1, 101)) + tuple(range(110, 1001, 10))


@dataclass
class ScenarioConfig:
    """Complete, serializable definition of one episode."""

    name: str
    dims: tuple[int, int, int]
    earth_boxes: list[tuple[tuple[int, int, int], tuple[int, int, int]]]
    lava_cells: list[tuple[int, int, int]]
    lava_period: int
    agent_start: tuple[int, int, int]
    embodiment: Embodiment
    horizon: int
    samples: int
    turns: int
    seed: int
    record_counterfactuals: bool = False
    snapshot_every: int = 0

    def validate(self) -> None:
        if self.horizon < 1 or self.samples < 1:
            raise ValueError("horizon and samples must be >= 1")
        if self.turns < 0:
            raise ValueError("turns must be >= 0")
        world = build_world(self)  # raises if the start cell is filled/out of bounds
        del world

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dims": list(self.dims),
            "earth_boxes": [[list(lo), list(hi)] for lo, hi in self.earth_boxes],
            "lava_cells": [list(c) for c in self.lava_cells],
            "lava_period": self.lava_period,
            "agent_start": list(self.agent_start),
            "embodiment": self.embodiment.name,
            "horizon": self.horizon,
            "samples": self.samples,
            "turns": self.turns,
            "seed": self.seed,
            "record_counterfactuals": self.record_counterfactuals,
            "snapshot_every": self.snapshot_every,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        return cls(
            name=d["name"],
            dims=tuple(d["dims"]),
            earth_boxes=[(tuple(lo), tuple(hi)) for lo, hi in d["earth_boxes"]],
            lava_cells=[tuple(c) for c in d["lava_cells"]],
            lava_period=int(d["lava_period"]),
            agent_start=tuple(d["agent_start"]),
            embodiment=Embodiment[d["embodiment"]],
            horizon=int(d["horizon"]),
            samples=int(d["samples"]),
            turns=int(d["turns"]),
            seed=int(d["seed"]),
            record_counterfactuals=bool(d.get("record_counterfactuals", False)),
            snapshot_every=int(d.get("snapshot_every", 0)),
        )

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def save_config(cfg: ScenarioConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return ScenarioConfig.from_dict(json.load(fh))


def build_world(cfg: ScenarioConfig) -> WorldState:
    grid = np.zeros(cfg.dims, dtype=np.uint8)
    for lo, hi in cfg.earth_boxes:
        (x0, y0, z0), (x1, y1, z1) = lo, hi
        grid[x0 : x1 + 1, y0 : y1 + 1, z0 : z1 + 1] = Cell.EARTH
    for x, y, z in cfg.lava_cells:
        grid[x, y, z] = Cell.LAVA
    return WorldState(grid, cfg.agent_start, lava_period=cfg.lava_period)


def build_experiment1(embodiment: Embodiment, seed: int) -> ScenarioConfig:
    """3x3x8 column world, lowest 5 levels earth, agent centered on top.

    1000 turns of 15-step empowerment from 1000 samples; no lava. The
    embodiment is the experiment variable.
    """
    return ScenarioConfig(
        name=f"exp1-{embodiment.name.lower().replace('_', '')}",
        dims=(3, 3, 8),
        earth_boxes=[((0, 0, 0), (2, 2, 4))],
        lava_cells=[],
        lava_period=0,
        agent_start=(1, 1, 5),
        embodiment=embodiment,
        horizon=15,
        samples=1000,
        turns=1000,
        seed=seed,
    )


def build_experiment2(seed: int) -> ScenarioConfig:
    """Two-layer plateau split by a lava line into a 2-row and a 3-row side.

    Footprint 6x5, height 5. The lava row sits in the top earth layer at
    x=2; the agent starts on the surface corner of the smaller (x < 2)
    side. 50 turns: long enough for the bridge crossing to show.
    """
    return ScenarioConfig(
        name="exp2",
        dims=(6, 5, 5),
        earth_boxes=[
            ((0, 0, 0), (5, 4, 1)),
            ((0, 0, 2), (1, 4, 2)),
            ((3, 0, 2), (5, 4, 2)),
        ],
        lava_cells=[(2, y, 2) for y in range(5)],
        lava_period=1,
        agent_start=(0, 0, 3),
        embodiment=Embodiment.CLIMBING,
        horizon=15,
        samples=1000,
        turns=50,
        seed=seed,
    )


def build_experiment3(seed: int) -> ScenarioConfig:
    """8x3x7 slab world; lava seeds in the surface corner opposite the agent.

    The lower 4 levels are earth; lava spreads once every 5 turns and,
    unconstrained, covers the whole surface. 300 turns.
    """
    return ScenarioConfig(
        name="exp3",
        dims=(8, 3, 7),
        earth_boxes=[((0, 0, 0), (7, 2, 3))],
        lava_cells=[(7, 2, 4)],
        lava_period=5,
        agent_start=(0, 0, 4),
        embodiment=Embodiment.CLIMBING,
        horizon=15,
        samples=1000,
        turns=300,
        seed=seed,
    )


BUILTIN_SCENARIOS = {
    "exp1-climb": lambda seed: build_experiment1(Embodiment.CLIMBING, seed),
    "exp1-noclimb": lambda seed: build_experiment1(Embodiment.NON_CLIMBING, seed),
    "exp1-fly": lambda seed: build_experiment1(Embodiment.FLYING, seed),
    "exp2": build_experiment2,
    "exp3": build_experiment3,
}


@dataclass
class TurnRecord:
    """State at decision time plus the decision and its estimates."""

    turn: int
    position: tuple[int, int, int]
    alive: bool
    chosen: Action
    action_counts: list[int]
    counterfactual_counts: tuple[int, int, int] | None = None


@dataclass
class EpisodeResult:
    config: ScenarioConfig
    records: list[TurnRecord]
    initial_world: WorldState
    final_world: WorldState
    snapshots: dict[int, str] = field(default_factory=dict)


def _counterfactual_counts(w: WorldState, cfg: ScenarioConfig) -> tuple[int, int, int]:
    counts = []
    for emb in ALL_EMBODIMENTS:
        est = sparse_empowerment(
            w, emb, cfg.horizon, cfg.samples, counterfactual_stream(cfg.seed, w.turn, emb)
        )
        counts.append(est.reachable_count)
    return tuple(counts)


def run_episode(cfg: ScenarioConfig) -> EpisodeResult:
    """Run one seeded episode; fully deterministic given the config."""
    cfg.validate()
    initial = build_world(cfg)
    w = initial
    records: list[TurnRecord] = []
    snapshots: dict[int, str] = {}
    if cfg.snapshot_every > 0:
        snapshots[0] = render_snapshot(w)
    for _ in range(cfg.turns):
        decision = choose_action(w, cfg.embodiment, cfg.horizon, cfg.samples, cfg.seed)
        cf = _counterfactual_counts(w, cfg) if cfg.record_counterfactuals else None
        records.append(
            TurnRecord(
                turn=w.turn,
                position=w.agent_pos,
                alive=w.alive,
                chosen=decision.chosen,
                action_counts=decision.counts(),
                counterfactual_counts=cf,
            )
        )
        w = step(w, decision.chosen, cfg.embodiment)
        if cfg.snapshot_every > 0 and w.turn % cfg.snapshot_every == 0:
            snapshots[w.turn] = render_snapshot(w)
    return EpisodeResult(cfg, records, initial, w, snapshots)


def write_trace(result: EpisodeResult, path) -> None:
    cfg = result.config
    acts = action_set(cfg.embodiment)
    cols = ["turn", "x", "y", "z", "alive", "action"]
    cols += [f"n_{a.name.lower()}" for a in acts]
    if cfg.record_counterfactuals:
        cols += ["cf_climbing", "cf_non_climbing", "cf_flying"]
    lines = [
        f"# scenario={cfg.name} seed={cfg.seed} config_sha256={cfg.config_hash()}",
        "# " + ",".join(cols),
    ]
    for r in result.records:
        x, y, z = r.position
        row = [str(r.turn), str(x), str(y), str(z), "1" if r.alive else "0", r.chosen.name]
        row += [str(c) for c in r.action_counts]
        if cfg.record_counterfactuals:
            row += [str(c) for c in r.counterfactual_counts]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# --- outcome classification for the spreading-lava scenario -----------------

class Outcome(Enum):
    ISLAND = "island"
    CAVE = "cave"
    DAM = "dam"
    OTHER = "other"


#: minimum size of a surviving walkable surface region to call it a dam
DAM_MIN_REGION = 1


def _component(cells: set[tuple[int, int]], start: tuple[int, int]) -> set[tuple[int, int]]:
    todo = [start]
    seen = {start}
    while todo:
        x, y = todo.pop()
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if (nx, ny) in cells and (nx, ny) not in seen:
                seen.add((nx, ny))
                todo.append((nx, ny))
    return seen


def classify_outcome_exp3(final: WorldState, surface_level: int = 4) -> Outcome:
    """Label the end state of a spreading-lava episode.

    ``surface_level`` is the z level the agent walked on initially (the
    level the lava seed occupies). Island: the live agent stands on an
    earth platform at that level whose in-bounds lateral border is all
    lava. Cave: the live agent is below the original surface with earth
    somewhere above it in its column. Dam: a connected walkable region of
    at least ``DAM_MIN_REGION`` empty cells survives at the surface
    level. Dead agents and everything else: Other.
    """
    W, D, H = final.dims
    L = surface_level
    ax, ay, az = final.agent_pos
    if not final.alive:
        return Outcome.OTHER

    if az == L + 1 and final.grid[ax, ay, L] == Cell.EARTH:
        earth_at_l = {
            (x, y) for x in range(W) for y in range(D) if final.grid[x, y, L] == Cell.EARTH
        }
        comp = _component(earth_at_l, (ax, ay))
        surrounded = True
        border = 0
        for x, y in comp:
            for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if (nx, ny) in comp:
                    continue
                if 0 <= nx < W and 0 <= ny < D:
                    border += 1
                    if final.grid[nx, ny, L] != Cell.LAVA:
                        surrounded = False
        if surrounded and border > 0:
            return Outcome.ISLAND

    if az < L and any(final.grid[ax, ay, z] == Cell.EARTH for z in range(az + 1, H)):
        return Outcome.CAVE

    walkable = {
        (x, y)
        for x in range(W)
        for y in range(D)
        if final.grid[x, y, L] == Cell.EMPTY and L > 0 and final.grid[x, y, L - 1] == Cell.EARTH
    }
    while walkable:
        comp = _component(walkable, next(iter(walkable)))
        if len(comp) >= DAM_MIN_REGION:
            return Outcome.DAM
        walkable -= comp

    return Outcome.OTHER


# --- estimator-quality study -------------------------------------------------

@dataclass
class StudyResult:
    """Discovery-simulation means and model values per distribution and m."""

    sample_grid: list[int]
    reps: int
    seed: int
    simulated: np.ndarray  # shape (5, len(sample_grid))
    model: np.ndarray  # shape (5, len(sample_grid))


def _study_stream(seed: int, dist_index: int, samples: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(_STUDY_DOMAIN, dist_index, samples))
    )


def run_estimator_study(sample_grid=None, reps: int = 1000, seed: int = 0) -> StudyResult:
    """Simulated discovery curves and model curves for the five benchmarks.

    Each (distribution, m) cell gets its own derived stream, so the table
    is reproducible point-wise regardless of grid composition.
    """
    grid = list(sample_grid) if sample_grid is not None else list(DEFAULT_SAMPLE_GRID)
    if not grid:
        raise ValueError("sample grid must be non-empty")
    dists = estimator_study_distributions()
    sim = np.empty((len(dists), len(grid)))
    model = np.empty_like(sim)
    for i, p in enumerate(dists):
        for j, m in enumerate(grid):
            sim[i, j] = mc_discovery_estimate(p, m, reps, _study_stream(seed, i, m))
            model[i, j] = approximation_model(p, m)
    return StudyResult(grid, reps, seed, sim, model)


def write_series(path, ms, values) -> None:
    """Two whitespace-separated columns "m value", one line per sample size."""
    with open(path, "w", encoding="utf-8") as fh:
        for m, v in zip(ms, values):
            fh.write(f"{m} {v:.12g}\n")


def write_study(result: StudyResult, out_dir) -> list[str]:
    """Write sim_p{i}.txt and model_p{i}.txt series files; returns the names."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(result.simulated.shape[0]):
        for prefix, table in (("sim", result.simulated), ("model", result.model)):
            name = f"{prefix}_p{i + 1}.txt"
            write_series(out / name, result.sample_grid, table[i])
            names.append(name)
    return names

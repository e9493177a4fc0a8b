"""Deterministic voxel block world: cells, embodiments, actions, dynamics.

The world is a dense (W, D, H) grid of cells (empty / earth / lava) plus a
single agent with a position, a one-slot inventory, an alive flag and a
turn counter. All operations are pure: they return a new ``WorldState``
and never modify their input.

Turn structure: ``step`` = ``apply_action`` then ``world_update``.

Action semantics (for the agent's chosen action):

* Cardinal move: enter the target cell if empty. If it is filled, a
  climbing agent moves onto the cell above the target when that cell is
  free (1-step climb); everyone else is blocked. Flying agents are
  blocked by any filled target but may additionally move straight up or
  down into empty cells. Moves out of bounds are blocked.
* Interact(direction): with an empty inventory and an earth target, take
  the block (target becomes empty). With a held block and an empty
  target, place it. Everything else, lava included, is a no-op.
* DoNothing: no change. Destroy: discard the held block, if any.

World update (every turn, after the action):

1. turn counter increments;
2. gravity: a live, non-flying agent over an empty cell drops exactly
   one cell;
3. on turns divisible by ``lava_period``, lava spreads synchronously
   over the pre-update lava set: lava over an empty cell fills the cell
   below; lava sitting on earth fills its empty N/S/E/W neighbours; lava
   over lava does not spread sideways. Lava never enters the cell the
   agent occupies (dead agents still block it);
4. death check: a live agent with lava in any of its 6 face-adjacent
   cells dies. Dead agents never act again, do not fall, and keep
   blocking their cell.

Coordinates: x grows east, y grows north, z grows up. World boundaries
are impassable; any move or interact targeting out of bounds is a no-op.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _sim


class Cell(IntEnum):
    EMPTY = _sim.EMPTY
    EARTH = _sim.EARTH
    LAVA = _sim.LAVA


class Embodiment(IntEnum):
    CLIMBING = _sim.CLIMBING
    NON_CLIMBING = _sim.NON_CLIMBING
    FLYING = _sim.FLYING


class Inventory(IntEnum):
    EMPTY = 0
    HOLDS_EARTH = 1


class Action(IntEnum):
    MOVE_NORTH = _sim.MOVE_NORTH
    MOVE_EAST = _sim.MOVE_EAST
    MOVE_SOUTH = _sim.MOVE_SOUTH
    MOVE_WEST = _sim.MOVE_WEST
    MOVE_UP = _sim.MOVE_UP
    MOVE_DOWN = _sim.MOVE_DOWN
    INTERACT_UP = _sim.INTERACT_UP
    INTERACT_DOWN = _sim.INTERACT_DOWN
    INTERACT_NORTH = _sim.INTERACT_NORTH
    INTERACT_SOUTH = _sim.INTERACT_SOUTH
    INTERACT_EAST = _sim.INTERACT_EAST
    INTERACT_WEST = _sim.INTERACT_WEST
    DO_NOTHING = _sim.DO_NOTHING
    DESTROY = _sim.DESTROY


_GROUNDED_ACTIONS = tuple(
    a for a in Action if a not in (Action.MOVE_UP, Action.MOVE_DOWN)
)
_FLYING_ACTIONS = tuple(Action)

# action-id lookup tables used by the samplers, one per embodiment
ACTION_TABLES = {
    Embodiment.CLIMBING: np.array([int(a) for a in _GROUNDED_ACTIONS], dtype=np.int8),
    Embodiment.NON_CLIMBING: np.array([int(a) for a in _GROUNDED_ACTIONS], dtype=np.int8),
    Embodiment.FLYING: np.array([int(a) for a in _FLYING_ACTIONS], dtype=np.int8),
}


def action_set(embodiment: Embodiment) -> tuple[Action, ...]:
    """Ordered action alphabet of an embodiment.

    Climbing and non-climbing agents share the same 12 actions (4 cardinal
    moves, 6 interacts, do-nothing, destroy); flying agents additionally
    get MOVE_UP and MOVE_DOWN for 14. Order follows the ``Action`` enum
    and is part of the trace/file contract.
    """
    if embodiment == Embodiment.FLYING:
        return _FLYING_ACTIONS
    return _GROUNDED_ACTIONS


@dataclass
class WorldState:
    """Full world snapshot. Treated as an immutable value by all operations."""

    grid: np.ndarray  # uint8, shape (W, D, H)
    agent_pos: tuple[int, int, int]
    inventory: Inventory = Inventory.EMPTY
    alive: bool = True
    turn: int = 0
    lava_period: int = 0  # 0 disables lava spread

    def __post_init__(self):
        self.grid = np.ascontiguousarray(self.grid, dtype=np.uint8)
        if self.grid.ndim != 3:
            raise ValueError("grid must be a 3-D array")
        x, y, z = self.agent_pos
        if not self.in_bounds(x, y, z):
            raise ValueError(f"agent position {self.agent_pos} out of bounds {self.dims}")
        if self.grid[x, y, z] != Cell.EMPTY:
            raise ValueError("agent must occupy an empty cell")
        if self.turn < 0:
            raise ValueError("turn must be non-negative")
        if self.lava_period < 0:
            raise ValueError("lava_period must be >= 0")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.grid.shape

    @classmethod
    def empty(cls, dims, agent_pos, **kwargs) -> "WorldState":
        return cls(np.zeros(dims, dtype=np.uint8), tuple(agent_pos), **kwargs)

    def in_bounds(self, x: int, y: int, z: int) -> bool:
        W, D, H = self.grid.shape
        return 0 <= x < W and 0 <= y < D and 0 <= z < H

    def cell(self, x: int, y: int, z: int) -> Cell:
        return Cell(self.grid[x, y, z])

    def copy(self) -> "WorldState":
        return WorldState(
            self.grid.copy(),
            self.agent_pos,
            self.inventory,
            self.alive,
            self.turn,
            self.lava_period,
        )

    def earth_count(self) -> int:
        return int(np.count_nonzero(self.grid == Cell.EARTH))

    def lava_cells(self) -> list[tuple[int, int, int]]:
        xs, ys, zs = np.nonzero(self.grid == Cell.LAVA)
        return list(zip(xs.tolist(), ys.tolist(), zs.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WorldState):
            return NotImplemented
        return (
            self.agent_pos == other.agent_pos
            and self.inventory == other.inventory
            and self.alive == other.alive
            and self.turn == other.turn
            and self.lava_period == other.lava_period
            and self.grid.shape == other.grid.shape
            and bool(np.array_equal(self.grid, other.grid))
        )


def _unpack(w: WorldState):
    x, y, z = w.agent_pos
    return x, y, z, int(w.inventory), 1 if w.alive else 0, w.turn


def apply_action(w: WorldState, a: Action, e: Embodiment) -> WorldState:
    """Apply the agent's action only (no world update). Pure."""
    if a not in action_set(e):
        raise ValueError(f"action {a!r} not available to embodiment {e!r}")
    grid = w.grid.copy()
    px, py, pz, inv, alive, turn = _unpack(w)
    px, py, pz, inv = _sim.apply_action_kernel(grid, px, py, pz, inv, alive, int(e), int(a))
    return WorldState(grid, (int(px), int(py), int(pz)), Inventory(int(inv)), w.alive, turn, w.lava_period)


def world_update(w: WorldState, e: Embodiment = Embodiment.CLIMBING) -> WorldState:
    """Advance the world one turn: gravity, lava spread, death check. Pure."""
    grid = w.grid.copy()
    px, py, pz, inv, alive, turn = _unpack(w)
    px, py, pz, alive, turn = _sim.world_update_kernel(
        grid, px, py, pz, alive, turn, int(e), w.lava_period
    )
    return WorldState(
        grid, (int(px), int(py), int(pz)), Inventory(inv), bool(alive), int(turn), w.lava_period
    )


def step(w: WorldState, a: Action, e: Embodiment) -> WorldState:
    """One full transition: action, then world update. Pure.

    This is the single transition used by rollouts and the controller.
    """
    if a not in action_set(e):
        raise ValueError(f"action {a!r} not available to embodiment {e!r}")
    grid = w.grid.copy()
    px, py, pz, inv, alive, turn = _unpack(w)
    px, py, pz, inv, alive, turn = _sim.step_kernel(
        grid, px, py, pz, inv, alive, turn, int(e), w.lava_period, int(a)
    )
    return WorldState(
        grid,
        (int(px), int(py), int(pz)),
        Inventory(int(inv)),
        bool(alive),
        int(turn),
        w.lava_period,
    )


# --- voxel snapshot text format ---------------------------------------------
#
# Header line "dims W D H turn T", then one z-layer per paragraph, top
# layer first, layers separated by blank lines. Within a layer, rows run
# north (y = D-1) to south (y = 0) and columns west to east. Characters:
# '.' empty, '#' earth, 'L' lava, 'A' agent over its empty cell ('a' if
# dead). Inventory and lava period are not part of the format.

_CELL_CHARS = {Cell.EMPTY: ".", Cell.EARTH: "#", Cell.LAVA: "L"}
_CHAR_CELLS = {v: k for k, v in _CELL_CHARS.items()}


def render_snapshot(w: WorldState) -> str:
    W, D, H = w.dims
    ax, ay, az = w.agent_pos
    lines = [f"dims {W} {D} {H} turn {w.turn}"]
    for z in range(H - 1, -1, -1):
        lines.append("")
        for y in range(D - 1, -1, -1):
            row = []
            for x in range(W):
                if (x, y, z) == (ax, ay, az):
                    row.append("A" if w.alive else "a")
                else:
                    row.append(_CELL_CHARS[Cell(w.grid[x, y, z])])
            lines.append("".join(row))
    return "\n".join(lines) + "\n"


def parse_snapshot(
    text: str,
    inventory: Inventory = Inventory.EMPTY,
    lava_period: int = 0,
) -> WorldState:
    """Inverse of ``render_snapshot`` (up to inventory and lava period)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("dims "):
        raise ValueError("snapshot must start with a 'dims W D H turn T' header")
    parts = lines[0].split()
    if len(parts) != 6 or parts[4] != "turn":
        raise ValueError(f"malformed snapshot header: {lines[0]!r}")
    W, D, H = int(parts[1]), int(parts[2]), int(parts[3])
    turn = int(parts[5])
    rows = [ln for ln in lines[1:] if ln.strip()]
    if len(rows) != D * H:
        raise ValueError(f"expected {D * H} rows, found {len(rows)}")
    grid = np.zeros((W, D, H), dtype=np.uint8)
    agent = None
    alive = True
    i = 0
    for z in range(H - 1, -1, -1):
        for y in range(D - 1, -1, -1):
            row = rows[i]
            i += 1
            if len(row) != W:
                raise ValueError(f"row {row!r} has width {len(row)}, expected {W}")
            for x, ch in enumerate(row):
                if ch in ("A", "a"):
                    if agent is not None:
                        raise ValueError("more than one agent in snapshot")
                    agent = (x, y, z)
                    alive = ch == "A"
                elif ch in _CHAR_CELLS:
                    grid[x, y, z] = _CHAR_CELLS[ch]
                else:
                    raise ValueError(f"unknown cell character {ch!r}")
    if agent is None:
        raise ValueError("no agent in snapshot")
    return WorldState(grid, agent, inventory, alive, turn, lava_period)


def encode_location(pos, dims) -> int:
    """Pack a coordinate triple into the int code used by the rollout kernel."""
    x, y, z = pos
    W, D, H = dims
    return (x * D + y) * H + z


def decode_location(code: int, dims) -> tuple[int, int, int]:
    W, D, H = dims
    code, z = divmod(code, H)
    x, y = divmod(code, D)
    return (x, y, z)

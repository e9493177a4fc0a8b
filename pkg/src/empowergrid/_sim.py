"""Numba kernels for the voxel world transition and batched rollouts.

Single source of truth for the step semantics. The object layer in
``blockworld`` wraps these kernels; the sampling code in ``empowerment``
feeds pre-drawn action-id matrices straight into ``batch_rollout_kernel``
so results never depend on evaluation order or thread count.

Grid layout: a C-contiguous ``uint8`` array of shape ``(W, D, H)`` indexed
``grid[x, y, z]``; x grows east, y grows north, z grows up. The agent is
never stored in the grid (its cell stays EMPTY).

Lava bookkeeping: lava cells are monotone (nothing ever removes lava),
so the kernels carry an append-only list of encoded lava positions and
iterate only that list on spread turns. Spread targets are collected
from the pre-update state before any cell is written, which keeps the
update synchronous.
"""

import numpy as np
from numba import njit

EMPTY = 0
EARTH = 1
LAVA = 2

CLIMBING = 0
NON_CLIMBING = 1
FLYING = 2

MOVE_NORTH = 0
MOVE_EAST = 1
MOVE_SOUTH = 2
MOVE_WEST = 3
MOVE_UP = 4
MOVE_DOWN = 5
INTERACT_UP = 6
INTERACT_DOWN = 7
INTERACT_NORTH = 8
INTERACT_SOUTH = 9
INTERACT_EAST = 10
INTERACT_WEST = 11
DO_NOTHING = 12
DESTROY = 13

# action id -> target-cell offset (moves 0-5, interacts 6-11)
_OFFSETS = np.array(
    [
        [0, 1, 0],
        [1, 0, 0],
        [0, -1, 0],
        [-1, 0, 0],
        [0, 0, 1],
        [0, 0, -1],
        [0, 0, 1],
        [0, 0, -1],
        [0, 1, 0],
        [0, -1, 0],
        [1, 0, 0],
        [-1, 0, 0],
    ],
    dtype=np.int64,
)


@njit(inline="always")
def _apply_action(grid, px, py, pz, inv, alive, emb, act):
    # Dead agents: every action is a no-op.
    if alive == 0:
        return px, py, pz, inv
    W, D, H = grid.shape
    if act < 6:
        tx = px + _OFFSETS[act, 0]
        ty = py + _OFFSETS[act, 1]
        tz = pz + _OFFSETS[act, 2]
        if 0 <= tx < W and 0 <= ty < D and 0 <= tz < H:
            if act < 4:
                if grid[tx, ty, tz] == EMPTY:
                    px, py, pz = tx, ty, tz
                elif emb == CLIMBING:
                    # 1-step climb: target filled, cell above it free
                    if tz + 1 < H and grid[tx, ty, tz + 1] == EMPTY:
                        px, py, pz = tx, ty, tz + 1
            else:
                # vertical moves (flying embodiment only)
                if grid[tx, ty, tz] == EMPTY:
                    px, py, pz = tx, ty, tz
    elif act < 12:
        tx = px + _OFFSETS[act, 0]
        ty = py + _OFFSETS[act, 1]
        tz = pz + _OFFSETS[act, 2]
        if 0 <= tx < W and 0 <= ty < D and 0 <= tz < H:
            c = grid[tx, ty, tz]
            if inv == 0 and c == EARTH:
                grid[tx, ty, tz] = EMPTY
                inv = 1
            elif inv == 1 and c == EMPTY:
                grid[tx, ty, tz] = EARTH
                inv = 0
            # lava is never takeable; full-inventory-on-filled is a no-op
    elif act == DESTROY:
        inv = 0
    return px, py, pz, inv


@njit(inline="always")
def _collect_lava(grid, lava_buf):
    W, D, H = grid.shape
    n = 0
    for x in range(W):
        for y in range(D):
            for z in range(H):
                if grid[x, y, z] == LAVA:
                    lava_buf[n] = (x * D + y) * H + z
                    n += 1
    return n


@njit(inline="always")
def _world_update(grid, lava_buf, nlava, px, py, pz, alive, turn, emb, lava_period):
    W, D, H = grid.shape
    turn += 1
    # gravity: one cell per turn, flying agents exempt, dead agents frozen
    if alive == 1 and emb != FLYING:
        if pz > 0 and grid[px, py, pz - 1] == EMPTY:
            pz -= 1
    # lava spread, synchronous over the pre-update lava set
    if lava_period > 0 and nlava > 0 and turn % lava_period == 0:
        # collection phase: read-only, targets go to the tail of the list
        tail = nlava
        for i in range(nlava):
            code = lava_buf[i]
            z = code % H
            rest = code // H
            y = rest % D
            x = rest // D
            if z == 0:
                continue  # no cell below: neither spread rule applies
            below = grid[x, y, z - 1]
            if below == EMPTY:
                # fills downward; the agent's body blocks its own cell
                if not (x == px and y == py and z - 1 == pz):
                    lava_buf[tail] = code - 1
                    tail += 1
            elif below == EARTH:
                # supported lava creeps sideways into empty cells
                if x + 1 < W and grid[x + 1, y, z] == EMPTY:
                    if not (x + 1 == px and y == py and z == pz):
                        lava_buf[tail] = code + D * H
                        tail += 1
                if x - 1 >= 0 and grid[x - 1, y, z] == EMPTY:
                    if not (x - 1 == px and y == py and z == pz):
                        lava_buf[tail] = code - D * H
                        tail += 1
                if y + 1 < D and grid[x, y + 1, z] == EMPTY:
                    if not (x == px and y + 1 == py and z == pz):
                        lava_buf[tail] = code + H
                        tail += 1
                if y - 1 >= 0 and grid[x, y - 1, z] == EMPTY:
                    if not (x == px and y - 1 == py and z == pz):
                        lava_buf[tail] = code - H
                        tail += 1
            # lava below: no sideways spread
        # apply phase: write fills, deduplicate, extend the live list
        for i in range(nlava, tail):
            code = lava_buf[i]
            z = code % H
            rest = code // H
            y = rest % D
            x = rest // D
            if grid[x, y, z] != LAVA:
                grid[x, y, z] = LAVA
                lava_buf[nlava] = code
                nlava += 1
    # death check: lava in any of the 6 face-adjacent cells
    if alive == 1 and nlava > 0:
        if px + 1 < W and grid[px + 1, py, pz] == LAVA:
            alive = 0
        elif px - 1 >= 0 and grid[px - 1, py, pz] == LAVA:
            alive = 0
        elif py + 1 < D and grid[px, py + 1, pz] == LAVA:
            alive = 0
        elif py - 1 >= 0 and grid[px, py - 1, pz] == LAVA:
            alive = 0
        elif pz + 1 < H and grid[px, py, pz + 1] == LAVA:
            alive = 0
        elif pz - 1 >= 0 and grid[px, py, pz - 1] == LAVA:
            alive = 0
    return px, py, pz, alive, turn, nlava


@njit(cache=True)
def apply_action_kernel(grid, px, py, pz, inv, alive, emb, act):
    return _apply_action(grid, px, py, pz, inv, alive, emb, act)


@njit(cache=True)
def world_update_kernel(grid, px, py, pz, alive, turn, emb, lava_period):
    W, D, H = grid.shape
    lava_buf = np.empty(5 * W * D * H, dtype=np.int64)
    nlava = _collect_lava(grid, lava_buf)
    px, py, pz, alive, turn, nlava = _world_update(
        grid, lava_buf, nlava, px, py, pz, alive, turn, emb, lava_period
    )
    return px, py, pz, alive, turn


@njit(cache=True)
def step_kernel(grid, px, py, pz, inv, alive, turn, emb, lava_period, act):
    W, D, H = grid.shape
    lava_buf = np.empty(5 * W * D * H, dtype=np.int64)
    nlava = _collect_lava(grid, lava_buf)
    px, py, pz, inv = _apply_action(grid, px, py, pz, inv, alive, emb, act)
    px, py, pz, alive, turn, nlava = _world_update(
        grid, lava_buf, nlava, px, py, pz, alive, turn, emb, lava_period
    )
    return px, py, pz, inv, alive, turn


@njit(cache=True)
def batch_rollout_kernel(grid0, px0, py0, pz0, inv0, alive0, turn0, emb, lava_period, seqs):
    """Run every action-id row of ``seqs`` from the same start state.

    Returns one encoded end location ``(x * D + y) * H + z`` per row.
    Rows are independent; the output is order-free by construction. A
    rollout stops early once the agent dies: a dead agent's location is
    frozen, so the remaining steps cannot change the result.
    """
    W, D, H = grid0.shape
    m, n = seqs.shape
    out = np.empty(m, dtype=np.int64)
    grid = np.empty_like(grid0)
    lava_buf = np.empty(5 * W * D * H, dtype=np.int64)
    lava0 = np.empty(W * D * H, dtype=np.int64)
    nlava0 = _collect_lava(grid0, lava0)
    for i in range(m):
        grid[:, :, :] = grid0
        for t in range(nlava0):
            lava_buf[t] = lava0[t]
        nlava = nlava0
        px, py, pz = px0, py0, pz0
        inv, alive, turn = inv0, alive0, turn0
        for j in range(n):
            if alive == 0:
                break
            act = seqs[i, j]
            px, py, pz, inv = _apply_action(grid, px, py, pz, inv, alive, emb, act)
            px, py, pz, alive, turn, nlava = _world_update(
                grid, lava_buf, nlava, px, py, pz, alive, turn, emb, lava_period
            )
        out[i] = (px * D + py) * H + pz
    return out

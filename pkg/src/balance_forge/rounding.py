"""Slot construction and min-cost matching: the global rounding step."""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field

from .lp import FractionalSolution
from .model import Instance, Orientation

DROP_TOL = 1e-12
TIGHT_TOL = 1e-9


class NoPerfectMatching(RuntimeError):
    pass


@dataclass
class SlotTable:
    """slots[u] is a list of slots; each slot is a list of (edge id, fraction)."""

    slots: dict[str, list[list[tuple[int, float]]]]

    def count(self, u: str) -> int:
        return len(self.slots.get(u, []))

    def fraction(self, eid: int, u: str) -> float:
        return sum(y for slot in self.slots.get(u, []) for e, y in slot if e == eid)

    def top_weight(self, instance: Instance, u: str) -> float:
        """Largest weight in the first slot of u, 0 when u has no slots."""
        first = self.slots.get(u) or [[]]
        return max((float(instance.edge(e).weight(u)) for e, _ in first[0]), default=0.0)


def build_slots(instance: Instance, x: FractionalSolution) -> SlotTable:
    table: dict[str, list[list[tuple[int, float]]]] = {}
    for u in instance.vertices:
        items = []
        for e in instance.delta(u):
            val = x.value(e.id, u)
            if val > DROP_TOL:
                items.append((-float(e.weight(u)), e.id, val))
        if not items:
            table[u] = []
            continue
        items.sort()
        k = max(1, math.ceil(sum(v for _, _, v in items) - 1e-9))
        slots: list[list[tuple[int, float]]] = [[]]
        room = 1.0
        for _, eid, val in items:
            amt = val
            while amt > DROP_TOL:
                if room <= DROP_TOL:
                    if len(slots) == k:
                        # rounding residue beyond the last slot stays in it
                        slots[-1].append((eid, amt))
                        amt = 0.0
                        break
                    slots.append([])
                    room = 1.0
                part = min(room, amt)
                slots[-1].append((eid, part))
                room -= part
                amt -= part
        table[u] = slots
    return SlotTable(table)


@dataclass
class AssignmentGraph:
    jobs: list[int]
    slots: list[tuple[str, int]]
    arcs: dict[int, list[tuple[int, float]]] = field(default_factory=dict)  # job -> [(slot index, cost)]


def assignment_graph(instance: Instance, table: SlotTable) -> AssignmentGraph:
    slots: list[tuple[str, int]] = []
    arcs: dict[int, list[tuple[int, float]]] = {}
    for u in instance.vertices:
        for ell, slot in enumerate(table.slots.get(u, [])):
            sid = len(slots)
            slots.append((u, ell))
            for eid, y in slot:
                if y > 0:
                    arcs.setdefault(eid, []).append((sid, float(instance.edge(eid).cost(u))))
    jobs = sorted(e.id for e in instance.edges)
    for j in jobs:
        arcs.setdefault(j, [])
        # an edge split across two slots is listed once per slot; keep distinct slots
        seen, uniq = set(), []
        for s, c in sorted(arcs[j]):
            if s not in seen:
                seen.add(s)
                uniq.append((s, c))
        arcs[j] = uniq
    return AssignmentGraph(jobs, slots, arcs)


def min_cost_perfect_matching(g: AssignmentGraph) -> dict[int, int]:
    """Min-cost matching saturating every job (successive shortest paths).

    Among optimal matchings the result is lexicographically smallest when
    jobs are read in ascending id and slots by their index in g.slots.
    """
    match_of_job: dict[int, int] = {}
    job_of_slot: dict[int, int] = {}
    u = {j: 0.0 for j in g.jobs}
    v = [0.0] * len(g.slots)
    for root in g.jobs:
        if not g.arcs[root]:
            raise NoPerfectMatching(f"job {root} has no slot")
        dist_job = {root: 0.0}
        dist_slot: dict[int, float] = {}
        came_from: dict[int, int] = {}
        heap = []
        for s, c in g.arcs[root]:
            heapq.heappush(heap, (c - u[root] - v[s], s, root))
        target = None
        while heap:
            d, s, j = heapq.heappop(heap)
            if s in dist_slot:
                continue
            dist_slot[s] = d
            came_from[s] = j
            if s not in job_of_slot:
                target = s
                break
            j2 = job_of_slot[s]
            dist_job[j2] = d
            for t, c in g.arcs[j2]:
                if t not in dist_slot:
                    heapq.heappush(heap, (d + c - u[j2] - v[t], t, j2))
        if target is None:
            raise NoPerfectMatching(f"no augmenting path for job {root}")
        D = dist_slot[target]
        for j, dj in dist_job.items():
            u[j] += D - dj
        for s, ds in dist_slot.items():
            if ds < D:
                v[s] -= D - ds
        s = target
        while True:
            j = came_from[s]
            prev = match_of_job.get(j)
            match_of_job[j] = s
            job_of_slot[s] = j
            if j == root:
                break
            s = prev
    _lexicographic_polish(g, match_of_job, job_of_slot, u, v)
    return match_of_job


def _lexicographic_polish(g, match_of_job, job_of_slot, u, v) -> None:
    """Move each job, in id order, to its smallest slot reachable at zero extra cost.

    With feasible duals (u, v), optimal matchings use only tight arcs and keep
    every slot with v < 0 covered, so an exchange along tight arcs that frees
    only slots with v = 0 preserves optimality.
    """
    cost_of = {j: dict(arcs) for j, arcs in g.arcs.items()}

    def tight(j, s):
        return cost_of[j][s] - u[j] - v[s] <= TIGHT_TOL

    fixed: set[int] = set()
    for job in g.jobs:
        cur = match_of_job[job]
        for s, _ in g.arcs[job]:
            if s >= cur:
                break
            if not tight(job, s):
                continue
            path = _exchange_path(g, job, s, cur, match_of_job, job_of_slot, fixed, tight, v)
            if path is not None:
                _apply(job, s, path, match_of_job, job_of_slot)
                break
        fixed.add(job)


def _exchange_path(g, job, start, cur, match_of_job, job_of_slot, fixed, tight, v):
    """BFS over slots from `start`; a displaced job moves on along tight arcs.

    Ends at cur (a cycle) or at a free slot, the latter only if cur may be freed.
    Returns the list of (job, new slot) moves after `job -> start`.
    """
    can_free_cur = v[cur] >= -TIGHT_TOL
    parent: dict[int, tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        end = s == cur or (s not in job_of_slot and can_free_cur)
        if end:
            moves = []
            while parent[s] is not None:
                prev_slot, mover = parent[s]
                moves.append((mover, s))
                s = prev_slot
            return moves[::-1]
        occupant = job_of_slot.get(s)
        if occupant is None or occupant in fixed or occupant == job:
            continue
        for t, _ in g.arcs[occupant]:
            if t not in parent and t != s and tight(occupant, t):
                parent[t] = (s, occupant)
                queue.append(t)
    return None


def _apply(job, start, moves, match_of_job, job_of_slot) -> None:
    old = match_of_job[job]
    if job_of_slot.get(old) == job:
        del job_of_slot[old]
    for mover, slot in reversed(moves):
        prev = match_of_job[mover]
        if job_of_slot.get(prev) == mover:
            del job_of_slot[prev]
        match_of_job[mover] = slot
        job_of_slot[slot] = mover
    match_of_job[job] = start
    job_of_slot[start] = job


def st_round(instance: Instance, x: FractionalSolution) -> Orientation:
    table = build_slots(instance, x)
    g = assignment_graph(instance, table)
    match = min_cost_perfect_matching(g)
    return Orientation({j: g.slots[s][0] for j, s in match.items()})

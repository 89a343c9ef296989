"""Pure-Python search kernel over integer bitmask states.

Mirrors ``_ckernel.pyx`` exactly (same expansion order and tie-breaking),
so either backend returns the same plan for the same task.
"""
from __future__ import annotations

import heapq
import time

INF = -1  # h value marking a relaxed-unreachable goal

SOLVED, UNSOLVABLE, LIMIT = 0, 1, 2


class Kernel:
    def __init__(self, pt):
        self.n_props = pt.n_props
        self.n_actions = len(pt.cost)
        self.pre_pos = list(pt.pre_pos)
        self.pre_neg = list(pt.pre_neg)
        self.add = list(pt.add)
        self.delete = list(pt.delete)
        self.cost = list(pt.cost)
        self.goal_pos = pt.goal_pos
        self.goal_neg = pt.goal_neg
        self.init = pt.init
        self._triggers = [[] for _ in range(pt.n_props)]
        self._npre = []
        self._adds = []
        for a in range(self.n_actions):
            pre = _bits(self.pre_pos[a])
            self._npre.append(len(pre))
            for p in pre:
                self._triggers[p].append(a)
            self._adds.append(_bits(self.add[a]))
        self._goal_props = _bits(self.goal_pos)

    def successors(self, state: int) -> list[tuple[int, int]]:
        out = []
        for a in range(self.n_actions):
            if state & self.pre_pos[a] == self.pre_pos[a] and not state & self.pre_neg[a]:
                out.append((a, (state & ~self.delete[a]) | self.add[a]))
        return out

    def is_goal(self, state: int) -> bool:
        return state & self.goal_pos == self.goal_pos and not state & self.goal_neg

    def hmax(self, state: int) -> int:
        """Delete-relaxed max-cost estimate; negative preconditions are ignored."""
        n_goals = len(self._goal_props)
        if n_goals == 0:
            return 0
        big = 1 << 62
        cost = [big] * self.n_props
        heap = []
        for p in _bits(state):
            cost[p] = 0
            heap.append((0, p))
        heapq.heapify(heap)
        counter = self._npre[:]
        for a in range(self.n_actions):
            if counter[a] == 0:
                c = self.cost[a]
                for q in self._adds[a]:
                    if c < cost[q]:
                        cost[q] = c
                        heapq.heappush(heap, (c, q))
        is_goal = [False] * self.n_props
        for p in self._goal_props:
            is_goal[p] = True
        left = n_goals
        while heap:
            c, p = heapq.heappop(heap)
            if c > cost[p]:
                continue
            if is_goal[p]:
                is_goal[p] = False
                left -= 1
                if left == 0:
                    return c
            for a in self._triggers[p]:
                counter[a] -= 1
                if counter[a] == 0:
                    nc = c + self.cost[a]
                    for q in self._adds[a]:
                        if nc < cost[q]:
                            cost[q] = nc
                            heapq.heappush(heap, (nc, q))
        return INF

    def astar(self, use_hmax: bool, max_expansions: int, max_seconds: float):
        """Returns (status, action indices, cost, expanded, generated, peak_open)."""
        start = time.perf_counter()
        h = self.hmax if use_hmax else (lambda s: 0)
        init = self.init
        h0 = h(init)
        if h0 == INF:
            return UNSOLVABLE, [], 0, 0, 0, 0
        g = {init: 0}
        parent = {init: (-1, -1)}
        hcache = {init: h0}
        closed = set()
        seq = 0
        heap = [(h0, h0, seq, init)]
        expanded = generated = 0
        peak = 1
        n_actions = self.n_actions
        pre_pos, pre_neg, add, dele, cost = self.pre_pos, self.pre_neg, self.add, self.delete, self.cost
        while heap:
            _, _, _, s = heapq.heappop(heap)
            if s in closed:
                continue
            closed.add(s)
            gs = g[s]
            if self.is_goal(s):
                plan = []
                while True:
                    prev, a = parent[s]
                    if a < 0:
                        break
                    plan.append(a)
                    s = prev
                plan.reverse()
                return SOLVED, plan, gs, expanded, generated, peak
            if expanded >= max_expansions:
                return LIMIT, [], 0, expanded, generated, peak
            if max_seconds > 0 and expanded & 255 == 0 and time.perf_counter() - start > max_seconds:
                return LIMIT, [], 0, expanded, generated, peak
            expanded += 1
            for a in range(n_actions):
                pp = pre_pos[a]
                if s & pp != pp or s & pre_neg[a]:
                    continue
                t = (s & ~dele[a]) | add[a]
                if t in closed:
                    continue
                nt = gs + cost[a]
                old = g.get(t)
                if old is not None and old <= nt:
                    continue
                ht = hcache.get(t)
                if ht is None:
                    ht = h(t)
                    hcache[t] = ht
                if ht == INF:
                    continue
                g[t] = nt
                parent[t] = (s, a)
                seq += 1
                generated += 1
                heapq.heappush(heap, (nt + ht, ht, seq, t))
                if len(heap) > peak:
                    peak = len(heap)
        return UNSOLVABLE, [], 0, expanded, generated, peak


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out

"""Growable planning graph for one bundle level.

Tree mode adds parent links and cost-to-come on top of the undirected
adjacency; roadmap mode tracks connected components with a union-find.
Vertex states live in one capacity-doubling array so nearest-neighbor
queries stay vectorized.
"""

from __future__ import annotations

import heapq

import numpy as np


class LevelGraph:
    def __init__(self, space, tree=False, capacity=64):
        self.space = space
        self.tree = tree
        self._states = np.empty((capacity, space.dim))
        self._n = 0
        self.adj = []            # per-vertex dict: neighbor -> edge cost
        self.parent = []         # tree mode; -1 for roots
        self.cost_to_come = []
        self.children = []       # tree mode
        self._uf = []            # roadmap mode union-find
        # edge list with swap-remove for uniform random edge draws
        self._edges = []
        self._edge_pos = {}

    # -- vertices ------------------------------------------------------------

    @property
    def n(self):
        return self._n

    @property
    def n_edges(self):
        return len(self._edges)

    def state(self, i):
        return self._states[i]

    def states_view(self):
        return self._states[: self._n]

    def add_vertex(self, state):
        if self._n == self._states.shape[0]:
            grown = np.empty((2 * self._states.shape[0], self._states.shape[1]))
            grown[: self._n] = self._states[: self._n]
            self._states = grown
        vid = self._n
        self._states[vid] = state
        self._n += 1
        self.adj.append({})
        self.parent.append(-1)
        self.cost_to_come.append(0.0)
        self.children.append([])
        self._uf.append(vid)
        return vid

    def degree(self, i):
        return len(self.adj[i])

    def degrees(self):
        return np.fromiter((len(a) for a in self.adj), dtype=float, count=self._n)

    # -- edges ---------------------------------------------------------------

    def has_edge(self, i, j):
        return j in self.adj[i]

    def add_edge(self, i, j, cost):
        if i == j or j in self.adj[i]:
            return
        self.adj[i][j] = cost
        self.adj[j][i] = cost
        key = (i, j) if i < j else (j, i)
        self._edge_pos[key] = len(self._edges)
        self._edges.append(key)
        self._union(i, j)

    def remove_edge(self, i, j):
        self.adj[i].pop(j, None)
        self.adj[j].pop(i, None)
        key = (i, j) if i < j else (j, i)
        pos = self._edge_pos.pop(key, None)
        if pos is not None:
            last = self._edges.pop()
            if pos < len(self._edges):
                self._edges[pos] = last
                self._edge_pos[last] = pos

    def random_edge(self, rng):
        if not self._edges:
            raise ValueError("graph has no edges")
        return self._edges[int(rng.integers(len(self._edges)))]

    # -- union-find (edge additions only; used by roadmap planners) ----------

    def _find(self, i):
        root = i
        while self._uf[root] != root:
            root = self._uf[root]
        while self._uf[i] != root:
            self._uf[i], i = root, self._uf[i]
        return root

    def _union(self, i, j):
        ri, rj = self._find(i), self._find(j)
        if ri != rj:
            self._uf[max(ri, rj)] = min(ri, rj)

    def connected(self, i, j):
        return self._find(i) == self._find(j)

    # -- nearest neighbors (intrinsic metric) --------------------------------

    def nearest(self, x):
        d = self.space.distance_many(self.states_view(), x)
        return int(np.argmin(d))

    def k_nearest(self, x, k, exclude=None):
        d = self.space.distance_many(self.states_view(), x)
        if exclude is not None:
            d[exclude] = np.inf
        k = min(k, self._n if exclude is None else self._n - 1)
        if k <= 0:
            return []
        idx = np.argpartition(d, k - 1)[:k]
        return list(idx[np.argsort(d[idx], kind="stable")])

    # -- tree bookkeeping ----------------------------------------------------

    def attach(self, child, parent, cost):
        """Add the tree edge parent->child for a freshly added vertex."""
        self.add_edge(parent, child, cost)
        self.parent[child] = parent
        self.cost_to_come[child] = self.cost_to_come[parent] + cost
        self.children[parent].append(child)

    def reparent(self, child, new_parent, cost):
        """Move child under new_parent and push the cost delta down its subtree."""
        old = self.parent[child]
        if old >= 0:
            self.remove_edge(child, old)
            self.children[old].remove(child)
        self.add_edge(new_parent, child, cost)
        self.parent[child] = new_parent
        self.children[new_parent].append(child)
        delta = self.cost_to_come[new_parent] + cost - self.cost_to_come[child]
        stack = [child]
        while stack:
            v = stack.pop()
            self.cost_to_come[v] += delta
            stack.extend(self.children[v])

    def is_ancestor(self, a, v):
        """True if a lies on the parent chain of v (or a == v)."""
        while v >= 0:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def root_path(self, v):
        """Vertex ids from the tree root down to v."""
        out = [v]
        while self.parent[out[-1]] >= 0:
            out.append(self.parent[out[-1]])
        out.reverse()
        return out

    # -- shortest paths ------------------------------------------------------

    def dijkstra(self, src):
        dist = np.full(self._n, np.inf)
        prev = np.full(self._n, -1, dtype=int)
        dist[src] = 0.0
        pq = [(0.0, src)]
        while pq:
            d, v = heapq.heappop(pq)
            if d > dist[v]:
                continue
            for w, c in self.adj[v].items():
                nd = d + c
                if nd < dist[w]:
                    dist[w] = nd
                    prev[w] = v
                    heapq.heappush(pq, (nd, w))
        return dist, prev

    def shortest_path(self, src, dst, heuristic=None):
        """A* vertex path src..dst; returns (ids, cost) or (None, inf)."""
        if src == dst:
            return [src], 0.0
        h = heuristic if heuristic is not None else (lambda v: 0.0)
        dist = {src: 0.0}
        prev = {}
        pq = [(h(src), src)]
        closed = set()
        while pq:
            _, v = heapq.heappop(pq)
            if v in closed:
                continue
            if v == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(prev[path[-1]])
                path.reverse()
                return path, dist[dst]
            closed.add(v)
            for w, c in self.adj[v].items():
                nd = dist[v] + c
                if nd < dist.get(w, np.inf):
                    dist[w] = nd
                    prev[w] = v
                    heapq.heappush(pq, (nd + h(w), w))
        return None, np.inf

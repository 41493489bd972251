"""Maximum cardinality matching in general graphs.

Classic augmenting-path search with cycle contraction: grow an alternating
BFS tree from each free vertex; an edge between two even vertices of the
same tree closes an odd cycle, which is contracted by rebasing its vertices
onto the cycle's nearest common ancestor.  Cubic in the vertex count, which
is plenty for the instance sizes this package targets.
"""

from __future__ import annotations

from collections import deque


def max_matching(n: int, adjacency: list[list[int]]) -> list[int]:
    """Mate array for a maximum matching; ``mate[v] == -1`` means unmatched."""
    mate = [-1] * n
    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n

    def lowest_common_base(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_cycle_side(v: int, stop: int, child: int, on_cycle: list[bool]) -> None:
        while base[v] != stop:
            on_cycle[base[v]] = True
            on_cycle[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def augment_from(root: int) -> bool:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_tree[i] = False
        in_tree[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adjacency[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    stop = lowest_common_base(v, to)
                    on_cycle = [False] * n
                    mark_cycle_side(v, stop, to, on_cycle)
                    mark_cycle_side(to, stop, v, on_cycle)
                    for i in range(n):
                        if on_cycle[base[i]]:
                            base[i] = stop
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        while to != -1:
                            prev = parent[to]
                            nxt = mate[prev]
                            mate[to] = prev
                            mate[prev] = to
                            to = nxt
                        return True
                    in_tree[mate[to]] = True
                    queue.append(mate[to])
        return False

    for v in range(n):
        if mate[v] == -1:
            augment_from(v)
    return mate


def matching_edges(mate: list[int]) -> list[tuple[int, int]]:
    return [(v, u) for v, u in enumerate(mate) if u > v]


def brute_force_matching_size(n: int, edges: list[tuple[int, int]]) -> int:
    """Reference maximum by exhaustive recursion over the edge list."""
    edges = sorted(set((min(a, b), max(a, b)) for a, b in edges if a != b))

    def best(i: int, used: set[int]) -> int:
        if i == len(edges):
            return 0
        a, b = edges[i]
        res = best(i + 1, used)
        if a not in used and b not in used:
            used.add(a)
            used.add(b)
            res = max(res, 1 + best(i + 1, used))
            used.discard(a)
            used.discard(b)
        return res

    return best(0, set())

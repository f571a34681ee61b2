"""Independent brute-force oracles the fast ones are checked against.

Deliberately naive implementations built on different algorithms than the
package: transitive closure instead of union-find, Floyd-Warshall instead of
BFS, explicit cycle enumeration instead of incremental merging, leaf pruning
instead of merge counting, full permutation scans for topological validity.
"""

from __future__ import annotations

from itertools import combinations, permutations

INF = float("inf")


def _undirected_pairs(g) -> set[tuple[int, int]]:
    return {(min(u, v), max(u, v)) for u, v in g.edges}


def bf_components(g) -> int:
    """Component count via boolean transitive closure."""
    reach = [[i == j for j in range(g.n)] for i in range(g.n)]
    for u, v in _undirected_pairs(g):
        reach[u][v] = reach[v][u] = True
    for k in range(g.n):
        for i in range(g.n):
            if reach[i][k]:
                for j in range(g.n):
                    if reach[k][j]:
                        reach[i][j] = True
    roots = {min(j for j in range(g.n) if reach[i][j]) for i in range(g.n)}
    return len(roots)


def bf_partition(n: int, edges) -> frozenset[frozenset[int]]:
    """Set of components as node sets, via closure over the given edges."""
    reach = [[i == j for j in range(n)] for i in range(n)]
    for u, v in edges:
        a, b = min(u, v), max(u, v)
        reach[a][b] = reach[b][a] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return frozenset(frozenset(j for j in range(n) if reach[i][j]) for i in range(n))


def bf_distances(g) -> list[list[float]]:
    """All-pairs unweighted distances by Floyd-Warshall."""
    dist = [[0 if i == j else INF for j in range(g.n)] for i in range(g.n)]
    for u, v in _undirected_pairs(g):
        dist[u][v] = dist[v][u] = 1
    for k in range(g.n):
        for i in range(g.n):
            dik = dist[i][k]
            if dik is INF:
                continue
            for j in range(g.n):
                alt = dik + dist[k][j]
                if alt < dist[i][j]:
                    dist[i][j] = alt
    return dist


def _cycle_arrangements(nodes: tuple[int, ...]):
    """Every cyclic arrangement of the node subset, up to rotation/reflection."""
    first = nodes[0]
    rest = nodes[1:]
    for perm in permutations(rest):
        if len(perm) > 1 and perm[0] > perm[-1]:
            continue  # skip the mirror image
        yield (first,) + perm


def bf_has_cycle(g) -> bool:
    """Search all node subsets for a closed walk through distinct nodes."""
    edges = _undirected_pairs(g)

    def connected(a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in edges

    for size in range(3, g.n + 1):
        for subset in combinations(range(g.n), size):
            for cycle in _cycle_arrangements(subset):
                if all(connected(cycle[i], cycle[(i + 1) % size]) for i in range(size)):
                    return True
    return False


def bf_is_bipartite(g) -> bool:
    """Bipartite iff no odd cycle exists; enumerate odd-size subsets only."""
    edges = _undirected_pairs(g)

    def connected(a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in edges

    for size in range(3, g.n + 1, 2):
        for subset in combinations(range(g.n), size):
            for cycle in _cycle_arrangements(subset):
                if all(connected(cycle[i], cycle[(i + 1) % size]) for i in range(size)):
                    return False
    return True


def acyclic_by_leaf_pruning(n: int, edges) -> bool:
    """Repeatedly delete vertices of degree <= 1; acyclic iff nothing remains."""
    remaining = {(min(u, v), max(u, v)) for u, v in edges}
    alive = set(range(n))
    changed = True
    while changed and remaining:
        changed = False
        for node in list(alive):
            deg = sum(1 for e in remaining if node in e)
            if deg <= 1:
                alive.discard(node)
                remaining = {e for e in remaining if node not in e}
                changed = True
    return not remaining


def bf_is_spanning_forest(g, es) -> bool:
    """Subset of g's edges, cycle-free, spanning the same components as g."""
    candidate = {(min(u, v), max(u, v)) for u, v in es}
    if not candidate <= _undirected_pairs(g):
        return False
    if not acyclic_by_leaf_pruning(g.n, candidate):
        return False
    return bf_partition(g.n, candidate) == bf_partition(g.n, g.edges)


def bf_valid_topo_orders(g) -> list[tuple[int, ...]]:
    """Every permutation with all directed edges pointing forward (n <= 8)."""
    valid = []
    for perm in permutations(range(g.n)):
        pos = {node: i for i, node in enumerate(perm)}
        if all(pos[u] < pos[v] for u, v in g.edges):
            valid.append(perm)
    return valid


def bf_degree(g, u: int) -> int:
    return sum(1 for a, b in g.edges if u == a or u == b)


def bf_neighbors(g, u: int) -> frozenset[int]:
    out = set()
    for a, b in g.edges:
        if a == u:
            out.add(b)
        elif b == u:
            out.add(a)
    return frozenset(out)

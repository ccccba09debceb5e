from dataclasses import dataclass
from typing import FrozenSet, Iterable, Mapping, Optional, Tuple

import networkx as nx


Edge = Tuple[int, int]

SELF_LOOP_MESSAGE = "Self-loops are not allowed"
LABEL_RANGE_MESSAGE = "Vertex label out of range"
DUPLICATE_EDGE_MESSAGE = "Edge already present"
MISSING_EDGE_MESSAGE = "Edge not present"
NON_INJECTIVE_MESSAGE = "Label map is not injective"


class GraphError(ValueError):
    pass


def canonical_edge(u: int, v: int) -> Edge:
    """Return the (min, max) form of an undirected edge."""
    if u == v:
        raise GraphError(f'{SELF_LOOP_MESSAGE}: ({u}, {v})')
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on the vertices 0..n-1."""

    n: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f'Negative vertex count: {self.n}')
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphError(f'{LABEL_RANGE_MESSAGE} or edge not canonical: ({u}, {v}) with n={self.n}')

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], strict: bool = True) -> 'Graph':
        """Build a graph; with ``strict`` a repeated edge is an error instead of being merged."""
        canonical = set()
        for u, v in edges:
            edge = canonical_edge(int(u), int(v))
            if strict and edge in canonical:
                raise GraphError(f'{DUPLICATE_EDGE_MESSAGE}: {edge}')
            canonical.add(edge)
        return cls(n, frozenset(canonical))

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n, frozenset())

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list:
        """Edges in canonical order, which is also the row order of rigidity matrices."""
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        self._check_label(v)
        return sum(1 for edge in self.edges if v in edge)

    def adjacency_masks(self) -> Tuple[int, ...]:
        """Bitmask of the neighbourhood of every vertex, bit i standing for vertex i."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def non_edges(self) -> list:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if (u, v) not in self.edges]

    def induced_edge_count(self, subset: 'VertexSubset') -> int:
        return induced_edge_count(self, subset)

    def _check_label(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f'{LABEL_RANGE_MESSAGE}: {v} (n={self.n})')


@dataclass(frozen=True)
class VertexSubset:
    members: FrozenSet[int]

    @classmethod
    def of(cls, members: Iterable[int]) -> 'VertexSubset':
        return cls(frozenset(int(v) for v in members))

    @classmethod
    def from_mask(cls, mask: int) -> 'VertexSubset':
        members = []
        v = 0
        while mask:
            if mask & 1:
                members.append(v)
            mask >>= 1
            v += 1
        return cls(frozenset(members))

    @property
    def mask(self) -> int:
        mask = 0
        for v in self.members:
            mask |= 1 << v
        return mask

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list:
        return sorted(self.members)

    def validate(self, graph: Graph) -> None:
        for v in self.members:
            if not 0 <= v < graph.n:
                raise GraphError(f'{LABEL_RANGE_MESSAGE}: {v} (n={graph.n})')


def induced_edge_count(graph: Graph, subset: VertexSubset) -> int:
    """Number of edges with both endpoints in ``subset``."""
    subset.validate(graph)
    members = subset.members
    return sum(1 for u, v in graph.edges if u in members and v in members)


def complete_graph(k: int) -> Graph:
    if k < 1:
        raise GraphError(f'Complete graph needs at least one vertex, got {k}')
    return from_networkx(nx.complete_graph(k))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with the first part on 0..a-1 and the second on a..a+b-1."""
    if a < 1 or b < 1:
        raise GraphError(f'Both parts of a complete bipartite graph must be non-empty, got ({a}, {b})')
    return from_networkx(nx.complete_bipartite_graph(a, b))


def add_edge(graph: Graph, u: int, v: int) -> Graph:
    edge = canonical_edge(u, v)
    graph._check_label(edge[1])
    graph._check_label(edge[0])
    if edge in graph.edges:
        raise GraphError(f'{DUPLICATE_EDGE_MESSAGE}: {edge}')
    return Graph(graph.n, graph.edges | {edge})


def remove_edge(graph: Graph, u: int, v: int) -> Graph:
    edge = canonical_edge(u, v)
    if edge not in graph.edges:
        raise GraphError(f'{MISSING_EDGE_MESSAGE}: {edge}')
    return Graph(graph.n, graph.edges - {edge})


def _check_injective(label_map: Mapping[int, int]) -> None:
    if len(set(label_map.values())) != len(label_map):
        raise GraphError(NON_INJECTIVE_MESSAGE)


def relabel(graph: Graph, label_map: Mapping[int, int], n: Optional[int] = None) -> Graph:
    """Apply an injective label map covering every vertex of ``graph``.

    The result has ``n`` vertices, by default just enough to hold the largest new label.
    """
    missing = [v for v in graph.vertices if v not in label_map]
    if missing:
        raise GraphError(f'Label map does not cover vertices {missing}')
    _check_injective(label_map)
    if any(label < 0 for label in label_map.values()):
        raise GraphError(f'{LABEL_RANGE_MESSAGE}: negative target label')
    size = max(label_map.values(), default=-1) + 1
    if n is None:
        n = size
    elif n < size:
        raise GraphError(f'{LABEL_RANGE_MESSAGE}: target labels need at least {size} vertices, got n={n}')
    return Graph.from_edges(n, ((label_map[u], label_map[v]) for u, v in graph.edges))


def union_with_relabeling(first: Graph, second: Graph, label_map: Mapping[int, int]) -> Graph:
    """Merge ``second`` into ``first`` after relabeling it with ``label_map``.

    Targets below ``first.n`` are glued onto existing vertices; larger targets are new vertices.
    Edges present in both graphs after relabeling are merged.
    """
    moved = relabel(second, label_map)
    n = max(first.n, moved.n)
    return Graph(n, first.edges | moved.edges)


def to_networkx(graph: Graph) -> nx.Graph:
    result = nx.Graph()
    result.add_nodes_from(graph.vertices)
    result.add_edges_from(graph.sorted_edges())
    return result


def from_networkx(nx_graph: nx.Graph) -> Graph:
    n = nx_graph.number_of_nodes()
    if set(nx_graph.nodes) != set(range(n)):
        raise GraphError('networkx graph must be labeled 0..n-1')
    return Graph.from_edges(n, nx_graph.edges)

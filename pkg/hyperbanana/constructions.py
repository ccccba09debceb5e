"""Builders for banana bunches and hyperbananas with a fixed label layout.

Layouts:

* ``banana_bunch(d, b)``: base K_d on ``0..d-1``, banana vertices on ``d..d+b-1``.
* ``hyperbanana(d, b)``: V1 on ``0..d-1``, V2 on ``d..2d-1``, U on ``2d..2d+b-1``.
  The i-th banana vertex of each bunch is glued to the same vertex ``2d+i``.
* ``even_hyperbanana(d, b)``: as above plus E+ between V1 and V2.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Optional, Sequence, Tuple

from .graph import Graph, GraphError, complete_graph, relabel, union_with_relabeling


log = logging.getLogger(__name__)

POSITIVE_PARAMETERS_MESSAGE = "Both d and b must be at least 1"
ODD_DIMENSION_MESSAGE = "Even hyperbananas need an even dimension"


class ConstructionError(ValueError):
    pass


class Family(Enum):
    COMPLETE = 'complete'
    BANANA = 'banana'
    HYPERBANANA = 'hyperbanana'
    EVEN_HYPERBANANA = 'even-hyperbanana'


class EPlusLayout(Enum):
    # (i, d+i) for i < d/2: all endpoints distinct
    MATCHING = 'matching'
    # (0, d+i) for i < d/2: one shared endpoint in V1
    SHARED = 'shared'


class PredictionKind(Enum):
    THEOREM = 'theorem'
    CONJECTURE = 'conjecture'


@dataclass(frozen=True)
class Prediction:
    kind: PredictionKind
    nullity: int


@dataclass(frozen=True)
class BananaBunchLabels:
    base: Tuple[int, ...]
    bananas: Tuple[int, ...]
    d: int
    b: int


@dataclass(frozen=True)
class HyperbananaLabels:
    v1: Tuple[int, ...]
    v2: Tuple[int, ...]
    u: Tuple[int, ...]
    d: int
    b: int
    e_plus: Tuple[Tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        v1, v2, u = set(self.v1), set(self.v2), set(self.u)
        if v1 & v2 or v1 & u or v2 & u:
            raise ConstructionError('V1, V2 and U must be pairwise disjoint')
        if len(self.v1) != self.d or len(self.v2) != self.d or len(self.u) != self.b:
            raise ConstructionError(f'Expected |V1| = |V2| = {self.d} and |U| = {self.b}')
        for x, y in self.e_plus:
            if not ((x in v1 and y in v2) or (x in v2 and y in v1)):
                raise ConstructionError(f'Extra edge ({x}, {y}) does not join V1 to V2')

    @property
    def u_pairs(self) -> list:
        return [(x, y) for i, x in enumerate(self.u) for y in self.u[i + 1:]]


def _check_positive(d: int, b: int) -> None:
    if d < 1 or b < 1:
        raise ConstructionError(f'{POSITIVE_PARAMETERS_MESSAGE}, got d={d}, b={b}')


def henneberg0(graph: Graph, d: int, attach: Sequence[int]) -> Graph:
    """d-Henneberg 0-extension: a new vertex ``n`` joined to the ``d`` vertices in ``attach``."""
    if d > graph.n:
        raise ConstructionError(f'Cannot attach to {d} vertices of a graph with {graph.n}')
    if len(attach) != d:
        raise ConstructionError(f'Expected {d} attachment vertices, got {len(attach)}')
    if len(set(attach)) != d:
        raise ConstructionError(f'Attachment vertices must be distinct: {list(attach)}')
    for v in attach:
        if not 0 <= v < graph.n:
            raise ConstructionError(f'Attachment vertex {v} out of range (n={graph.n})')
    new = graph.n
    return Graph(graph.n + 1, graph.edges | {(v, new) for v in attach})


def banana_bunch(d: int, b: int) -> Tuple[Graph, BananaBunchLabels]:
    _check_positive(d, b)
    graph = complete_graph(d)
    base = tuple(range(d))
    for _ in range(b):
        graph = henneberg0(graph, d, base)
    return graph, BananaBunchLabels(base=base, bananas=tuple(range(d, d + b)), d=d, b=b)


def hyperbanana(d: int, b: int) -> Tuple[Graph, HyperbananaLabels]:
    """Two copies of B_{d,b} glued along their banana vertices."""
    _check_positive(d, b)
    bunch, _ = banana_bunch(d, b)
    n = 2 * d + b
    first_map = {i: i for i in range(d)}
    second_map = {i: d + i for i in range(d)}
    for j in range(b):
        first_map[d + j] = 2 * d + j
        second_map[d + j] = 2 * d + j
    graph = union_with_relabeling(relabel(bunch, first_map, n), bunch, second_map)
    labels = HyperbananaLabels(
        v1=tuple(range(d)),
        v2=tuple(range(d, 2 * d)),
        u=tuple(range(2 * d, n)),
        d=d,
        b=b,
    )
    return graph, labels


def e_plus_edges(d: int, layout: EPlusLayout = EPlusLayout.MATCHING) -> Tuple[Tuple[int, int], ...]:
    half = d // 2
    if layout is EPlusLayout.MATCHING:
        return tuple((i, d + i) for i in range(half))
    return tuple((0, d + i) for i in range(half))


def even_hyperbanana(d: int, b: int,
                     e_plus: EPlusLayout = EPlusLayout.MATCHING) -> Tuple[Graph, HyperbananaLabels]:
    """H+_{d,b}: the hyperbanana H_{d,b} plus d/2 edges between its two K_d."""
    if d % 2 != 0:
        raise ConstructionError(f'{ODD_DIMENSION_MESSAGE}, got d={d}')
    if d < 2:
        raise ConstructionError(f'Even hyperbananas need d >= 2, got d={d}')
    graph, labels = hyperbanana(d, b)
    extra = e_plus_edges(d, e_plus)
    try:
        graph = Graph.from_edges(graph.n, list(graph.edges) + list(extra))
    except GraphError as e:
        raise ConstructionError(str(e)) from e
    return graph, HyperbananaLabels(v1=labels.v1, v2=labels.v2, u=labels.u, d=d, b=b, e_plus=extra)


def in_theorem_family(family: Family, d: int, b: int) -> bool:
    """Whether the Maxwell and flexibility theorems cover these parameters."""
    if family is Family.BANANA:
        return True
    if family is Family.HYPERBANANA:
        return d == 2 * b - 1
    if family is Family.EVEN_HYPERBANANA:
        return d == 2 * b and b >= 2
    return False


def predicted_nullity(family: Family, d: int, b: int) -> Optional[Prediction]:
    trivial = comb(d + 1, 2)
    if family is Family.BANANA:
        return Prediction(PredictionKind.THEOREM, trivial)
    if family is Family.HYPERBANANA and d == 2 * b - 1:
        return Prediction(PredictionKind.THEOREM, trivial + comb(b, 2))
    if family is Family.EVEN_HYPERBANANA and d == 2 * b and b >= 2:
        return Prediction(PredictionKind.CONJECTURE, trivial + comb(b, 2))
    return None


@dataclass(frozen=True)
class FamilyParams:
    """Parameters a graph was generated from; ``n`` is used by the complete family only."""

    family: Family
    d: int
    b: Optional[int] = None
    n: Optional[int] = None
    e_plus: EPlusLayout = EPlusLayout.MATCHING

    def build(self):
        return build_family(self.family, self.d, self.b, self.n, self.e_plus)

    def prediction(self) -> Optional[Prediction]:
        if self.b is None or self.family is Family.COMPLETE:
            return None
        if self.family is Family.EVEN_HYPERBANANA and self.e_plus is not EPlusLayout.MATCHING:
            return None
        return predicted_nullity(self.family, self.d, self.b)

    def to_dict(self) -> dict:
        result = {'family': self.family.value, 'd': self.d}
        if self.b is not None:
            result['b'] = self.b
        if self.n is not None:
            result['n'] = self.n
        if self.family is Family.EVEN_HYPERBANANA:
            result['e_plus'] = self.e_plus.value
        return result


def build_family(family: Family, d: int, b: Optional[int] = None, n: Optional[int] = None,
                 e_plus: EPlusLayout = EPlusLayout.MATCHING):
    """Build a graph of ``family``; returns ``(graph, labels)`` where labels may be None."""
    if family is Family.COMPLETE:
        if n is None:
            raise ConstructionError('The complete family needs a vertex count')
        return complete_graph(n), None
    if b is None:
        raise ConstructionError(f'The {family.value} family needs b')
    if family is Family.BANANA:
        graph, labels = banana_bunch(d, b)
    elif family is Family.HYPERBANANA:
        graph, labels = hyperbanana(d, b)
    else:
        graph, labels = even_hyperbanana(d, b, e_plus)
    if not in_theorem_family(family, d, b):
        log.warning(f'{family.value} with d={d}, b={b} is outside the Maxwell families '
                    f'(odd: d = 2b-1, even: d = 2b)')
    return graph, labels

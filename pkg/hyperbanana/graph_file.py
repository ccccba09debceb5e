"""Plain-text graph files.

Format::

    # comment lines start with '#'
    # family=hyperbanana d=3 b=2
    d n m
    u v        (m lines, 0-based labels)

A ``family=`` comment records the generating parameters. It is read back only
when the edges are exactly the graph those parameters build.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .constructions import ConstructionError, EPlusLayout, Family, FamilyParams
from .graph import Graph, GraphError


log = logging.getLogger(__name__)


class GraphFileError(ValueError):

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f'line {line}: {message}' if line is not None else message)


@dataclass(frozen=True)
class GraphFile:
    d: int
    graph: Graph
    family: Optional[FamilyParams] = None


def _parse_family(text: str, line: int) -> FamilyParams:
    fields = {}
    for token in text.split():
        key, sep, value = token.partition('=')
        if not sep:
            raise GraphFileError(f'Malformed family token {token!r}', line)
        fields[key] = value
    try:
        family = Family(fields.pop('family'))
        params = FamilyParams(
            family=family,
            d=int(fields.pop('d')),
            b=int(fields.pop('b')) if 'b' in fields else None,
            n=int(fields.pop('n')) if 'n' in fields else None,
            e_plus=EPlusLayout(fields.pop('e_plus', EPlusLayout.MATCHING.value)),
        )
    except (KeyError, ValueError) as e:
        raise GraphFileError(f'Malformed family comment: {e}', line) from e
    if fields:
        raise GraphFileError(f'Unknown family fields {sorted(fields)}', line)
    return params


def _integers(text: str, count: int, line: int) -> List[int]:
    tokens = text.split()
    if len(tokens) != count:
        raise GraphFileError(f'Expected {count} integers, got {len(tokens)}', line)
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        raise GraphFileError(f'Not an integer: {e}', line) from e


def _family_matches(family: FamilyParams, d: int, graph: Graph) -> bool:
    if family.d != d:
        return False
    try:
        built, _ = family.build()
    except ConstructionError:
        return False
    return built == graph


def parse_graph_file(text: str) -> GraphFile:
    header: Optional[Tuple[int, int, int, int]] = None
    family = None
    edges: List[Tuple[int, int, int]] = []
    line_number = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            body = line[1:].strip()
            if body.startswith('family=') and header is None:
                family = _parse_family(body, line_number)
            continue
        if header is None:
            d, n, m = _integers(line, 3, line_number)
            if d < 1 or n < 0 or m < 0:
                raise GraphFileError(f'Invalid header "{line}"', line_number)
            header = (d, n, m, line_number)
            continue
        u, v = _integers(line, 2, line_number)
        edges.append((u, v, line_number))
    if header is None:
        raise GraphFileError('Missing header line "d n m"', line_number or None)
    d, n, m, header_line = header
    if len(edges) != m:
        raise GraphFileError(f'Header declares {m} edges but {len(edges)} edge lines follow', header_line)
    seen = set()
    for u, v, number in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFileError(f'Vertex label out of range 0..{n - 1}: ({u}, {v})', number)
        if u == v:
            raise GraphFileError(f'Self-loop ({u}, {v})', number)
        edge = (min(u, v), max(u, v))
        if edge in seen:
            raise GraphFileError(f'Duplicate edge ({u}, {v})', number)
        seen.add(edge)
    try:
        graph = Graph.from_edges(n, seen)
    except GraphError as e:
        raise GraphFileError(str(e)) from e
    if family is not None and not _family_matches(family, d, graph):
        log.warning(f'Ignoring the comment family={family.family.value} d={family.d}: '
                    f'the edges do not form that graph')
        family = None
    return GraphFile(d=d, graph=graph, family=family)


def serialize_graph_file(graph_file: GraphFile) -> str:
    lines = []
    if graph_file.family is not None:
        tokens = [f'{key}={value}' for key, value in graph_file.family.to_dict().items()]
        lines.append('# ' + ' '.join(tokens))
    graph = graph_file.graph
    lines.append(f'{graph_file.d} {graph.n} {graph.m}')
    lines.extend(f'{u} {v}' for u, v in graph.sorted_edges())
    return '\n'.join(lines) + '\n'


def read_graph_file(path: str) -> GraphFile:
    with open(path) as f:
        return parse_graph_file(f.read())


def write_graph_file(path: str, graph_file: GraphFile) -> None:
    with open(path, 'w') as f:
        f.write(serialize_graph_file(graph_file))

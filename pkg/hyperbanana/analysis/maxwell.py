"""Exhaustive check of the Maxwell counting conditions.

Subsets are bitmasks with vertex i on bit i and are scanned in ascending
numeric order. The low ``LOW_BITS`` vertices are handled as a block: their
induced counts for every subset come from one Gray-code walk, and for each
assignment of the remaining (high) vertices the cross edges are a
matrix-vector product over that block.
"""
import logging
import multiprocessing
import time
from concurrent.futures import Future
from dataclasses import dataclass
from os import getenv
from typing import Optional, Sequence, Tuple

import numpy as np

from ..graph import Graph, VertexSubset, induced_edge_count
from .utils import maxwell_bound, resolve_parallelism, run_jobs, trivial_motion_dim


log = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 28
LOW_BITS = 12
CANCEL_CHECK_INTERVAL = 64
NO_WITNESS = 2 ** 62

TOO_FEW_VERTICES_MESSAGE = "The Maxwell conditions need at least d vertices"


class MaxwellError(ValueError):
    pass


class EnumerationCapError(MaxwellError):
    pass


@dataclass(frozen=True)
class Condition1:
    expected: int
    actual: int
    passed: bool

    @property
    def excess(self) -> int:
        return self.actual - self.expected


@dataclass(frozen=True)
class Witness:
    members: Tuple[int, ...]
    induced_edges: int
    bound: int

    @property
    def subset(self) -> VertexSubset:
        return VertexSubset.of(self.members)


@dataclass(frozen=True)
class Condition2:
    passed: bool
    witness: Optional[Witness]
    subsets_checked: int


@dataclass(frozen=True)
class MaxwellReport:
    d: int
    condition1: Condition1
    condition2: Optional[Condition2]
    elapsed: float

    @property
    def condition2_ran(self) -> bool:
        return self.condition2 is not None

    @property
    def subsets_checked(self) -> int:
        return self.condition2.subsets_checked if self.condition2 is not None else 0

    @property
    def passed(self) -> bool:
        return self.condition1.passed and self.condition2 is not None and self.condition2.passed


@dataclass(frozen=True)
class ChunkResult:
    index: int
    witness_mask: Optional[int]
    induced_edges: Optional[int]
    checked: int
    cancelled: bool


def enumeration_cap() -> int:
    value = getenv('HYPERBANANA_ENUM_CAP')
    return int(value) if value else DEFAULT_ENUM_CAP


def _require_dimension(graph: Graph, d: int) -> None:
    if d < 1:
        raise MaxwellError(f'Dimension must be positive, got {d}')
    if graph.n < d:
        raise MaxwellError(f'{TOO_FEW_VERTICES_MESSAGE}: n={graph.n}, d={d}')


def check_condition1(graph: Graph, d: int) -> Condition1:
    """|E| = d|V| - (d+1 choose 2)."""
    _require_dimension(graph, d)
    expected = maxwell_bound(d, graph.n)
    return Condition1(expected=expected, actual=graph.m, passed=graph.m == expected)


def gray_code_counts(masks: Sequence[int], width: int) -> np.ndarray:
    """Induced edge count of every subset of the vertices ``0..width-1``, indexed by bitmask.

    ``masks[v]`` is the neighbourhood of v restricted to the same vertices. Consecutive
    Gray codes differ in one vertex, so each count is the previous one plus or minus
    that vertex's degree into the current subset.
    """
    counts = np.zeros(1 << width, dtype=np.int64)
    current = 0
    count = 0
    for i in range(1, 1 << width):
        gray = i ^ (i >> 1)
        v = (gray ^ current).bit_length() - 1
        if gray >> v & 1:
            count += (masks[v] & current).bit_count()
        else:
            count -= (masks[v] & gray).bit_count()
        current = gray
        counts[gray] = count
    return counts


def _subset_bits(width: int) -> np.ndarray:
    return ((np.arange(1 << width, dtype=np.int64)[:, None] >> np.arange(width, dtype=np.int64)) & 1)


_cancel = None


def _init_worker(shared) -> None:
    global _cancel
    _cancel = shared


def _cancelled_before(index: int) -> bool:
    return _cancel is not None and _cancel.value < index


def _announce(index: int) -> None:
    if _cancel is None:
        return
    with _cancel.get_lock():
        if index < _cancel.value:
            _cancel.value = index


def scan_chunk(index: int, masks: Tuple[int, ...], d: int, low_bits: int, start: int, stop: int) -> ChunkResult:
    """Scan high-vertex prefixes ``start..stop-1`` for a subset breaking condition 2."""
    n = len(masks)
    k = low_bits
    low_filter = (1 << k) - 1
    low_counts = gray_code_counts([mask & low_filter for mask in masks[:k]], k)
    high_counts = gray_code_counts([mask >> k for mask in masks[k:]], n - k)
    cross = [mask >> k for mask in masks[:k]]
    bits = _subset_bits(k)
    low_sizes = bits.sum(axis=1)
    trivial = trivial_motion_dim(d)
    checked = 0
    for step, high in enumerate(range(start, stop)):
        if step % CANCEL_CHECK_INTERVAL == 0 and _cancelled_before(index):
            return ChunkResult(index, None, None, checked, True)
        degrees = np.array([(mask & high).bit_count() for mask in cross], dtype=np.int64)
        totals = low_counts + bits @ degrees + int(high_counts[high])
        sizes = low_sizes + high.bit_count()
        eligible = sizes >= d
        violated = eligible & (totals > d * sizes - trivial)
        hits = np.flatnonzero(violated)
        if hits.size:
            first = int(hits[0])
            checked += int(np.count_nonzero(eligible[:first + 1]))
            _announce(index)
            return ChunkResult(index, (high << k) | first, int(totals[first]), checked, False)
        checked += int(np.count_nonzero(eligible))
    return ChunkResult(index, None, None, checked, False)


def _chunk_bounds(total: int, chunks: int) -> list:
    chunks = max(1, min(chunks, total))
    step, rest = divmod(total, chunks)
    bounds = []
    start = 0
    for i in range(chunks):
        stop = start + step + (1 if i < rest else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def _log_chunk(future: Future) -> None:
    result = future.result()
    state = 'cancelled' if result.cancelled else ('witness' if result.witness_mask is not None else 'clean')
    log.debug(f'Chunk {result.index} finished: {state}, {result.checked} subsets checked')


def check_condition2(graph: Graph, d: int, parallelism: Optional[int] = 1,
                     cap: Optional[int] = None, allow_large: bool = False) -> Condition2:
    """|E(V')| <= d|V'| - (d+1 choose 2) for every V' with |V'| >= d, by exhaustive enumeration.

    The witness on failure is the violating subset with the smallest bitmask, whatever
    the number of workers.
    """
    _require_dimension(graph, d)
    cap = enumeration_cap() if cap is None else cap
    if graph.n > cap and not allow_large:
        raise EnumerationCapError(f'Refusing to enumerate 2^{graph.n} subsets (cap n <= {cap})')
    workers = resolve_parallelism(parallelism)
    masks = graph.adjacency_masks()
    low_bits = min(graph.n, LOW_BITS)
    prefixes = 1 << (graph.n - low_bits)
    bounds = _chunk_bounds(prefixes, 1 if workers <= 1 else workers * 4)
    jobs = [(i, masks, d, low_bits, start, stop) for i, (start, stop) in enumerate(bounds)]
    shared = multiprocessing.Value('q', NO_WITNESS)
    log.info(f'Enumerating subsets of {graph.n} vertices in {len(jobs)} chunks with {workers} workers')
    results = run_jobs(scan_chunk, jobs, workers, initializer=_init_worker, initargs=(shared,),
                       done_callback=_log_chunk)
    _init_worker(None)
    checked = 0
    for result in sorted(results, key=lambda r: r.index):
        if result.cancelled:
            raise RuntimeError(f'Chunk {result.index} was cancelled before any witness was found')
        checked += result.checked
        if result.witness_mask is not None:
            witness = _verified_witness(graph, d, result.witness_mask, result.induced_edges)
            return Condition2(passed=False, witness=witness, subsets_checked=checked)
    return Condition2(passed=True, witness=None, subsets_checked=checked)


def _verified_witness(graph: Graph, d: int, mask: int, induced: int) -> Witness:
    subset = VertexSubset.from_mask(mask)
    recount = induced_edge_count(graph, subset)
    bound = maxwell_bound(d, len(subset))
    if recount != induced or recount <= bound or len(subset) < d:
        raise RuntimeError(f'Witness {subset.sorted()} does not re-verify: {recount} edges, bound {bound}')
    return Witness(members=tuple(subset.sorted()), induced_edges=recount, bound=bound)


def check_maxwell(graph: Graph, d: int, parallelism: Optional[int] = 1, force_condition2: bool = False,
                  cap: Optional[int] = None, allow_large: bool = False) -> MaxwellReport:
    """Both Maxwell conditions; condition 2 is skipped when condition 1 fails unless forced."""
    start = time.perf_counter()
    condition1 = check_condition1(graph, d)
    condition2 = None
    if condition1.passed or force_condition2:
        condition2 = check_condition2(graph, d, parallelism, cap, allow_large)
    else:
        log.info(f'Condition 1 fails ({graph.m} edges, expected {condition1.expected}); skipping condition 2')
    elapsed = time.perf_counter() - start
    report = MaxwellReport(d=d, condition1=condition1, condition2=condition2, elapsed=elapsed)
    log.info(f'Maxwell check in d={d} for n={graph.n}, m={graph.m}: '
             f'{"pass" if report.passed else "fail"} ({report.subsets_checked} subsets, {elapsed:.3f}s)')
    return report


def laman_check(graph: Graph, parallelism: Optional[int] = 1) -> MaxwellReport:
    """The planar case, where the Maxwell counts characterise generic minimal rigidity."""
    return check_maxwell(graph, 2, parallelism)

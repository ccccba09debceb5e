"""Rigidity matrices of integer embeddings and generic rank estimates.

A rank computed from one random embedding is a lower bound on the generic
rank, and so is a rank over GF(p). Reported ranks are maxima over independent
trials, each with its own embedding and prime.
"""
import logging
from concurrent.futures import Future
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..constructions import FamilyParams, Prediction, PredictionKind, banana_bunch, hyperbanana
from ..graph import Graph, GraphError, canonical_edge
from ..linalg import ModularEchelon, ScalarMatrix, random_prime, rank_exact, rank_mod_p, stack
from .utils import resolve_parallelism, run_jobs, trivial_motion_dim


log = logging.getLogger(__name__)

DEFAULT_RANGE = 2 ** 20
DEFAULT_TRIALS = 3
DEFAULT_SEED = 42
MAX_RESAMPLE = 10000

AFFINE_SUBSPACE_MESSAGE = ("Classification needs at least d vertices: a framework on fewer points lies in an "
                           "affine subspace of dimension at most d-2 and keeps some rigid motions fixed")
CANDIDATE_IS_EDGE_MESSAGE = "Candidate pair is already an edge"


class EmbeddingError(ValueError):
    pass


class DimensionRegimeError(ValueError):
    pass


class RigidityError(ValueError):
    pass


class TrivialMotionBoundError(RuntimeError):
    pass


class RankMode(Enum):
    MODP = 'modp'
    EXACT = 'exact'
    BOTH = 'both'


class Classification(Enum):
    MINIMALLY_RIGID = 'minimally-rigid'
    RIGID_OVERCONSTRAINED = 'rigid-overconstrained'
    FLEXIBLE_INDEPENDENT = 'flexible-independent'
    FLEXIBLE_DEPENDENT = 'flexible-dependent'

    @property
    def flexible(self) -> bool:
        return self in (Classification.FLEXIBLE_INDEPENDENT, Classification.FLEXIBLE_DEPENDENT)

    @classmethod
    def of(cls, dof: int, independent: bool) -> 'Classification':
        if dof == 0:
            return cls.MINIMALLY_RIGID if independent else cls.RIGID_OVERCONSTRAINED
        return cls.FLEXIBLE_INDEPENDENT if independent else cls.FLEXIBLE_DEPENDENT


@dataclass(frozen=True)
class Embedding:
    d: int
    points: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for point in self.points:
            if len(point) != self.d:
                raise EmbeddingError(f'Point {point} does not have {self.d} coordinates')
        if len(set(self.points)) != len(self.points):
            raise EmbeddingError('Embedded points must be pairwise distinct')

    @property
    def n(self) -> int:
        return len(self.points)

    def translated(self, vector: Sequence[int]) -> 'Embedding':
        return Embedding(self.d, tuple(tuple(x + t for x, t in zip(point, vector)) for point in self.points))

    def scaled(self, factor: int) -> 'Embedding':
        if factor == 0:
            raise EmbeddingError('Scaling by zero collapses the embedding')
        return Embedding(self.d, tuple(tuple(x * factor for x in point) for point in self.points))


def random_embedding(graph: Graph, d: int, seed: int, coordinate_range: int = DEFAULT_RANGE) -> Embedding:
    """Integer points drawn uniformly from [-range, range]^d; repeated points are redrawn."""
    if d < 1:
        raise EmbeddingError(f'Dimension must be positive, got {d}')
    if coordinate_range < graph.n:
        raise EmbeddingError(f'Coordinate range {coordinate_range} is too small for {graph.n} distinct points')
    rng = np.random.default_rng(seed)
    drawn = rng.integers(-coordinate_range, coordinate_range, size=(graph.n, d), endpoint=True)
    seen = set()
    points = []
    for row in drawn.tolist():
        point = tuple(row)
        attempts = 0
        while point in seen:
            attempts += 1
            if attempts > MAX_RESAMPLE:
                raise EmbeddingError(f'Could not place {graph.n} distinct points in range {coordinate_range}')
            point = tuple(rng.integers(-coordinate_range, coordinate_range, size=d, endpoint=True).tolist())
        seen.add(point)
        points.append(point)
    return Embedding(d, tuple(points))


def edge_row(embedding: Embedding, u: int, v: int) -> list:
    """Row of edge uv: p_u - p_v in u's columns, p_v - p_u in v's, zero elsewhere."""
    d = embedding.d
    row = [0] * (d * embedding.n)
    pu, pv = embedding.points[u], embedding.points[v]
    for k in range(d):
        difference = pu[k] - pv[k]
        row[u * d + k] = difference
        row[v * d + k] = -difference
    return row


def rigidity_matrix(graph: Graph, embedding: Embedding) -> ScalarMatrix:
    """m x dn matrix, rows in canonical edge order and column blocks in vertex order."""
    if embedding.n != graph.n:
        raise EmbeddingError(f'Embedding has {embedding.n} points but the graph has {graph.n} vertices')
    rows = [edge_row(embedding, u, v) for u, v in graph.sorted_edges()]
    return ScalarMatrix.from_rows(rows, embedding.d * graph.n)


@dataclass(frozen=True)
class TrialPlan:
    index: int
    embedding_seed: int
    prime: int


@dataclass(frozen=True)
class TrialRecord:
    index: int
    embedding_seed: int
    prime: Optional[int]
    rank_mod_p: Optional[int]
    rank_exact: Optional[int]

    @property
    def rank(self) -> int:
        return max(r for r in (self.rank_mod_p, self.rank_exact) if r is not None)


@dataclass(frozen=True)
class GenericRank:
    rank: int
    mode: RankMode
    trials: Tuple[TrialRecord, ...]
    oracle_agrees: Optional[bool]

    @property
    def primes(self) -> List[int]:
        return [t.prime for t in self.trials if t.prime is not None]


def trial_plan(seed: int, trials: int) -> List[TrialPlan]:
    """Embedding seeds and primes for every trial, drawn from one stream seeded by ``seed``."""
    if trials < 1:
        raise RigidityError(f'At least one trial is needed, got {trials}')
    rng = np.random.default_rng(seed)
    plan = []
    for index in range(trials):
        embedding_seed = int(rng.integers(0, 2 ** 63 - 1))
        plan.append(TrialPlan(index, embedding_seed, random_prime(rng)))
    return plan


def run_trial(graph: Graph, d: int, plan: TrialPlan, coordinate_range: int,
              modular: bool, exact: bool) -> TrialRecord:
    embedding = random_embedding(graph, d, plan.embedding_seed, coordinate_range)
    matrix = rigidity_matrix(graph, embedding)
    modular_rank = rank_mod_p(matrix, plan.prime) if modular else None
    exact_rank = rank_exact(matrix) if exact else None
    return TrialRecord(plan.index, plan.embedding_seed, plan.prime if modular else None, modular_rank, exact_rank)


def _log_trial(future: Future) -> None:
    record = future.result()
    log.debug(f'Trial {record.index}: seed={record.embedding_seed} prime={record.prime} '
              f'rank_mod_p={record.rank_mod_p} rank_exact={record.rank_exact}')


def generic_rank(graph: Graph, d: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                 mode: RankMode = RankMode.MODP, coordinate_range: int = DEFAULT_RANGE,
                 parallelism: Optional[int] = 1) -> GenericRank:
    """Maximum rigidity-matrix rank over ``trials`` random embeddings.

    ``modp`` ranks every trial over GF(p), ``exact`` ranks every trial over Q, and
    ``both`` adds the exact rank of the first trial's matrix to the modular ranks.
    """
    plan = trial_plan(seed, trials)
    jobs = []
    for step in plan:
        modular = mode is not RankMode.EXACT
        exact = mode is RankMode.EXACT or (mode is RankMode.BOTH and step.index == 0)
        jobs.append((graph, d, step, coordinate_range, modular, exact))
    records = run_jobs(run_trial, jobs, resolve_parallelism(parallelism), done_callback=_log_trial)
    rank = max(record.rank for record in records)
    agrees = None
    if mode is RankMode.BOTH:
        first = records[0]
        agrees = first.rank_exact == first.rank_mod_p
        if not agrees:
            log.warning(f'Exact rank {first.rank_exact} and rank mod {first.prime} = {first.rank_mod_p} '
                        f'disagree on the same embedding')
    return GenericRank(rank=rank, mode=mode, trials=tuple(records), oracle_agrees=agrees)


@dataclass(frozen=True)
class RigidityVerdict:
    d: int
    n: int
    m: int
    rank: int
    nullity: int
    dof: int
    independent: bool
    classification: Classification
    certified: bool
    prediction: Optional[Prediction]
    evidence: GenericRank

    @property
    def prediction_matched(self) -> Optional[bool]:
        if self.prediction is None:
            return None
        return self.prediction.nullity == self.nullity

    @property
    def status(self) -> str:
        if self.prediction is None:
            return 'probabilistic'
        if self.prediction.kind is PredictionKind.THEOREM:
            return 'certified' if self.prediction_matched else 'theorem-mismatch'
        return 'conjecture-consistent' if self.prediction_matched else 'conjecture-mismatch'


def classify(graph: Graph, d: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
             mode: RankMode = RankMode.MODP, family: Optional[FamilyParams] = None,
             coordinate_range: int = DEFAULT_RANGE, parallelism: Optional[int] = 1) -> RigidityVerdict:
    if graph.n < d:
        raise DimensionRegimeError(f'{AFFINE_SUBSPACE_MESSAGE} (n={graph.n}, d={d})')
    evidence = generic_rank(graph, d, trials, seed, mode, coordinate_range, parallelism)
    trivial = trivial_motion_dim(d)
    nullity = d * graph.n - evidence.rank
    if nullity < trivial:
        raise TrivialMotionBoundError(f'Nullity {nullity} is below the {trivial} trivial motions in R^{d}')
    dof = nullity - trivial
    independent = evidence.rank == graph.m
    prediction = family.prediction() if family is not None and family.d == d else None
    certified = (prediction is not None and prediction.kind is PredictionKind.THEOREM
                 and prediction.nullity == nullity)
    verdict = RigidityVerdict(
        d=d, n=graph.n, m=graph.m, rank=evidence.rank, nullity=nullity, dof=dof, independent=independent,
        classification=Classification.of(dof, independent), certified=certified, prediction=prediction,
        evidence=evidence,
    )
    if verdict.status == 'theorem-mismatch':
        log.error(f'Nullity {nullity} differs from the proven value {prediction.nullity}')
    log.info(f'Classified n={graph.n}, m={graph.m} in R^{d}: rank {evidence.rank}, nullity {nullity}, '
             f'{verdict.classification.value} ({verdict.status})')
    return verdict


def _candidate_pairs(graph: Graph, candidates: Optional[Sequence[Tuple[int, int]]]) -> List[Tuple[int, int]]:
    if candidates is None:
        return graph.non_edges()
    pairs = []
    for u, v in candidates:
        try:
            pair = canonical_edge(u, v)
        except GraphError as e:
            raise RigidityError(str(e)) from e
        if pair[1] >= graph.n or pair[0] < 0:
            raise RigidityError(f'Candidate {pair} is out of range (n={graph.n})')
        if pair in graph.edges:
            raise RigidityError(f'{CANDIDATE_IS_EDGE_MESSAGE}: {pair}')
        pairs.append(pair)
    return sorted(set(pairs))


def implied_edges(graph: Graph, d: int, candidates: Optional[Sequence[Tuple[int, int]]] = None,
                  trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                  coordinate_range: int = DEFAULT_RANGE) -> List[Tuple[int, int]]:
    """Non-edges whose rows lie in the row space of the rigidity matrix in every trial."""
    surviving = _candidate_pairs(graph, candidates)
    for step in trial_plan(seed, trials):
        if not surviving:
            break
        embedding = random_embedding(graph, d, step.embedding_seed, coordinate_range)
        echelon = ModularEchelon.build(rigidity_matrix(graph, embedding), step.prime)
        surviving = [pair for pair in surviving if echelon.contains(edge_row(embedding, *pair))]
        log.debug(f'Trial {step.index}: {len(surviving)} implied candidates remain')
    return surviving


def check_row_space_dependence(d: int, b: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> bool:
    """Whether every edge among the banana vertices of B_{d,b} is implied."""
    if b < 2:
        raise RigidityError(f'B_{{d,b}} needs b >= 2 to have pairs of banana vertices, got b={b}')
    bunch, labels = banana_bunch(d, b)
    pairs = [(x, y) for i, x in enumerate(labels.bananas) for y in labels.bananas[i + 1:]]
    return len(implied_edges(bunch, d, pairs, trials, seed)) == len(pairs)


@dataclass(frozen=True)
class BlockReductionReport:
    d: int
    b: int
    ku_rank: int
    ku_expected: int
    bunch_rank: int
    bunch_with_ku_rank: int
    hyperbanana_rank: int
    hyperbanana_bound: int
    exact_expected: bool

    @property
    def holds(self) -> bool:
        if self.ku_rank != self.ku_expected or self.bunch_with_ku_rank != self.bunch_rank:
            return False
        if self.exact_expected:
            return self.hyperbanana_rank == self.hyperbanana_bound
        return self.hyperbanana_rank <= self.hyperbanana_bound


def check_block_reduction(d: int, b: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> BlockReductionReport:
    """Rank identities behind the block form of a hyperbanana's rigidity matrix.

    The rows of K_U, padded with zeros over the base K_d, add nothing to the bunch's
    rank; in H_{d,b} they appear once per bunch, so the hyperbanana loses at least
    (b choose 2) rows of rank, and for d = 2b-1 exactly that many.
    """
    if b < 2:
        raise RigidityError(f'Block reduction needs b >= 2, got b={b}')
    bunch, labels = banana_bunch(d, b)
    pairs = [(x, y) for i, x in enumerate(labels.bananas) for y in labels.bananas[i + 1:]]
    ku_rank = bunch_rank = with_ku = 0
    for step in trial_plan(seed, trials):
        embedding = random_embedding(bunch, d, step.embedding_seed)
        matrix = rigidity_matrix(bunch, embedding)
        ku_rows = ScalarMatrix.from_rows([edge_row(embedding, *pair) for pair in pairs], matrix.cols)
        ku_rank = max(ku_rank, rank_mod_p(ku_rows, step.prime))
        bunch_rank = max(bunch_rank, rank_mod_p(matrix, step.prime))
        with_ku = max(with_ku, rank_mod_p(stack(matrix, ku_rows), step.prime))
    graph, _ = hyperbanana(d, b)
    hyper_rank = generic_rank(graph, d, trials, seed).rank
    report = BlockReductionReport(
        d=d, b=b,
        ku_rank=ku_rank, ku_expected=comb(b, 2) if b <= d + 1 else d * b - trivial_motion_dim(d),
        bunch_rank=bunch_rank, bunch_with_ku_rank=with_ku,
        hyperbanana_rank=hyper_rank, hyperbanana_bound=2 * bunch_rank - ku_rank,
        exact_expected=d == 2 * b - 1,
    )
    log.info(f'Block reduction for d={d}, b={b}: {"holds" if report.holds else "fails"}')
    return report

"""JSON analysis reports and the nullity table.

Reports are serialised with sorted keys and fixed indentation, and carry no
timings unless asked to, so runs with the same seed produce identical bytes.
"""
import json
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from . import __version__
from .analysis.maxwell import MaxwellReport, check_maxwell
from .analysis.rigidity import RankMode, RigidityVerdict, classify
from .constructions import Family, FamilyParams
from .graph_file import GraphFile


log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TABLE_MIN_B = 2
TABLE_MAX_B = {'odd': 6, 'even': 5}


class TableRangeError(ValueError):
    pass


def maxwell_to_dict(report: MaxwellReport, timings: bool = False) -> dict:
    condition1 = report.condition1
    result = {
        'd': report.d,
        'pass': report.passed,
        'condition1': {'expected': condition1.expected, 'actual': condition1.actual, 'pass': condition1.passed},
        'condition2': None,
        'subsets_checked': report.subsets_checked,
    }
    if report.condition2 is None:
        result['condition2'] = {'run': False}
    else:
        condition2 = report.condition2
        witness = None
        if condition2.witness is not None:
            witness = {
                'members': list(condition2.witness.members),
                'induced_edges': condition2.witness.induced_edges,
                'bound': condition2.witness.bound,
            }
        result['condition2'] = {'run': True, 'pass': condition2.passed, 'witness': witness}
    if timings:
        result['elapsed'] = round(report.elapsed, 6)
    return result


def verdict_to_dict(verdict: RigidityVerdict) -> dict:
    prediction = None
    if verdict.prediction is not None:
        prediction = {'kind': verdict.prediction.kind.value, 'nullity': verdict.prediction.nullity,
                      'matched': verdict.prediction_matched}
    return {
        'd': verdict.d,
        'n': verdict.n,
        'm': verdict.m,
        'rank': verdict.rank,
        'nullity': verdict.nullity,
        'dof': verdict.dof,
        'independent': verdict.independent,
        'classification': verdict.classification.value,
        'certified': verdict.certified,
        'status': verdict.status,
        'prediction': prediction,
        'oracle_agrees': verdict.evidence.oracle_agrees,
    }


def analysis_report(graph_file: GraphFile, seed: int, trials: int, mode: RankMode,
                    maxwell: Optional[MaxwellReport] = None, verdict: Optional[RigidityVerdict] = None,
                    implied: Optional[Sequence[Tuple[int, int]]] = None, timings: bool = False) -> dict:
    graph = graph_file.graph
    report = {
        'schema': SCHEMA_VERSION,
        'tool': {'name': 'hyperbanana', 'version': __version__},
        'graph': {'d': graph_file.d, 'n': graph.n, 'm': graph.m},
        'family': graph_file.family.to_dict() if graph_file.family is not None else None,
        'randomness': {'seed': seed, 'trials': trials, 'mode': mode.value},
    }
    if maxwell is not None:
        report['maxwell'] = maxwell_to_dict(maxwell, timings)
    if verdict is not None:
        report['rigidity'] = verdict_to_dict(verdict)
        report['randomness']['embedding_seeds'] = [t.embedding_seed for t in verdict.evidence.trials]
        report['randomness']['primes'] = verdict.evidence.primes
    if implied is not None:
        report['implied_edges'] = [list(pair) for pair in implied]
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


@dataclass(frozen=True)
class TableRow:
    b: int
    d: int
    n: int
    m: int
    maxwell: bool
    nullity: int
    predicted: int
    match: bool
    status: str
    oracle_agrees: Optional[bool]

    def to_dict(self) -> dict:
        return {
            'b': self.b, 'd': self.d, 'n': self.n, 'm': self.m, 'maxwell': self.maxwell,
            'nullity': self.nullity, 'predicted': self.predicted, 'match': self.match,
            'status': self.status, 'oracle_agrees': self.oracle_agrees,
        }


def table_params(kind: str, b: int) -> FamilyParams:
    if kind == 'odd':
        return FamilyParams(Family.HYPERBANANA, 2 * b - 1, b)
    return FamilyParams(Family.EVEN_HYPERBANANA, 2 * b, b)


def nullity_table(kind: str, b_range: Tuple[int, int], exact: bool = False, trials: int = 3, seed: int = 42,
                  parallelism: Optional[int] = 1) -> List[TableRow]:
    """One row per b: Maxwell outcome and computed against predicted nullity."""
    lo, hi = b_range
    if lo < TABLE_MIN_B or hi > TABLE_MAX_B[kind]:
        raise TableRangeError(f'b must lie in {TABLE_MIN_B}..{TABLE_MAX_B[kind]} for the {kind} family, '
                              f'got {lo}..{hi}')
    mode = RankMode.BOTH if exact else RankMode.MODP
    rows = []
    for b in range(lo, hi + 1):
        params = table_params(kind, b)
        graph, _ = params.build()
        maxwell = check_maxwell(graph, params.d, parallelism)
        verdict = classify(graph, params.d, trials, seed, mode, family=params, parallelism=parallelism)
        rows.append(TableRow(
            b=b, d=params.d, n=graph.n, m=graph.m, maxwell=maxwell.passed,
            nullity=verdict.nullity, predicted=verdict.prediction.nullity,
            match=bool(verdict.prediction_matched), status=verdict.status.upper(),
            oracle_agrees=verdict.evidence.oracle_agrees,
        ))
        log.info(f'{kind} b={b}: nullity {verdict.nullity}, predicted {verdict.prediction.nullity}')
    return rows


def table_frame(rows: Sequence[TableRow]) -> pd.DataFrame:
    frame = pd.DataFrame([row.to_dict() for row in rows],
                         columns=['b', 'd', 'n', 'm', 'maxwell', 'nullity', 'predicted', 'match', 'status',
                                  'oracle_agrees'])
    if frame['oracle_agrees'].isna().all():
        frame = frame.drop(columns=['oracle_agrees'])
    return frame


def render_table(rows: Sequence[TableRow]) -> str:
    return table_frame(rows).to_string(index=False)

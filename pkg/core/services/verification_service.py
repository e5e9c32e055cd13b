"""
Dual-Engine Verification

Cross-validates the combinatorial engine against the tensorial oracle on
random exact rational triples. Also checks the built-in golden table of
rank-3 functions of order 0 to 3, and the rational loop coefficients
against their fusion-coefficient cycle products.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

from core.algebra.exactmath import RANK3_ALPHABET, Polynomial, poly_parse
from core.algebra.tracecoords import evaluate_traces, random_triple
from core.config import get_settings
from core.models import CrossValidationReport, TrialResult
from core.services.recurrence_service import (
    LOOPS,
    Loop,
    Rank3Label,
    RecurrenceEngine,
    cfindex_to_label,
    cycle_product,
    enumerate_order,
    get_default_engine,
    loop_coefficient,
    relabelings,
)
from core.services.tensorial_service import evaluate_tensorial

logger = logging.getLogger(__name__)


# Index form (a, b, c, d, i, j) -> canonical text.
GOLDEN_ORDER_0_TO_3: Dict[Tuple[int, ...], str] = {
    (0, 0, 0, 0, 1, 1): "1",
    (1, 0, 0, 1, 1, 1): "t1",
    (0, 1, 0, 1, 1, 1): "t2",
    (0, 0, 1, 1, 1, 1): "t3",
    (2, 0, 0, 2, 1, 1): "t1^2 - 1",
    (0, 2, 0, 2, 1, 1): "t2^2 - 1",
    (0, 0, 2, 2, 1, 1): "t3^2 - 1",
    (1, 0, 1, 2, 1, 1): "1/2*t1*t3 + 1/2*t13",
    (0, 1, 1, 2, 1, 1): "1/2*t2*t3 + 1/2*t23",
    (1, 1, 0, 2, 1, 1): "1/2*t1*t2 + 1/2*t12",
    (1, 0, 1, 0, 1, 1): "t1*t3 - t13",
    (0, 1, 1, 0, 1, 1): "t2*t3 - t23",
    (1, 1, 0, 0, 1, 1): "t1*t2 - t12",
    (3, 0, 0, 3, 1, 1): "t1^3 - 2*t1",
    (0, 3, 0, 3, 1, 1): "t2^3 - 2*t2",
    (0, 0, 3, 3, 1, 1): "t3^3 - 2*t3",
    (1, 1, 1, 1, 1, 2): "-1/2*t1*t2*t3 + 1/2*t12*t3 + t1*t23 - t123",
    (1, 1, 1, 1, 1, 1): "3/4*t1*t2*t3 + 1/4*t12*t3 - 1/2*t2*t13 - 1/2*t1*t23",
    (1, 1, 1, 1, 2, 2): "t1*t2*t3 - t3*t12",
    (1, 1, 1, 1, 2, 1): "1/2*t1*t2*t3 - 1/2*t12*t3 - t2*t13 + t123",
    (2, 1, 0, 3, 1, 1): "1/3*t2*t1^2 + 2/3*t12*t1 - 2/3*t2",
    (2, 1, 0, 1, 1, 1): "t2*t1^2 - t12*t1 - 1/2*t2",
    (1, 0, 2, 3, 1, 1): "1/3*t1*t3^2 + 2/3*t13*t3 - 2/3*t1",
    (1, 0, 2, 1, 1, 1): "t1*t3^2 - t13*t3 - 1/2*t1",
    (2, 0, 1, 3, 1, 1): "1/3*t3*t1^2 + 2/3*t13*t1 - 2/3*t3",
    (2, 0, 1, 1, 1, 1): "t3*t1^2 - t13*t1 - 1/2*t3",
    (1, 2, 0, 3, 1, 1): "1/3*t1*t2^2 + 2/3*t12*t2 - 2/3*t1",
    (1, 2, 0, 1, 1, 1): "t1*t2^2 - t12*t2 - 1/2*t1",
    (0, 2, 1, 3, 1, 1): "1/3*t3*t2^2 + 2/3*t23*t2 - 2/3*t3",
    (0, 2, 1, 1, 1, 1): "t3*t2^2 - t23*t2 - 1/2*t3",
    (1, 1, 1, 3, 1, 1): "1/3*t3*t12 + 1/3*t2*t13 + 1/3*t1*t23",
    (0, 1, 2, 3, 1, 1): "1/3*t2*t3^2 + 2/3*t23*t3 - 2/3*t2",
    (0, 1, 2, 1, 1, 1): "t2*t3^2 - t23*t3 - 1/2*t2",
}


def golden_polynomial(index: Tuple[int, ...]) -> Polynomial:
    return poly_parse(GOLDEN_ORDER_0_TO_3[index], RANK3_ALPHABET)


def check_golden_table(engine: Optional[RecurrenceEngine] = None) -> List[Tuple[Tuple[int, ...], Polynomial, Polynomial]]:
    """Mismatches as (index, expected, computed); empty when every entry agrees"""
    engine = engine or get_default_engine()
    mismatches = []
    for index in sorted(GOLDEN_ORDER_0_TO_3):
        expected = golden_polynomial(index)
        computed = engine.rank3_cf(cfindex_to_label(*index))
        if computed != expected:
            logger.warning(f"Golden mismatch at {index}: expected {expected}, computed {computed}")
            mismatches.append((index, expected, computed))
    logger.info(f"Golden table: {len(GOLDEN_ORDER_0_TO_3) - len(mismatches)}/{len(GOLDEN_ORDER_0_TO_3)} entries agree")
    return mismatches


def cross_validate(label: Rank3Label, trials: Optional[int] = None, seed: Optional[int] = None,
                   engine: Optional[RecurrenceEngine] = None) -> CrossValidationReport:
    """Compare both engines on `trials` random triples seeded from `seed`"""
    settings = get_settings()
    trials = settings.default_trials if trials is None else trials
    seed = settings.default_seed if seed is None else seed
    engine = engine or get_default_engine()

    chi = engine.rank3_cf(label.require_admissible())
    report = CrossValidationReport(label=label.as_tuple(), trials=trials, seed=seed)
    for trial in range(trials):
        trial_seed = seed + trial
        x1, x2, x3 = random_triple(trial_seed)
        combinatorial = chi.evaluate(evaluate_traces(x1, x2, x3).as_assignment())
        tensorial = evaluate_tensorial(label, x1, x2, x3)
        report.results.append(TrialResult(
            seed=trial_seed,
            combinatorial=str(combinatorial),
            tensorial=str(tensorial),
            equal=combinatorial == tensorial,
        ))

    if report.passed:
        logger.info(f"Label {label.as_tuple()}: {trials} trials agree")
    else:
        logger.warning(f"Label {label.as_tuple()}: {len(report.mismatches)} of {trials} trials disagree")
    return report


def cross_validate_order(order: int, trials: Optional[int] = None, seed: Optional[int] = None,
                         engine: Optional[RecurrenceEngine] = None) -> List[CrossValidationReport]:
    return [
        cross_validate(cfindex_to_label(*index), trials, seed, engine)
        for index in enumerate_order(order)
    ]


RANK3_LOOPS = (Loop.AB, Loop.CD, Loop.AEDF, Loop.BEDF, Loop.BECF, Loop.AECF)

LoopMismatch = Tuple[Loop, Rank3Label, Rank3Label, Optional[Fraction], Optional[Fraction]]


def admissible_labels(bound: int) -> List[Rank3Label]:
    """Every admissible rank-3 label with all entries at most `bound`"""
    labels = (Rank3Label(*values) for values in product(range(bound + 1), repeat=6))
    return [label for label in labels if label.is_admissible()]


def check_loop_coefficients(bound: int = 3) -> List[LoopMismatch]:
    """Mismatches as (loop, old, new, rational, cycle product) over labels up to `bound`"""
    mismatches: List[LoopMismatch] = []
    checked = 0
    for label in admissible_labels(bound):
        for loop in RANK3_LOOPS:
            spec = LOOPS[loop]
            for candidate in relabelings(label, spec):
                rational = loop_coefficient(spec, label, candidate)
                radical = cycle_product(spec, label, candidate)
                checked += rational is not None
                if rational != radical:
                    logger.warning(f"Loop {loop.value} at {label.as_tuple()} -> {candidate.as_tuple()}: "
                                   f"{rational} != {radical}")
                    mismatches.append((loop, label, candidate, rational, radical))
    logger.info(f"Loop coefficients: {checked - len(mismatches)}/{checked} agree up to label {bound}")
    return mismatches

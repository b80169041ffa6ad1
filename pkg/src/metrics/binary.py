"""
Confusion-matrix metrics for imbalanced binary problems.
Class 1 (majority) is the positive class. Any 0/0 ratio is defined as 0,
which covers absent classes and classes that are never predicted.
"""
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .models import ConfusionMatrix, MetricBundle


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def confusion(y_true: Sequence[int], y_pred: Sequence[int]) -> ConfusionMatrix:
    """Count tp/fp/tn/fn.

    Raises:
        ValueError: On length mismatch or a label outside {0, 1}
    """
    y_true = np.asarray(y_true).reshape(-1)
    y_pred = np.asarray(y_pred).reshape(-1)
    if y_true.shape[0] != y_pred.shape[0]:
        raise ValueError(f"y_true has {y_true.shape[0]} labels but y_pred has {y_pred.shape[0]}")
    for name, arr in (("y_true", y_true), ("y_pred", y_pred)):
        if not np.isin(arr, (0, 1)).all():
            raise ValueError(f"{name} contains labels other than 0 and 1")

    actual = y_true == 1
    predicted = y_pred == 1
    return ConfusionMatrix(
        tp=int(np.count_nonzero(actual & predicted)),
        fp=int(np.count_nonzero(~actual & predicted)),
        tn=int(np.count_nonzero(~actual & ~predicted)),
        fn=int(np.count_nonzero(actual & ~predicted)),
    )


def sens_spec(cm: ConfusionMatrix) -> Tuple[float, float, float, float]:
    """(S0, Sp0, S1, Sp1); the specificity of one class is the sensitivity of the other"""
    s1 = _ratio(cm.tp, cm.tp + cm.fn)
    s0 = _ratio(cm.tn, cm.tn + cm.fp)
    return s0, s1, s1, s0


def gmean(
    cm: ConfusionMatrix,
    n1: Optional[int] = None,
    n0: Optional[int] = None,
) -> Tuple[float, float, float, float]:
    """Class-wise, macro and weighted G-Mean.

    Args:
        cm: Confusion matrix
        n1: Class-1 count used for the weighted average (defaults to cm's)
        n0: Class-0 count used for the weighted average (defaults to cm's)

    Returns:
        (g0, g1, g_macro, g_weighted); all four coincide
    """
    s0, sp0, s1, sp1 = sens_spec(cm)
    g0 = math.sqrt(s0 * sp0)
    g1 = math.sqrt(s1 * sp1)
    g_macro = 0.5 * g0 + 0.5 * g1

    n1 = cm.n_class1 if n1 is None else n1
    n0 = cm.n_class0 if n0 is None else n0
    if n1 < 0 or n0 < 0:
        raise ValueError(f"class counts must be non-negative, got n1={n1}, n0={n0}")
    n = n1 + n0
    g_weighted = (n0 / n) * g0 + (n1 / n) * g1 if n else g_macro
    return g0, g1, g_macro, min(g_weighted, 1.0)


def f1_macro(cm: ConfusionMatrix) -> float:
    f1_class1 = _ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn)
    f1_class0 = _ratio(2 * cm.tn, 2 * cm.tn + cm.fn + cm.fp)
    return 0.5 * (f1_class1 + f1_class0)


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    s0, _, s1, _ = sens_spec(cm)
    return 0.5 * (s1 + s0)


def evaluate(
    y_true: Sequence[int],
    y_pred: Sequence[int],
    class_counts: Optional[Tuple[int, int]] = None,
) -> MetricBundle:
    """All metrics for a prediction; class_counts=(n1, n0) feeds the weighted G-Mean"""
    cm = confusion(y_true, y_pred)
    s0, sp0, s1, sp1 = sens_spec(cm)
    n1, n0 = class_counts if class_counts is not None else (None, None)
    g0, g1, g_macro, g_weighted = gmean(cm, n1, n0)
    return MetricBundle(
        sensitivity_class0=s0,
        specificity_class0=sp0,
        sensitivity_class1=s1,
        specificity_class1=sp1,
        gmean_class0=g0,
        gmean_class1=g1,
        gmean_macro=g_macro,
        gmean_weighted=g_weighted,
        f1_macro=f1_macro(cm),
        balanced_accuracy=balanced_accuracy(cm),
    )

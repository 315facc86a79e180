"""Pythagorean means and dispersion statistics over task-score vectors.

All three means treat the input as an unordered collection: values are
sorted before any accumulation, and accumulation uses :func:`math.fsum`, so
every permutation of the same scores yields the same bits.

The geometric mean is evaluated as ``exp(mean(log(x)))`` rather than as the
n-th root of a product, which avoids overflow for long vectors of large
scores.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable

import numpy as np

from .errors import EmptyVector, NonPositiveValue, TooFewValues

__all__ = [
    "MeanKind",
    "NonPositivePolicy",
    "as_scores",
    "arithmetic_mean",
    "geometric_mean",
    "harmonic_mean",
    "compute_mean",
    "sum_scores",
    "sample_variance",
    "sample_std",
]


class MeanKind(str, enum.Enum):
    """Which Pythagorean mean to apply.

    ``ARITHMETIC`` is the conventional leaderboard average. ``GEOMETRIC``
    is insensitive to the units each task is scored in and is the natural
    summary for scores normalized to a reference system. ``HARMONIC``
    weighs low scores most heavily, so a system with a large spread across
    tasks is penalized more than under the other two.
    """

    ARITHMETIC = "am"
    GEOMETRIC = "gm"
    HARMONIC = "hm"

    @property
    def label(self) -> str:
        return self.value.upper()

    @classmethod
    def parse(cls, text: "str | MeanKind") -> "MeanKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        aliases = {"arithmetic": "am", "geometric": "gm", "harmonic": "hm"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown mean {text!r}; expected one of am, gm, hm") from None


class NonPositivePolicy(enum.Enum):
    """What geometric and harmonic means do with values <= 0."""

    ERROR = "error"
    EXCLUDE = "exclude"


def as_scores(values: Iterable[float]) -> np.ndarray:
    """Return `values` as a sorted, finite float64 array with at least one entry."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyVector("cannot aggregate an empty score vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"score vector contains non-finite values: {arr.tolist()}")
    return np.sort(arr, kind="stable")


def _positive(values, policy: NonPositivePolicy, what: str) -> np.ndarray:
    arr = as_scores(values)
    bad = arr <= 0
    if bad.any():
        if policy is NonPositivePolicy.ERROR:
            raise NonPositiveValue(
                f"{what} mean is undefined for non-positive scores {arr[bad].tolist()}; "
                "pass NonPositivePolicy.EXCLUDE to drop them"
            )
        arr = arr[~bad]
        if arr.size == 0:
            raise EmptyVector(f"no positive scores left for the {what} mean")
    return arr


def arithmetic_mean(values: Iterable[float]) -> float:
    """Sum of the scores divided by their count."""
    arr = as_scores(values)
    return math.fsum(arr) / arr.size


def geometric_mean(values: Iterable[float],
                   policy: NonPositivePolicy = NonPositivePolicy.ERROR) -> float:
    """n-th root of the product of the scores, computed in log space.

    Parameters
    ----------
    values : iterable of float
        Task scores.
    policy : NonPositivePolicy
        ``ERROR`` (default) raises :class:`NonPositiveValue` when any score is
        zero or negative; ``EXCLUDE`` drops those scores first.

    Returns
    -------
    float
    """
    arr = _positive(values, policy, "geometric")
    return math.exp(math.fsum(np.log(arr)) / arr.size)


def harmonic_mean(values: Iterable[float],
                  policy: NonPositivePolicy = NonPositivePolicy.ERROR) -> float:
    """Count of the scores divided by the sum of their reciprocals."""
    arr = _positive(values, policy, "harmonic")
    return arr.size / math.fsum(1.0 / arr)


def compute_mean(kind: MeanKind, values: Iterable[float],
                 policy: NonPositivePolicy = NonPositivePolicy.ERROR) -> float:
    kind = MeanKind.parse(kind)
    if kind is MeanKind.ARITHMETIC:
        return arithmetic_mean(values)
    if kind is MeanKind.GEOMETRIC:
        return geometric_mean(values, policy)
    return harmonic_mean(values, policy)


def sum_scores(values: Iterable[float]) -> float:
    return math.fsum(as_scores(values))


def sample_variance(values: Iterable[float]) -> float:
    """Unbiased (n - 1 denominator) variance of the scores."""
    arr = as_scores(values)
    if arr.size < 2:
        raise TooFewValues(f"variance needs at least 2 values, got {arr.size}")
    centre = math.fsum(arr) / arr.size
    return math.fsum((arr - centre) ** 2) / (arr.size - 1)


def sample_std(values: Iterable[float]) -> float:
    return math.sqrt(sample_variance(values))

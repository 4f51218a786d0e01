"""Dimension-wise concept similarity over meaning records.

Two senses are compared one dimension at a time: the join pairs up entries
that share a property token, each matched pair scores 1 - |w1 - w2|, the
dimension similarity is the mean over the join (0 when nothing is shared),
and the final score is a weighted average across dimensions.

All arithmetic is plain double precision with a fixed summation order
(property tokens, then relation names), so results are deterministic and the
weighted average can never exceed 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import jsonio
from .errors import InputDataError
from .semantics import (
    DEFAULT_DIMS,
    MeaningRecord,
    PrimitiveRelation,
    WeightedProperty,
)


@dataclass(frozen=True)
class MatchedPair:
    """One shared property token with its weight in each record."""

    left: WeightedProperty
    right: WeightedProperty

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", (float(self.left[0]), self.left[1]))
        object.__setattr__(self, "right", (float(self.right[0]), self.right[1]))
        if self.left[1] != self.right[1]:
            raise InputDataError(
                f"matched pair must share its property token: "
                f"{self.left[1]!r} != {self.right[1]!r}"
            )

    @property
    def token(self) -> str:
        return self.left[1]


def dimension_join(
    a: MeaningRecord, b: MeaningRecord, dim: PrimitiveRelation
) -> frozenset[MatchedPair]:
    """Pairs of entries from a and b whose property tokens coincide.

    A dimension absent from either record is an empty set, so the join of
    sparse records is simply empty.
    """
    right_by_token = {token: (weight, token) for weight, token in b.dimension(dim)}
    return frozenset(
        MatchedPair(left=(weight, token), right=right_by_token[token])
        for weight, token in a.dimension(dim)
        if token in right_by_token
    )


def feature_sim(left: WeightedProperty, right: WeightedProperty) -> float:
    """1 - |w1 - w2| when the property tokens match, else 0."""
    if left[1] != right[1]:
        return 0.0
    return 1.0 - abs(float(left[0]) - float(right[0]))


def dimension_similarity(
    a: MeaningRecord, b: MeaningRecord, dim: PrimitiveRelation
) -> float:
    """Mean feature similarity over the join; 0.0 when the join is empty."""
    pairs = sorted(dimension_join(a, b, dim), key=lambda p: p.token)
    if not pairs:
        return 0.0
    total = 0.0
    for pair in pairs:
        total += feature_sim(pair.left, pair.right)
    return total / len(pairs)


DimWeights = Mapping[PrimitiveRelation, float]


def equal_weights(
    dims: tuple[PrimitiveRelation, ...] = DEFAULT_DIMS,
) -> dict[PrimitiveRelation, float]:
    return {dim: 1.0 for dim in dims}


@dataclass(frozen=True)
class SimilarityReport:
    a: str
    b: str
    per_dim: Mapping[PrimitiveRelation, float]
    aggregate: float
    dim_weights: Mapping[PrimitiveRelation, float]

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "per_dim": {rel.value: value for rel, value in self.per_dim.items()},
            "aggregate": self.aggregate,
            "dim_weights": {rel.value: w for rel, w in self.dim_weights.items()},
        }

    def to_json_text(self) -> str:
        return jsonio.dumps(self.to_json())


def concept_similarity(
    a: MeaningRecord,
    b: MeaningRecord,
    weights: DimWeights | None = None,
) -> SimilarityReport:
    """Weighted average of per-dimension similarities.

    With the default all-equal weights this is the plain arithmetic mean over
    the standard dimensions.  Weights must be non-negative with at least one
    positive entry.
    """
    if weights is None:
        weights = equal_weights()
    if not weights:
        raise InputDataError("dimension weights must not be empty")
    for relation, value in weights.items():
        if not isinstance(relation, PrimitiveRelation):
            raise InputDataError(f"weight key {relation!r} is not a primitive relation")
        if float(value) < 0.0:
            raise InputDataError(f"weight for {relation.value} is negative: {value}")
    if all(float(v) == 0.0 for v in weights.values()):
        raise InputDataError("at least one dimension weight must be positive")

    ordered = sorted(weights, key=lambda r: r.value)
    per_dim = {rel: dimension_similarity(a, b, rel) for rel in ordered}
    numerator = 0.0
    denominator = 0.0
    for rel in ordered:
        w = float(weights[rel])
        numerator += w * per_dim[rel]
        denominator += w
    return SimilarityReport(
        a=a.sense,
        b=b.sense,
        per_dim=per_dim,
        aggregate=numerator / denominator,
        dim_weights={rel: float(weights[rel]) for rel in ordered},
    )

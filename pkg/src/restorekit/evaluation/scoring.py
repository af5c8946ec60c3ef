"""No-reference quality scoring slot.

No scoring model ships with the toolkit; the slot mirrors the CLIP-IQA
column of the quality report for users who can supply one. A constant stub
is provided so pipelines and reports can be exercised end to end.
"""

from typing import Protocol, runtime_checkable

from ..errors import EmptyInputError, ScorerUnavailableError


@runtime_checkable
class QualityScorer(Protocol):
    descriptor: str

    def score(self, image) -> float:
        """Quality in [0, 1], higher is better."""
        ...


class ConstantScorer:
    def __init__(self, value: float):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {value}")
        self.value = value
        self.descriptor = f"constant({value})"

    def score(self, image) -> float:
        return self.value


def no_reference_quality(images, scorer) -> float:
    """Mean scorer output over an image set."""
    if scorer is None:
        raise ScorerUnavailableError("no quality scorer provided")
    images = list(images)
    if not images:
        raise EmptyInputError("empty image set")
    scores = []
    for img in images:
        s = float(scorer.score(img))
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"scorer returned {s}, expected [0, 1]")
        scores.append(s)
    return sum(scores) / len(scores)

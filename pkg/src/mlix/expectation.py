"""Closed-form expected costs for retrieval and addition.

Retrieval cost is the expected number of traversed services (primary) or
input-similar classes (partial/full). Addition cost is the expected number of
parameter comparisons per added service.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mlix.model import Deployment, IndexStats


class ExpectationError(ValueError):
    pass


@dataclass(frozen=True)
class ExpectationInputs:
    """Symbols of the cost formulas.

    ``r``, ``n`` and ``m`` are mean request size, inputs per service and
    outputs per service; the rest are structure sizes.
    """

    r: float = 0.0
    n: float = 0.0
    m: float = 0.0
    P: float = 0.0
    S: float = 0.0
    K: float = 0.0
    R2: float = 0.0
    R1: float = 0.0

    def __post_init__(self):
        for name in ("r", "n", "m", "P", "S", "K", "R2", "R1"):
            if getattr(self, name) < 0:
                raise ExpectationError(f"{name} must be non-negative")

    @classmethod
    def from_stats(cls, st: IndexStats, *, r: float = 0.0, n: float = 0.0, m: float = 0.0) -> "ExpectationInputs":
        return cls(
            r=r,
            n=n,
            m=m,
            P=st.parameter_count,
            S=st.service_count,
            K=st.key_count,
            R2=st.input_similar_count,
            R1=st.similar_count,
        )


def _positive(value: float, name: str) -> float:
    if value <= 0:
        raise ExpectationError(f"{name} must be positive")
    return value


def expected_retrieval(deployment: Deployment | str, x: ExpectationInputs) -> float:
    deployment = Deployment(deployment)
    share = x.r / _positive(x.P, "P")
    if deployment is Deployment.PRIMARY:
        return share * x.S
    return share * x.R2


def expected_addition(deployment: Deployment | str, method: str, x: ExpectationInputs) -> float:
    """Expected parameter comparisons to add one service.

    ``method`` is ``"random"`` or ``"designated"``.
    """
    deployment = Deployment(deployment)
    method = getattr(method, "value", method)
    if method not in ("random", "designated"):
        raise ExpectationError(f"no addition formula for method {method!r}")
    lookup = math.log2(_positive(x.K, "K"))
    if deployment is Deployment.PRIMARY:
        return lookup
    P = _positive(x.P, "P")
    keys_probed = x.n if method == "random" else 1.0
    value = keys_probed * lookup + (x.K / P) * keys_probed * (x.R2 / x.K) * x.n
    if deployment is Deployment.FULL:
        value += (x.R1 / _positive(x.R2, "R2")) * x.m
    return value

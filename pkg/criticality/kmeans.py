"""
Deterministic one-dimensional k-means (Lloyd iteration).

Seeds are evenly spaced order statistics of the distinct sorted values, so the same
data always clusters the same way. Ties in the nearest-center step go to the
lower-indexed center; a cluster that loses all members keeps its previous center.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class ClusterResult:
    assignments: Tuple[int, ...]
    centers: Tuple[float, ...]
    max_distance: float

    @property
    def K(self) -> int:
        return len(self.centers)

    def members(self, cluster: int) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.assignments) if c == cluster)

    def occupied(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.assignments)))


def _seeds(values: np.ndarray, K: int) -> np.ndarray:
    pool = np.unique(values)
    if K > len(pool):
        pool = np.sort(values)
    n = len(pool)
    if K == 1:
        return np.array([pool[(n - 1) // 2]], dtype=float)
    return np.array([pool[round(j * (n - 1) / (K - 1))] for j in range(K)], dtype=float)


def kmeans(data: Sequence[float], K: int) -> ClusterResult:
    values = np.asarray(data, dtype=float)
    if values.size == 0:
        raise ValueError("k-means needs at least one value")
    if not 1 <= K <= values.size:
        raise ValueError(f"K must lie in [1, {values.size}], got {K}")

    centers = _seeds(values, K)
    assignments = None
    for _ in range(MAX_ITERATIONS):
        # argmin returns the first minimum, i.e. the lower-indexed center
        nearest = np.argmin(np.abs(values[:, None] - centers[None, :]), axis=1)
        if assignments is not None and np.array_equal(nearest, assignments):
            break
        assignments = nearest
        for j in range(K):
            members = values[assignments == j]
            if members.size:
                centers[j] = members.mean()
    else:
        logger.warning(f"k-means did not settle after {MAX_ITERATIONS} iterations (K={K})")

    distance = float(np.max(np.abs(values - centers[assignments])))
    logger.debug(f"k-means K={K}: centers {centers.tolist()}, max distance {distance:.6g}")
    return ClusterResult(tuple(int(a) for a in assignments), tuple(float(c) for c in centers), distance)

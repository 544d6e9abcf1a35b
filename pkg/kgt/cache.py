"""
Quadrature rule cache with hit/miss statistics.
"""

import logging
from typing import Any, Callable, Dict, Hashable, Tuple

import numpy as np
from cachetools import LRUCache

from kgt.config import settings

logger = logging.getLogger(__name__)

Rule = Tuple[np.ndarray, np.ndarray]


def _freeze(*arrays: np.ndarray) -> Tuple[np.ndarray, ...]:
    for array in arrays:
        array.setflags(write=False)
    return arrays


class RuleCache:
    """LRU cache of quadrature rules keyed by their defining parameters."""

    def __init__(self, max_size: int = 64):
        self.max_size = max_size
        self.data_cache: LRUCache = LRUCache(maxsize=max_size)
        self.stats = {
            "hits": 0,
            "misses": 0,
            "sets": 0,
        }

    def _get_or_build(self, key: Hashable, build: Callable[[], Any]) -> Any:
        try:
            value = self.data_cache[key]
        except KeyError:
            self.stats["misses"] += 1
            value = build()
            self.data_cache[key] = value
            self.stats["sets"] += 1
            return value
        self.stats["hits"] += 1
        return value

    def gauss_legendre(self, order: int) -> Rule:
        """Nodes and weights of the ``order``-point rule on [-1, 1]."""
        def build() -> Rule:
            nodes, weights = np.polynomial.legendre.leggauss(order)
            return _freeze(nodes, weights)

        return self._get_or_build(("gl", order), build)

    def composite_rule(self, a: float, b: float, n_panels: int, order: int = 16) -> Rule:
        """Composite Gauss-Legendre rule on [a, b] with equal panels."""
        def build() -> Rule:
            nodes, weights = self.gauss_legendre(order)
            edges = np.linspace(a, b, n_panels + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[:-1] + edges[1:])
            x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
            w = (half[:, None] * weights[None, :]).ravel()
            return _freeze(x, w)

        logger.debug(f"composite rule [{a:.6g}, {b:.6g}] x {n_panels} panels")
        return self._get_or_build(("composite", float(a), float(b), n_panels, order), build)

    def sphere_rule(self, n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Reference product rule for spherical means: Gauss-Legendre nodes and
        weights in cos(theta) on [-1, 1], and (n_phi, 2) azimuth unit vectors.
        """
        def build():
            mu, w_mu = self.gauss_legendre(n_theta)
            phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
            azimuth = np.stack([np.cos(phi), np.sin(phi)], axis=1)
            return _freeze(mu, w_mu, azimuth)

        return self._get_or_build(("sphere", n_theta, n_phi), build)

    def get_stats(self) -> Dict[str, Any]:
        """Hit rate and occupancy."""
        total_requests = self.stats["hits"] + self.stats["misses"]
        hit_rate = (self.stats["hits"] / total_requests * 100) if total_requests > 0 else 0

        return {
            "hits": self.stats["hits"],
            "misses": self.stats["misses"],
            "hit_rate": round(hit_rate, 2),
            "sets": self.stats["sets"],
            "size": len(self.data_cache),
            "max_size": self.max_size,
        }


# Global rule cache instance
rule_cache = RuleCache(max_size=settings.RULE_CACHE_SIZE)

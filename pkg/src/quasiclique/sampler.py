"""Sampling G(n, kappa) and the coupled graph triple used in the concentration proof.

Every random quantity comes from a Philox (counter-based) stream keyed by a
64-bit seed plus a small integer key, so results never depend on scheduling:

* key ``(0,)`` draws the vertex weights W_i,
* key ``(1,)`` draws one uniform U_ij per pair i < j, in lexicographic order.

Because :func:`sample` and :func:`sample_coupled` read the same two streams,
``sample(k, n, s).graph == sample_coupled(k, n, delta, s).g`` for every seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, VertexSet
from .kernels import Kernel

WEIGHT_KEY = 0
PAIR_KEY = 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based generator for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit child seed for replication ``index``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be non-negative")
    return rng.random(n)


def pair_probabilities(kernel: Kernel, weights: np.ndarray) -> np.ndarray:
    """kappa(W_i, W_j) for all pairs i < j in lexicographic order."""
    i, j = np.triu_indices(len(weights), k=1)
    return kernel(weights[i], weights[j]) if len(i) else np.zeros(0)


def threshold_graph(n: int, uniforms: np.ndarray, probs) -> Graph:
    """Graph with edge {i, j} iff U_ij <= p_ij (pairs in lexicographic order)."""
    uniforms = np.asarray(uniforms)
    if uniforms.shape != (n * (n - 1) // 2,):
        raise ValueError("need one uniform per unordered pair")
    keep = uniforms <= probs
    adj = np.zeros((n, n), dtype=bool)
    i, j = np.triu_indices(n, k=1)
    adj[i[keep], j[keep]] = True
    adj |= adj.T
    return Graph.from_adjacency(adj)


def sample_graph(kernel: Kernel, weights: np.ndarray, rng: np.random.Generator) -> Graph:
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or np.any(weights > 1):
        raise ValueError("weights must lie in [0, 1]")
    n = len(weights)
    u = rng.random(n * (n - 1) // 2)
    return threshold_graph(n, u, pair_probabilities(kernel, weights))


def dense_core(weights, c: float, delta: float) -> VertexSet:
    """Vertices whose weight lies in [c - delta, c + delta] (clipped to [0, 1])."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    w = np.asarray(weights, dtype=float)
    idx = np.flatnonzero((w >= c - delta) & (w <= c + delta))
    return VertexSet.of(int(i) for i in idx)


def core_probability(c: float, delta: float) -> float:
    """P(W in [c - delta, c + delta]) for W uniform on [0, 1]."""
    return min(1.0, c + delta) - max(0.0, c - delta)


def default_delta(n: int) -> float:
    """1 / log(n), capped at 0.5."""
    if n <= 1:
        raise ValueError(f"default delta needs n >= 2, got {n}")
    return min(0.5, 1.0 / math.log(n))


@dataclass(frozen=True, eq=False)
class WeightedSample:
    graph: Graph
    weights: np.ndarray
    seed: int
    kernel_id: str

    def sidecar(self) -> dict:
        return {"seed": self.seed, "kernel_id": self.kernel_id,
                "weights": [float(w) for w in self.weights]}

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), indent=1)


def sample(kernel: Kernel, n: int, seed: int) -> WeightedSample:
    weights = sample_weights(n, stream(seed, WEIGHT_KEY))
    g = sample_graph(kernel, weights, stream(seed, PAIR_KEY))
    return WeightedSample(g, weights, int(seed), kernel.kernel_id)


@dataclass(frozen=True, eq=False)
class CoupledTriple:
    """G ~ G(n, kappa), G' ~ G(n, p_max) and G'' ~ G(n, p_n) built from shared uniforms."""

    g: Graph
    g_upper: Graph
    g_lower: Graph
    weights: np.ndarray
    probs: np.ndarray
    c: float
    delta: float
    p_max: float
    p_n: float
    core: VertexSet
    seed: int


def sample_coupled(kernel: Kernel, n: int, delta: float, master_seed: int) -> CoupledTriple:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    c, p_max = kernel.max_point()
    p_n = kernel.inf_on_square(c, delta)
    weights = sample_weights(n, stream(master_seed, WEIGHT_KEY))
    u = stream(master_seed, PAIR_KEY).random(n * (n - 1) // 2)
    probs = pair_probabilities(kernel, weights)
    return CoupledTriple(
        g=threshold_graph(n, u, probs),
        g_upper=threshold_graph(n, u, p_max),
        g_lower=threshold_graph(n, u, p_n),
        weights=weights,
        probs=probs,
        c=c,
        delta=delta,
        p_max=p_max,
        p_n=p_n,
        core=dense_core(weights, c, delta),
        seed=int(master_seed),
    )

"""Blurred ball growing.

Starting from a seed set b, repeatedly contract the current set into a
virtual source, run approximate SSSP, and absorb every vertex whose tree
distance is at most a fresh radius drawn uniformly from [0, alpha^(i-1)*rho].
The radius cap shrinks geometrically, so the loop stops once it falls below
the shortest edge of the graph part being blurred.

Deterministic guarantees (any oracle respecting its error bound):
  * b is contained in the result U,
  * every vertex of U is within rho/(1-alpha) of b in the input part.
Randomized guarantee, verified by the harness: an edge is cut (one endpoint
in U, the other outside) with probability O(len(e)/rho).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, contract_into_super_source
from .oracle import CallLedger, OracleConfig, approx_sssp
from .sampling import RandomStream, sample_uniform


class BlurError(ValueError):
    pass


def _log2_floored(n: int) -> float:
    return max(float(np.log2(n)), 1.0) if n >= 1 else 1.0


@dataclass(frozen=True)
class BlurParams:
    """rho: radius budget; alpha: decay in (0, 1/2]; eps: oracle error <= alpha^2."""

    rho: float
    alpha: float
    eps: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise BlurError("rho must be positive")
        if not (0 < self.alpha <= 0.5):
            raise BlurError("alpha must lie in (0, 1/2]")
        if not (0 <= self.eps <= self.alpha**2):
            raise BlurError("oracle error must not exceed alpha^2")

    @classmethod
    def default(cls, n: int, rho: float) -> "BlurParams":
        """alpha = 1/(2 log2 n) with n the original graph's vertex count
        (log2 floored at 1); oracle error pinned to alpha^2."""
        alpha = 1.0 / (2.0 * _log2_floored(n))
        return cls(rho=float(rho), alpha=alpha, eps=alpha**2)

    def reach(self) -> float:
        """Deterministic distance cap for absorbed vertices: rho/(1-alpha)."""
        return self.rho / (1.0 - self.alpha)


@dataclass
class BlurTrace:
    """Per-round records (round index, radius, set size) plus the final set."""

    steps: list = field(default_factory=list)
    final: np.ndarray | None = None
    sets: list | None = None


def blur(g: Graph, params: BlurParams, b, cfg: OracleConfig,
         stream: RandomStream, ledger: CallLedger | None = None,
         *, batch: tuple = (0, 0, 0), keep_sets: bool = False):
    """Grow the seed set b inside the graph part g.

    Returns (U, trace) where U is a sorted id array containing b. batch is
    (context, level, iteration) for the ledger; the blur round index is
    appended per call. keep_sets snapshots every intermediate set into the
    trace for instrumented audits.
    """
    b = np.unique(np.asarray(b, dtype=np.int64).reshape(-1))
    if len(b):
        pos = np.searchsorted(g.ids, b)
        if (pos >= g.n).any() or not (g.ids[np.minimum(pos, g.n - 1)] == b).all():
            raise GraphError("seed set contains foreign vertex id")
    trace = BlurTrace(sets=[b.copy()] if keep_sets else None)
    if len(b) == 0:
        trace.final = b
        return b, trace
    ell_min = g.min_edge_length()
    current = b
    i = 0
    while params.alpha**i * params.rho >= ell_min:
        i += 1
        radius = sample_uniform(stream, params.alpha ** (i - 1) * params.rho)
        contracted = contract_into_super_source(g, current)
        tree = approx_sssp(contracted, contracted.s, cfg, ledger,
                           eps=params.eps, phase="blur",
                           batch=(batch[0], batch[1], batch[2], i - 1))
        reach = tree.dist <= radius
        reach[-1] = False  # never re-absorb the virtual source itself
        absorbed = tree.ids[reach]
        current = np.union1d(current, absorbed)
        trace.steps.append((i, float(radius), int(len(current))))
        if keep_sets:
            trace.sets.append(current.copy())
    trace.final = current
    return current, trace

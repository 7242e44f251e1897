"""Kernels kappa: [0,1]^2 -> (0,1) for the inhomogeneous random graph model.

Four variants cover the usual model classes: a constant kernel (Erdos-Renyi),
rank-1 kernels phi(x) phi(y) with piecewise-linear phi, block kernels
(stochastic block model) and bilinearly interpolated grids.

All kernels evaluate on scalars or broadcastable numpy arrays::

    >>> k = Rank1(((0.0, 0.2), (1.0, 0.8)))
    >>> round(k(1.0, 1.0), 12)
    0.64
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np


class KernelError(ValueError):
    pass


class OffDiagonalMaximum(KernelError):
    """The kernel's maximum is not attained on the diagonal."""


class MaxPoint(NamedTuple):
    c: float
    p_max: float


# tolerance for "diagonal max equals global max"
OFF_DIAGONAL_TOL = 1e-6


def _check_prob(values, what: str) -> None:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise KernelError(f"{what} must lie strictly inside (0, 1)")


def _check_unit(x, y) -> None:
    if np.any(np.asarray(x) < 0) or np.any(np.asarray(x) > 1) \
            or np.any(np.asarray(y) < 0) or np.any(np.asarray(y) > 1):
        raise KernelError("kernel arguments must lie in [0, 1]")


def _clip_interval(c: float, delta: float) -> tuple[float, float]:
    if not delta > 0:
        raise KernelError(f"delta must be positive, got {delta}")
    return max(0.0, c - delta), min(1.0, c + delta)


class Kernel:
    """Base class; subclasses implement ``_values``, ``max_point`` and ``inf_on_square``."""

    kind: str = ""

    def __call__(self, x, y):
        _check_unit(x, y)
        out = self._values(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def _values(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def max_point(self) -> MaxPoint:
        raise NotImplementedError

    def inf_on_square(self, c: float, delta: float) -> float:
        """Infimum of the kernel over ``([c - delta, c + delta] cap [0, 1])^2``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @property
    def kernel_id(self) -> str:
        """Content hash of the canonical JSON config."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True, eq=True)
class Constant(Kernel):
    p: float
    kind = "constant"

    def __post_init__(self):
        _check_prob(self.p, "p")

    def _values(self, x, y):
        return np.full(np.broadcast(x, y).shape, self.p)

    def max_point(self) -> MaxPoint:
        return MaxPoint(0.5, float(self.p))

    def inf_on_square(self, c, delta):
        _clip_interval(c, delta)
        return float(self.p)

    def to_dict(self):
        return {"type": "constant", "p": self.p}


@dataclass(frozen=True, eq=True)
class Rank1(Kernel):
    """kappa(x, y) = phi(x) * phi(y), phi linear between ``(x, phi(x))`` knots."""

    knots: tuple[tuple[float, float], ...]
    kind = "rank1"

    def __post_init__(self):
        knots = tuple((float(a), float(b)) for a, b in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise KernelError("rank1 kernel needs at least two knots")
        xs = [k[0] for k in knots]
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise KernelError("rank1 knots must start at x=0 and end at x=1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise KernelError("rank1 knot x-values must be strictly increasing")
        _check_prob([k[1] for k in knots], "phi values")

    @property
    def xs(self) -> np.ndarray:
        return np.array([k[0] for k in self.knots])

    @property
    def phis(self) -> np.ndarray:
        return np.array([k[1] for k in self.knots])

    def phi(self, x):
        return np.interp(x, self.xs, self.phis)

    def _values(self, x, y):
        return self.phi(x) * self.phi(y)

    def max_point(self) -> MaxPoint:
        # piecewise-linear phi peaks at a knot; argmax takes the first on ties
        i = int(np.argmax(self.phis))
        c, f = self.knots[i]
        return MaxPoint(c, f * f)

    def inf_on_square(self, c, delta):
        lo, hi = _clip_interval(c, delta)
        xs = self.xs
        pts = np.concatenate(([lo, hi], xs[(xs > lo) & (xs < hi)]))
        f = float(np.min(self.phi(pts)))
        return f * f

    def to_dict(self):
        return {"type": "rank1", "knots": [list(k) for k in self.knots]}


@dataclass(frozen=True, eq=True)
class Block(Kernel):
    """Piecewise-constant kernel on the blocks cut by ``cuts``.

    A point sitting exactly on a breakpoint belongs to the lower-index block.
    """

    cuts: tuple[float, ...]
    probs: tuple[tuple[float, ...], ...]
    kind = "block"

    def __post_init__(self):
        cuts = tuple(float(t) for t in self.cuts)
        probs = tuple(tuple(float(v) for v in row) for row in self.probs)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "probs", probs)
        if len(cuts) < 2 or cuts[0] != 0.0 or cuts[-1] != 1.0:
            raise KernelError("block cuts must start at 0 and end at 1")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise KernelError("block cuts must be strictly increasing")
        k = len(cuts) - 1
        a = np.array(probs, dtype=float)
        if a.shape != (k, k):
            raise KernelError(f"probs must be a {k}x{k} matrix")
        if not np.array_equal(a, a.T):
            raise KernelError("probs must be symmetric")
        _check_prob(a, "block probabilities")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.probs)

    def cell(self, x):
        return np.searchsorted(np.array(self.cuts[1:-1]), x, side="left")

    def _values(self, x, y):
        return self.matrix[self.cell(x), self.cell(y)]

    def max_point(self) -> MaxPoint:
        a = self.matrix
        diag = np.diag(a)
        i = int(np.argmax(diag))
        if diag[i] < a.max() - OFF_DIAGONAL_TOL:
            raise OffDiagonalMaximum(
                f"block kernel maximum {a.max()} is off the diagonal "
                f"(best diagonal block {diag[i]})")
        return MaxPoint(0.5 * (self.cuts[i] + self.cuts[i + 1]), float(diag[i]))

    def inf_on_square(self, c, delta):
        lo, hi = _clip_interval(c, delta)
        i, j = int(self.cell(lo)), int(self.cell(hi))
        return float(self.matrix[i:j + 1, i:j + 1].min())

    def to_dict(self):
        return {"type": "block", "cuts": list(self.cuts), "probs": [list(r) for r in self.probs]}


@dataclass(frozen=True, eq=True)
class Grid(Kernel):
    """Bilinear interpolation of a symmetric (d+1)x(d+1) table on the grid i/d."""

    values: tuple[tuple[float, ...], ...]
    kind = "grid"

    def __post_init__(self):
        vals = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", vals)
        a = np.array(vals, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise KernelError("grid values must be a square matrix of side >= 2")
        if not np.array_equal(a, a.T):
            raise KernelError("grid values must be symmetric")
        _check_prob(a, "grid values")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.values)

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def _values(self, x, y):
        v, d = self.matrix, self.d
        # sorted arguments make the rounding, hence the result, exactly symmetric
        x, y = np.minimum(x, y) * d, np.maximum(x, y) * d
        x, y = np.broadcast_arrays(x, y)
        i = np.minimum(np.floor(x).astype(int), d - 1)
        j = np.minimum(np.floor(y).astype(int), d - 1)
        s, t = x - i, y - j
        return (v[i, j] * (1 - s) * (1 - t) + v[i + 1, j] * s * (1 - t)
                + v[i, j + 1] * (1 - s) * t + v[i + 1, j + 1] * s * t)

    def max_point(self) -> MaxPoint:
        v, d = self.matrix, self.d
        best_c, best = 0.0, -1.0
        # on diagonal cell i the interpolant is a quadratic in the offset t
        for i in range(d):
            a0, a1, a2 = v[i, i], v[i, i + 1] + v[i + 1, i], v[i + 1, i + 1]
            lin, quad = a1 - 2 * a0, a0 - a1 + a2
            ts = [0.0, 1.0]
            if quad < 0:
                t = -lin / (2 * quad)
                if 0 < t < 1:
                    ts.append(t)
            for t in sorted(ts):
                c = (i + t) / d
                val = float(self(c, c))
                if val > best + 1e-15:
                    best_c, best = c, val
        if best < v.max() - OFF_DIAGONAL_TOL:
            raise OffDiagonalMaximum(
                f"grid kernel maximum {v.max()} is off the diagonal (diagonal max {best})")
        return MaxPoint(best_c, best)

    def inf_on_square(self, c, delta):
        lo, hi = _clip_interval(c, delta)
        # bilinear pieces attain their extremes at the corners of each clipped cell
        g = np.arange(self.d + 1) / self.d
        pts = np.concatenate(([lo, hi], g[(g > lo) & (g < hi)]))
        return float(np.min(self(pts[:, None], pts[None, :])))

    def to_dict(self):
        return {"type": "grid", "values": [list(r) for r in self.values]}


def kernel_from_dict(cfg: dict) -> Kernel:
    try:
        kind = cfg["type"]
        if kind == "constant":
            return Constant(float(cfg["p"]))
        if kind == "rank1":
            return Rank1(tuple(tuple(k) for k in cfg["knots"]))
        if kind == "block":
            return Block(tuple(cfg["cuts"]), tuple(tuple(r) for r in cfg["probs"]))
        if kind == "grid":
            return Grid(tuple(tuple(r) for r in cfg["values"]))
    except KeyError as exc:
        raise KernelError(f"kernel config missing field {exc}") from None
    raise KernelError(f"unknown kernel type {cfg.get('type')!r}")


def load_kernel(path: str | Path) -> Kernel:
    with open(path) as fh:
        return kernel_from_dict(json.load(fh))

"""Closed-form predictions for the quasi-clique number of dense random graphs.

All logarithms are natural.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .gamma import GammaLike, as_gamma


class HypothesisViolation(ValueError):
    """gamma <= p_max: the concentration result does not apply."""


class NearDegenerateWarning(UserWarning):
    """The divergence is so small that the prediction is numerically meaningless."""


class DegenerateWindowWarning(UserWarning):
    pass


NEAR_DEGENERATE_KL = 1e-6


def kl_bernoulli(gamma: GammaLike, p: float) -> float:
    """KL divergence D(Bern(gamma) || Bern(p))."""
    g = as_gamma(gamma)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if g == 0:
        raise ValueError("gamma must be positive")
    if g == 1:
        return math.log(1.0 / p)
    if float(g) == p:
        return 0.0
    gf = float(g)
    # gamma*a + (1-gamma)*b == d^2 / (p (1-p)) exactly; the remainders are
    # log1p(u) - u, which keeps precision when gamma is close to p
    d = gf - p
    a, b = d / p, -d / (1.0 - p)
    return (d * d / (p * (1.0 - p)) + gf * (math.log1p(a) - a)
            + (1.0 - gf) * (math.log1p(b) - b))


def check_hypothesis(gamma: GammaLike, p_max: float) -> Fraction:
    """Require p_max < gamma, both exactly and after rounding gamma to a float.

    The float test matters for inputs like p_max = 0.7, gamma = 7/10, where
    the float 0.7 sits just below 7/10 but the divergence evaluates to zero.
    """
    g = as_gamma(gamma)
    if not (Fraction(p_max) < g and p_max < float(g)):
        raise HypothesisViolation(f"need p_max < gamma, got p_max={p_max}, gamma={g}")
    return g


def _checked_kl(n: int, gamma: GammaLike, p_max: float, min_n: int) -> float:
    g = as_gamma(gamma)
    if n < min_n:
        raise ValueError(f"n must be at least {min_n}, got {n}")
    if not 0.0 < p_max < 1.0:
        raise ValueError(f"p_max must lie in (0, 1), got {p_max}")
    check_hypothesis(g, p_max)
    kl = kl_bernoulli(g, p_max)
    if kl < NEAR_DEGENERATE_KL:
        warnings.warn(f"D(gamma, p_max) = {kl:.3g} is nearly zero; prediction is huge",
                      NearDegenerateWarning, stacklevel=3)
    return kl


def typical_qcn(n: int, gamma: GammaLike, p_max: float) -> float:
    """First-order concentration point 2 log(n) / D(gamma, p_max)."""
    kl = _checked_kl(n, gamma, p_max, 2)
    return 2.0 * math.log(n) / kl


def refined_estimate(n: int, gamma: GammaLike, p: float) -> float:
    """Second-order point estimate (2/D)(log n - log log n + log(e D / 2)) + 1."""
    kl = _checked_kl(n, gamma, p, 3)
    ln = math.log(n)
    return 2.0 / kl * (ln - math.log(ln) + 1.0 + math.log(kl / 2.0)) + 1.0


@dataclass(frozen=True)
class TheoryEstimates:
    gamma: Fraction
    p_max: float
    n: int
    kl: float
    omega_tilde: float
    refined: float

    def window(self, epsilon: float) -> tuple[float, float]:
        return window(self.omega_tilde, epsilon)


def estimates(n: int, gamma: GammaLike, p_max: float) -> TheoryEstimates:
    g = as_gamma(gamma)
    return TheoryEstimates(
        gamma=g,
        p_max=p_max,
        n=n,
        kl=kl_bernoulli(g, p_max),
        omega_tilde=typical_qcn(n, g, p_max),
        refined=refined_estimate(n, g, p_max),
    )


def window(omega_tilde: float, epsilon: float) -> tuple[float, float]:
    """The interval [(1 - eps) w, (1 + eps) w].

    ``epsilon == 0`` is accepted as a degenerate limit and warns.
    """
    if epsilon == 0:
        warnings.warn("epsilon = 0 gives a degenerate window", DegenerateWindowWarning,
                      stacklevel=2)
    elif not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return (1.0 - epsilon) * omega_tilde, (1.0 + epsilon) * omega_tilde

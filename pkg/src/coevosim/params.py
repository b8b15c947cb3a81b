"""Model parameters: the four reaction rates and the time horizon.

Reactions and their rates:
  * recovery of an infected node          alpha
  * transmission across an SI edge        beta
  * association of a non-adjacent S pair  a
  * dissociation of an II edge            b

``beta`` and ``a`` may be given in scaled form (beta = beta_prime / <d>,
a = a_prime / n, with <d> the measured mean degree of the initial graph),
which keeps one parameter set usable across graph sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError


@dataclass(frozen=True)
class Params:
    alpha: float
    beta: float
    a: float
    b: float
    horizon: float

    def __post_init__(self):
        for name in ("alpha", "beta", "a", "b"):
            if getattr(self, name) < 0:
                raise UsageError(f"rate {name} must be >= 0")
        if self.horizon <= 0:
            raise UsageError("horizon must be > 0")


def scale_beta(beta_prime: float, mean_degree: float) -> float:
    if mean_degree <= 0:
        raise UsageError(
            "cannot resolve beta_prime against a graph with mean degree 0; "
            "pass --beta instead")
    return beta_prime / mean_degree


def scale_a(a_prime: float, n: int) -> float:
    return a_prime / n


def resolve_params(
    *,
    alpha: float,
    b: float,
    horizon: float,
    n: int,
    mean_degree: float,
    beta: float | None = None,
    beta_prime: float | None = None,
    a: float | None = None,
    a_prime: float | None = None,
) -> Params:
    """Build Params from absolute or scaled inputs.

    Exactly one of (beta, beta_prime) and one of (a, a_prime) must be given.
    """
    if (beta is None) == (beta_prime is None):
        raise UsageError("give exactly one of beta / beta_prime")
    if (a is None) == (a_prime is None):
        raise UsageError("give exactly one of a / a_prime")
    if beta is None:
        beta = scale_beta(beta_prime, mean_degree)
    if a is None:
        a = scale_a(a_prime, n)
    return Params(alpha=alpha, beta=beta, a=a, b=b, horizon=horizon)

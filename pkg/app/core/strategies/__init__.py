"""Codebreaker registry.

``build_strategy`` turns a CLI/API strategy name plus layout overrides into a
ready :class:`~app.core.harness.Strategy`; ``resolve_mu`` picks or checks
the memory size that goes with it.
"""

from __future__ import annotations

from app.core.codec import size_one_layout, size_two_layout
from app.core.errors import ArgumentError, InfeasibleLayoutError
from app.core.game import GameParams
from app.core.harness import Strategy
from app.core.strategies.rls import RlsStrategy
from app.core.strategies.size_one import SizeOneStrategy
from app.core.strategies.size_two import SizeTwoStrategy
from app.core.strategies.unrestricted import UnrestrictedStrategy

STRATEGY_NAMES = ("size-one", "size-two", "unrestricted", "rls")

# Memory sizes the encoding strategies are written for.
_FIXED_MU = {"size-one": 1, "size-two": 2}


def build_strategy(
    name: str,
    params: GameParams,
    *,
    epsilon: float | None = None,
    big_k: float | None = None,
    block_size: int | None = None,
    samples: int | None = None,
    budget: int | None = None,
) -> Strategy:
    if name == "size-one":
        layout = size_one_layout(
            params.n,
            params.k,
            epsilon=epsilon,
            big_k=big_k,
            block_size=block_size,
            samples=samples,
        )
        return SizeOneStrategy(params, layout)
    if name == "size-two":
        layout = size_two_layout(
            params.n, params.k, epsilon=epsilon, block_size=block_size, samples=samples
        )
        return SizeTwoStrategy(params, layout)
    if name == "unrestricted":
        return UnrestrictedStrategy(params, epsilon=epsilon, samples=samples, budget=budget)
    if name == "rls":
        return RlsStrategy(params)
    raise ArgumentError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")


def check_mu(name: str, mu: int) -> None:
    """Reject memory sizes a strategy is not written for."""
    if mu < 1:
        raise ArgumentError(f"memory size must be at least 1, got {mu}")
    fixed = _FIXED_MU.get(name)
    if fixed is not None and mu != fixed:
        raise ArgumentError(f"{name} runs with mu={fixed}, not mu={mu}")


def resolve_mu(name: str, strategy: Strategy, mu: int | None = None) -> int:
    """``mu`` if given (after checking), else the strategy's natural memory size."""
    if mu is None:
        if name in _FIXED_MU:
            return _FIXED_MU[name]
        if isinstance(strategy, UnrestrictedStrategy):
            return strategy.default_capacity()
        return 1
    check_mu(name, mu)
    if isinstance(strategy, UnrestrictedStrategy) and mu < strategy.required_capacity():
        raise InfeasibleLayoutError(
            f"unrestricted guessing needs mu >= {strategy.required_capacity()}, got {mu}"
        )
    return mu


__all__ = [
    "STRATEGY_NAMES",
    "RlsStrategy",
    "SizeOneStrategy",
    "SizeTwoStrategy",
    "UnrestrictedStrategy",
    "build_strategy",
    "check_mu",
    "resolve_mu",
]

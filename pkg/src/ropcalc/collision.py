"""Collision (shared-value) probabilities for uniform draws from huge spaces.

Computes the probability that ``p`` independent draws, uniform with
replacement over ``t`` equally likely distinct values, contain at least one
repeated value.  The space size ``t`` may be far beyond what fits in any
machine integer (up to 1e30), and the population ``p`` may run into the
trillions, so everything is evaluated through the log of the survival
(no-repeat) probability rather than the product itself.

Two evaluation routes are provided:

* ``survival_log_exact`` walks the product factors (t - n) / t directly,
  taking each factor as log1p(-n / t) and accumulating with compensated
  summation over fixed-size blocks.  Cost is O(p).
* ``survival_log_series`` expands each log1p term as a power series and
  swaps the order of summation, which turns the whole sum into a handful
  of cumulative power sums evaluated in closed form.  Cost is O(order)
  regardless of p, and the truncation error carries a certified bound.

Both routes use fixed partitioning and a fixed reduction order, so results
are reproducible bit for bit from run to run.  All public functions are
pure and safe for concurrent use.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "IterationBudgetError",
    "SeriesBoundError",
    "SpaceSize",
    "EvalResult",
    "EXACT",
    "SERIES",
    "AUTO",
    "MAX_SPACE",
    "DEFAULT_EXACT_BUDGET",
    "as_space_size",
    "pair_count",
    "survival_log_exact",
    "survival_log_series",
    "collision_probability",
]

# Largest supported space size.  Beyond this the closed-form routes would
# need guard rails we have not validated, so inputs are rejected.
MAX_SPACE = 1e30

# Auto gives up on the O(p) product above this many factors unless told
# otherwise; 1e8 log1p evaluations complete in a few seconds.
DEFAULT_EXACT_BUDGET = 10**8

# Auto prefers the series once p/t drops below this ratio: the truncation
# bound is then far below _AUTO_BOUND_TARGET after a few terms and the
# series costs O(1) instead of O(p).
_AUTO_SERIES_RATIO = 1e-4

# Bound target for auto-selected series evaluations (absolute, on the
# probability).
_AUTO_BOUND_TARGET = 1e-12

# The certified geometric tail bound needs the term ratio to stay below 1
# with margin; refuse the series above this draw/space ratio.
_SERIES_MAX_RATIO = 0.5

# Fixed block length for the exact product sum.  Blocks are summed with
# numpy's pairwise reduction and combined with Neumaier compensation, so
# the partitioning itself is part of the (deterministic) algorithm.
_BLOCK = 1 << 16

# Rounding allowance folded into reported error bounds: covers term
# evaluation and accumulation noise of both evaluation routes with a wide
# margin (measured worst case is below 1e-14 relative).
_ROUNDING_UNIT = 1e-13

# Absolute allowance for the single log-to-probability rounding step of
# each route: two correctly-rounded expm1 calls cost at most one ulp of a
# result near 1 (~2.2e-16) combined; 5e-16 leaves better than 2x headroom.
_FINAL_ROUNDING = 5e-16

_LN2 = math.log(2.0)

EXACT = "exact"
SERIES = "series"
AUTO = "auto"

_MAX_EXACT_INT = 2**63 - 1


class DomainError(ValueError):
    """An argument fell outside the supported domain."""


class IterationBudgetError(RuntimeError):
    """The exact product would need more factors than the budget allows."""


class SeriesBoundError(DomainError):
    """The series truncation bound is not certified for these arguments."""


@dataclass(frozen=True)
class SpaceSize:
    """Number of equally likely distinct values in the space.

    ``value`` is the real-valued size, supported up to 1e30.  ``exact``
    carries the integer form when the size is an integer small enough
    (at most 2**63 - 1) to round-trip through a float exactly; it is None
    otherwise.  The exact form makes threshold comparisons (for the
    guaranteed-repeat cutoff) free of float rounding.
    """

    value: float
    exact: "int | None" = None

    def __post_init__(self):
        v = self.value
        if not isinstance(v, float):
            raise DomainError(f"space size value must be a float, got {type(v).__name__}")
        if not math.isfinite(v) or v < 1.0:
            raise DomainError(f"space size must be finite and >= 1, got {v!r}")
        if v > MAX_SPACE:
            raise DomainError(f"space size {v!r} exceeds the supported maximum 1e30")
        if self.exact is not None:
            if self.exact > _MAX_EXACT_INT:
                raise DomainError("exact space form only supported up to 2**63 - 1")
            if float(self.exact) != v:
                raise DomainError("exact space form does not match the real value")


def as_space_size(t) -> SpaceSize:
    """Coerce an int, float, or SpaceSize into a validated SpaceSize."""
    if isinstance(t, SpaceSize):
        return t
    if isinstance(t, bool):
        raise DomainError("space size must be a number, not bool")
    if isinstance(t, int):
        if t < 1:
            raise DomainError(f"space size must be >= 1, got {t}")
        if t > int(MAX_SPACE):
            raise DomainError(f"space size {t} exceeds the supported maximum 1e30")
        exact = t if t <= _MAX_EXACT_INT and float(t) == t else None
        return SpaceSize(float(t), exact)
    if isinstance(t, float):
        exact = None
        if math.isfinite(t) and t.is_integer() and t <= float(_MAX_EXACT_INT):
            candidate = int(t)
            if candidate <= _MAX_EXACT_INT and float(candidate) == t:
                exact = candidate
        return SpaceSize(t, exact)
    raise DomainError(f"space size must be int, float, or SpaceSize, got {type(t).__name__}")


def _as_count(p, what="population") -> int:
    """Validate a non-negative whole number of draws."""
    if isinstance(p, bool):
        raise DomainError(f"{what} must be a whole number, not bool")
    if isinstance(p, int):
        n = p
    elif isinstance(p, float):
        if not (math.isfinite(p) and p.is_integer()):
            raise DomainError(f"{what} must be a whole number, got {p!r}")
        n = int(p)
    else:
        raise DomainError(f"{what} must be a whole number, got {type(p).__name__}")
    if n < 0:
        raise DomainError(f"{what} must be >= 0, got {n}")
    return n


@dataclass(frozen=True)
class EvalResult:
    """Outcome of one collision-probability evaluation.

    probability     chance of at least one repeat, in [0, 1]
    log_survival    natural log of the no-repeat probability (<= 0;
                    -inf when a repeat is guaranteed)
    method          "exact" or "series" (the route actually used)
    abs_error_bound absolute bound on the probability error; 0 for the
                    exact route, which is the reference
    order           series truncation order, None for the exact route
    """

    probability: float
    log_survival: float
    method: str
    abs_error_bound: float
    order: "int | None" = None


def _result_from_log(v: float, method: str, bound: float, order=None) -> EvalResult:
    prob = -math.expm1(v)
    if prob == 0.0:
        prob = 0.0  # normalize -0.0
    return EvalResult(prob, v, method, bound, order)


def pair_count(n) -> int:
    """Number of unordered pairs among n items, n*(n-1)/2, exactly.

    Evaluated in arbitrary-precision integers, so there is no overflow for
    populations in the billions and beyond.
    """
    n = _as_count(n, what="pair count argument")
    return n * (n - 1) // 2


def _is_guaranteed_repeat(space: SpaceSize, p: int) -> bool:
    # With p >= t + 1 draws over t values a repeat is forced.
    if space.exact is not None:
        return p >= space.exact + 1
    return p >= space.value + 1.0


def _survival_log_product(t: float, p: int) -> float:
    """Sum of log1p(-n/t) for n in [1, p-1] with fixed-block compensation."""
    total = 0.0
    comp = 0.0
    for start in range(1, p, _BLOCK):
        stop = min(p, start + _BLOCK)
        n = np.arange(start, stop, dtype=np.float64)
        part = float(np.sum(np.log1p(-(n / t))))
        # Neumaier update keeps the running error of the block partials
        s = total + part
        if abs(total) >= abs(part):
            comp += (total - s) + part
        else:
            comp += (part - s) + total
        total = s
    return total + comp


def survival_log_exact(t, p, *, budget: int = DEFAULT_EXACT_BUDGET) -> float:
    """Log of the no-repeat probability via the direct factor product.

    Walks all p - 1 factors, so p - 1 must not exceed ``budget``
    (default 1e8).  Requires 2 <= p and p - 1 < t so every factor is a
    positive fraction.  Raises IterationBudgetError when over budget; use
    the series route in that case.
    """
    space = as_space_size(t)
    p = _as_count(p)
    if p < 2:
        raise DomainError(f"need at least 2 draws for a repeat, got {p}")
    if not (p - 1 < space.value):
        raise DomainError(
            f"population {p} leaves no free values in a space of {space.value!r}; "
            "a repeat is guaranteed there"
        )
    if p - 1 > budget:
        raise IterationBudgetError(
            f"exact product needs {p - 1} factors, over the budget of {budget}; "
            "use the series method instead"
        )
    return _survival_log_product(space.value, p)


# --- closed-form cumulative power sums ------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_minus(m: int) -> Fraction:
    # First-kind convention (B_1 = -1/2), classic recurrence.
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for i in range(m):
        acc += math.comb(m + 1, i) * _bernoulli_minus(i)
    return -acc / (m + 1)


def _bernoulli_plus(j: int) -> Fraction:
    # Second-kind convention (B_1 = +1/2) matches sums starting at n = 1.
    b = _bernoulli_minus(j)
    return -b if j == 1 else b


@lru_cache(maxsize=None)
def _faulhaber_coefficients(k: int) -> "tuple[Fraction, ...]":
    # sum_{n=1}^{m} n^k = sum_{j=0}^{k} C(k+1, j) B+_j m^(k+1-j) / (k+1)
    kp1 = k + 1
    return tuple(
        Fraction(math.comb(kp1, j)) * _bernoulli_plus(j) / kp1 for j in range(kp1)
    )


@lru_cache(maxsize=1 << 14)
def _power_sum(k: int, m: int) -> int:
    """Exact sum of n**k for n = 1..m, via the closed-form polynomial.

    No loop over n: the Faulhaber polynomial is evaluated with Horner's
    rule in exact rational arithmetic, so m may be 1e13 or larger.
    """
    if m <= 0:
        return 0
    acc = Fraction(0)
    for c in _faulhaber_coefficients(k):
        acc = acc * m + c
    acc *= m
    if acc.denominator != 1:
        raise AssertionError(f"power sum came out non-integral for k={k}, m={m}")
    return acc.numerator


def _log_int(n: int) -> float:
    # log of a positive big integer without float overflow
    if n.bit_length() <= 53:
        return math.log(n)
    shift = n.bit_length() - 53
    return math.log(n >> shift) + shift * _LN2


def _series_term(k: int, m: int, t: float, log_t: float) -> float:
    """Value of power_sum(k, m) / (k * t**k), overflow-safe."""
    s = _power_sum(k, m)
    if s == 0:
        return 0.0
    # Direct evaluation while numerator and denominator both fit in floats;
    # otherwise fall back to log space (t**k overflows doubles long before
    # the term itself stops mattering).
    if s.bit_length() <= 1000 and k * log_t <= 690.0:
        return float(s) / (k * t**k)
    return math.exp(_log_int(s) - math.log(k) - k * log_t)


def _series_scan(t: float, p: int, order: int):
    """Series terms 1..order plus the first omitted term.

    Returns (value, first_omitted, ratio) where value is the log-survival
    estimate and ratio = p/t feeds the geometric tail factor.
    """
    m = p - 1
    log_t = math.log(t)
    total = 0.0
    comp = 0.0
    for k in range(1, order + 1):
        term = _series_term(k, m, t, log_t)
        s = total + term
        if abs(total) >= abs(term):
            comp += (total - s) + term
        else:
            comp += (term - s) + total
        total = s
    omitted = _series_term(order + 1, m, t, log_t)
    return -(total + comp), omitted


def survival_log_series(t, p, order: int) -> "tuple[float, float]":
    """Log of the no-repeat probability via the truncated power series.

    Returns ``(value, abs_error_bound)`` where the bound is the magnitude
    of the first omitted term times the geometric safety factor
    1 / (1 - p/t).  Certified only for p/t < 1/2; larger ratios are
    refused.  ``order`` must be at least 2.  Cost does not grow with p.
    """
    space = as_space_size(t)
    p = _as_count(p)
    if not isinstance(order, int) or isinstance(order, bool) or order < 2:
        raise DomainError(f"series order must be an integer >= 2, got {order!r}")
    ratio = p / space.value
    if ratio >= _SERIES_MAX_RATIO:
        raise SeriesBoundError(
            f"series bound is not certified for p/t = {ratio:.3g} >= 1/2; "
            "use the exact method"
        )
    if p <= 1:
        return 0.0, 0.0
    value, omitted = _series_scan(space.value, p, order)
    bound = omitted / (1.0 - ratio)
    return value, bound


def _prob_bound(v: float, tail: float) -> float:
    """Absolute probability-error bound for a log-survival estimate v.

    ``tail`` bounds the (one-sided) truncation error in log space.  A
    rounding allowance proportional to the magnitude of v is folded in so
    the published bound also covers float accumulation noise of either
    evaluation route.  Mapping into probability space contracts the error
    by the survival factor exp(v).  The final flat term covers the last
    rounding of each route's own log-to-probability conversion (half an
    ulp of the result apiece), which is NOT contracted by exp(v) and
    dominates whenever the probability sits next to 1.
    """
    slack = _ROUNDING_UNIT * (1.0 + abs(v))
    scale = math.exp(min(0.0, v + tail + slack))
    return min(1.0, (tail + slack) * scale + _FINAL_ROUNDING)


def _series_result(space: SpaceSize, p: int, order=None) -> EvalResult:
    """Series evaluation wrapped into an EvalResult.

    With ``order=None`` the order is grown adaptively until the reported
    probability bound drops below _AUTO_BOUND_TARGET (always reachable for
    p/t < 1/2, usually by order 2 or 3).
    """
    t = space.value
    ratio = p / t
    if ratio >= _SERIES_MAX_RATIO:
        raise SeriesBoundError(
            f"series bound is not certified for p/t = {ratio:.3g} >= 1/2; "
            "use the exact method"
        )
    m = p - 1
    log_t = math.log(t)
    geom = 1.0 / (1.0 - ratio)
    if order is not None:
        value, omitted = _series_scan(t, p, order)
        return _result_from_log(
            value, SERIES, _prob_bound(value, omitted * geom), order
        )
    total = 0.0
    comp = 0.0
    k = 0
    while True:
        k += 1
        term = _series_term(k, m, t, log_t)
        s = total + term
        if abs(total) >= abs(term):
            comp += (total - s) + term
        else:
            comp += (term - s) + total
        total = s
        if k >= 2:
            omitted = _series_term(k + 1, m, t, log_t)
            v = -(total + comp)
            bound = _prob_bound(v, omitted * geom)
            if bound < _AUTO_BOUND_TARGET or k >= 512:
                return _result_from_log(v, SERIES, bound, k)


def collision_probability(
    t, p, method: str = AUTO, *, order=None, exact_budget: int = DEFAULT_EXACT_BUDGET
) -> EvalResult:
    """Probability that p uniform draws over t values repeat at least once.

    ``method`` is "exact", "series", or "auto".  Auto runs the exact
    product when p is within ``exact_budget`` and p/t is large enough for
    the O(p) walk to be worth it; otherwise it uses the series with the
    truncation order grown until the error bound falls below 1e-12.

    Two short circuits need no iteration at all: p <= 1 gives probability
    exactly 0, and p >= t + 1 gives probability exactly 1 (some value must
    repeat once every value has been seen).
    """
    space = as_space_size(t)
    p = _as_count(p)
    if method not in (EXACT, SERIES, AUTO):
        raise DomainError(f"method must be one of exact/series/auto, got {method!r}")
    if order is not None:
        if method == EXACT:
            raise DomainError("order only applies to the series method")
        if not isinstance(order, int) or isinstance(order, bool) or order < 2:
            raise DomainError(f"series order must be an integer >= 2, got {order!r}")

    if p <= 1:
        return _result_from_log(0.0, EXACT, 0.0)
    if _is_guaranteed_repeat(space, p):
        return _result_from_log(-math.inf, EXACT, 0.0)

    if method == EXACT:
        v = survival_log_exact(space, p, budget=exact_budget)
        return _result_from_log(v, EXACT, 0.0)
    if method == SERIES:
        return _series_result(space, p, order)

    # auto
    ratio = p / space.value
    if p - 1 > exact_budget:
        if ratio < _SERIES_MAX_RATIO:
            return _series_result(space, p, order)
        raise IterationBudgetError(
            f"population {p} is over the exact budget of {exact_budget} and "
            f"p/t = {ratio:.3g} is too large for the certified series; "
            "raise exact_budget to force the product evaluation"
        )
    if ratio <= _AUTO_SERIES_RATIO:
        return _series_result(space, p, order)
    v = _survival_log_product(space.value, p)
    return _result_from_log(v, EXACT, 0.0)

"""
K_nu(x), x^nu K_nu(x) and their order-derivatives.

The (nu, x) plane is split into regions, each served by one strategy from
``besselk_ad.numerics.branches``:

    half-integer nu, x >= halfint_min_x     -> HalfIntExact / HalfIntImproved
    x < a1, nu near an integer              -> TemmeIntRec
    temme_cf_x <= x < a1                    -> TemmeIntRec (continued fraction)
    x < a1                                  -> Series
    a1 <= x < a2, hypot(nu, x) < uae_radius -> TemmeIntRec (continued fraction)
    a1 <= x < a3                            -> UAE (t2 terms below a2, t3 above)
    x >= a3, nu > nu1                       -> UAE (t3)
    x >= a3, nu <= nu1                      -> LargeArg (t4)

Both power series cancel like e^(2x) and the expansions in 1/x or 1/nu are only
good to about e^(-2 hypot(nu, x)), so the moderate band between them goes to the
continued fraction.

The dispatcher only looks at primal values. Derivatives flow through whichever
expression it picks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

from besselk_ad.numerics.branches import (
    besselk_halfint,
    besselk_large_arg,
    besselk_series,
    besselk_temme,
    besselk_uae,
)
from besselk_ad.numerics.dual import Dual2, Scalar, power, seed, value
from besselk_ad.numerics.errors import BesselDomainError, ConfigError
from besselk_ad.numerics.gamma import gamma_fn
from besselk_ad.numerics.uk_polynomials import MAX_SUPPORTED_ORDER, build_uk_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BranchConfig:
    a1: float = 8.5
    a2: float = 15.0
    a3: float = 30.0
    nu1: float = 1.5
    t1_tol: float = 1e-15
    t2: int = 20
    t3: int = 20
    t4: int = 14
    near_int_tol: float = 5e-3
    half_int_tol: float = 1e-4
    halfint_min_x: float = 8.5
    halfint_m: int = 4
    temme_cf_x: float = 2.0
    uae_radius: float = 14.0

    def __post_init__(self) -> None:
        if not 0.0 < self.a1 < self.a2 < self.a3:
            raise ConfigError(
                f"thresholds must satisfy 0 < a1 < a2 < a3, got "
                f"{self.a1}, {self.a2}, {self.a3}"
            )
        if self.nu1 <= 0.0:
            raise ConfigError(f"nu1 must be positive, got {self.nu1}")
        for name in ("t2", "t3", "t4", "halfint_m"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("t2", "t3"):
            if getattr(self, name) - 1 > MAX_SUPPORTED_ORDER:
                raise ConfigError(
                    f"{name}={getattr(self, name)} needs U_k beyond "
                    f"k={MAX_SUPPORTED_ORDER}"
                )
        for name in ("t1_tol", "near_int_tol", "half_int_tol"):
            tol = getattr(self, name)
            if not 0.0 < tol < 1e-2:
                raise ConfigError(f"{name} must lie in (0, 1e-2), got {tol}")
        if self.halfint_min_x <= 0.0:
            raise ConfigError(f"halfint_min_x must be positive, got {self.halfint_min_x}")
        if not 0.0 < self.temme_cf_x <= self.a1:
            raise ConfigError(f"temme_cf_x must lie in (0, a1], got {self.temme_cf_x}")
        if self.uae_radius < 0.0:
            raise ConfigError(f"uae_radius must be nonnegative, got {self.uae_radius}")

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "BranchConfig":
        known = set(asdict(cls()))
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown branch settings: {', '.join(sorted(unknown))}")
        defaults = asdict(cls())
        coerced: Dict[str, Any] = {}
        for key, raw in values.items():
            kind = type(defaults[key])
            try:
                coerced[key] = kind(raw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}") from exc
        return cls(**coerced)

    def with_overrides(self, **overrides: Any) -> "BranchConfig":
        return replace(self, **overrides)


DEFAULT_BRANCH_CONFIG = BranchConfig()


class BranchTag(str, Enum):
    SERIES = "Series"
    TEMME_INT_REC = "TemmeIntRec"
    UAE = "UAE"
    LARGE_ARG = "LargeArg"
    HALF_INT_EXACT = "HalfIntExact"
    HALF_INT_IMPROVED = "HalfIntImproved"

    def describe(self) -> str:
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    BranchTag.SERIES: "small argument, direct series",
    BranchTag.TEMME_INT_REC: "near-integer order or moderate argument (Temme pair + recurrence)",
    BranchTag.UAE: "intermediate argument, uniform expansion",
    BranchTag.LARGE_ARG: "large argument, Hankel expansion",
    BranchTag.HALF_INT_EXACT: "half-integer order, terminating expansion",
    BranchTag.HALF_INT_IMPROVED: "half-integer order, exponentially improved expansion",
}


def _distance_to_integer(nu: float) -> float:
    return abs(nu - math.floor(nu + 0.5))


def _distance_to_half_integer(nu: float) -> float:
    return abs(nu - (math.floor(nu) + 0.5))


def _plan(
    nu: float, x: float, tracking: bool, cfg: BranchConfig
) -> Tuple[BranchTag, Optional[int]]:
    if not x > 0.0:
        raise BesselDomainError(f"K_nu(x) needs x > 0, got {x}")
    nu = abs(nu)
    if _distance_to_half_integer(nu) < cfg.half_int_tol and x >= cfg.halfint_min_x:
        tag = BranchTag.HALF_INT_IMPROVED if tracking else BranchTag.HALF_INT_EXACT
        return tag, cfg.t4
    if x < cfg.a1:
        if _distance_to_integer(nu) < cfg.near_int_tol or x >= cfg.temme_cf_x:
            return BranchTag.TEMME_INT_REC, None
        return BranchTag.SERIES, None
    if x < cfg.a2 and math.hypot(nu, x) < cfg.uae_radius:
        return BranchTag.TEMME_INT_REC, None
    if x < cfg.a3:
        return BranchTag.UAE, cfg.t2 if x < cfg.a2 else cfg.t3
    if nu > cfg.nu1:
        return BranchTag.UAE, cfg.t3
    return BranchTag.LARGE_ARG, cfg.t4


def select_branch(
    nu: float, x: float, tracking: bool, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> BranchTag:
    """Branch chosen for (|nu|, x); a pure function of its arguments."""
    return _plan(nu, x, tracking, cfg)[0]


Evaluator = Callable[[Scalar, Scalar, Optional[int], BranchConfig, bool], Scalar]


def _eval_series(nu, x, trunc, cfg, scaled):
    return besselk_series(nu, x, cfg.t1_tol, scaled=scaled)


def _eval_temme(nu, x, trunc, cfg, scaled):
    return besselk_temme(nu, x, cfg.t1_tol, scaled=scaled, cf_min_x=cfg.temme_cf_x)


def _eval_uae(nu, x, trunc, cfg, scaled):
    return besselk_uae(nu, x, trunc, build_uk_table(), scaled=scaled)


def _eval_large_arg(nu, x, trunc, cfg, scaled):
    return besselk_large_arg(nu, x, trunc, scaled=scaled)


def _eval_halfint_exact(nu, x, trunc, cfg, scaled):
    return besselk_halfint(nu, x, False, trunc, cfg.halfint_m, scaled=scaled)


def _eval_halfint_improved(nu, x, trunc, cfg, scaled):
    return besselk_halfint(nu, x, True, trunc, cfg.halfint_m, scaled=scaled)


EVALUATORS: Dict[BranchTag, Evaluator] = {
    BranchTag.SERIES: _eval_series,
    BranchTag.TEMME_INT_REC: _eval_temme,
    BranchTag.UAE: _eval_uae,
    BranchTag.LARGE_ARG: _eval_large_arg,
    BranchTag.HALF_INT_EXACT: _eval_halfint_exact,
    BranchTag.HALF_INT_IMPROVED: _eval_halfint_improved,
}


def _overflowed(nu: Scalar, x: Scalar) -> Scalar:
    logger.debug("K_nu(x) overflowed at nu=%s, x=%s", value(nu), value(x))
    if isinstance(nu, Dual2) or isinstance(x, Dual2):
        return Dual2(math.inf, math.nan, math.nan)
    return math.inf


def _evaluate(nu: Scalar, x: Scalar, cfg: BranchConfig, scaled: bool):
    if value(nu) < 0.0:
        nu = -1.0 * nu
    tracking = isinstance(nu, Dual2) or isinstance(x, Dual2)
    tag, trunc = _plan(value(nu), value(x), tracking, cfg)
    try:
        return EVALUATORS[tag](nu, x, trunc, cfg, scaled), tag
    except OverflowError:
        return _overflowed(nu, x), tag


def besselk_with_branch(
    nu: Scalar, x: Scalar, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> Tuple[Scalar, BranchTag]:
    return _evaluate(nu, x, cfg, scaled=False)


def besselk(nu: Scalar, x: Scalar, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG) -> Scalar:
    """
    K_nu(x) for x > 0.

    ``nu`` may be a float or a ``Dual2``; the result is the same kind. ``x``
    may also be a ``Dual2`` whose slots carry derivatives with respect to the
    same seeded order (used when the argument itself depends on nu). Negative
    orders route through |nu|. Values beyond the double range come back as
    +inf with nan derivative slots.
    """
    return _evaluate(nu, x, cfg, scaled=False)[0]


def besselk_xnu_scaled(
    nu: Scalar, x: Scalar, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> Scalar:
    """x^nu K_nu(x) for x >= 0 and nu >= 0; the x = 0 limit is 2^(nu-1) Gamma(nu)."""
    xv, nv = value(x), value(nu)
    if xv < 0.0:
        raise BesselDomainError(f"x^nu K_nu(x) needs x >= 0, got {xv}")
    if nv < 0.0:
        raise BesselDomainError(f"x^nu K_nu(x) needs nu >= 0, got {nv}")
    if xv == 0.0:
        if nv <= 0.0:
            raise BesselDomainError("x^nu K_nu(x) at x = 0 needs nu > 0")
        return power(2.0, nu - 1.0) * gamma_fn(nu)
    return _evaluate(nu, x, cfg, scaled=True)[0]


def besselk_d1d2(
    nu: float, x: float, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> Tuple[float, float, float]:
    """(K_nu(x), dK/dnu, d2K/dnu2)."""
    return besselk(seed(nu), x, cfg).as_tuple()

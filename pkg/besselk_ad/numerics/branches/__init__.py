"""Evaluation strategies for K_nu(x), one module per region of the (nu, x) plane."""

from .series import besselk_series
from .temme import besselk_temme, steed_pair, temme_pair
from .uae import besselk_uae
from .large_arg import besselk_large_arg, hankel_coefficients
from .halfint import besselk_halfint, g_remainder, remainder_depths

__all__ = [
    "besselk_series",
    "besselk_temme",
    "temme_pair",
    "steed_pair",
    "besselk_uae",
    "besselk_large_arg",
    "hankel_coefficients",
    "besselk_halfint",
    "g_remainder",
    "remainder_depths",
]

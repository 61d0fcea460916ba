"""The two-dimensional peaks benchmark surface.

A classic multimodal test function on [-3, 3]^2 whose unique global minimum
sits near (0.228, -1.626) at about -6.551. Used for end-to-end pipeline
checks: sample, fit a network, optimize it globally.
"""

from __future__ import annotations

import numpy as np

PEAKS_SOURCE = ("3*(1-x1)^2*exp(-x1^2-(x2+1)^2)"
                " - 10*(x1/5 - x1^3 - x2^5)*exp(-x1^2-x2^2)"
                " - exp(-(x1+1)^2-x2^2)/3")

PEAKS_LO = -3.0
PEAKS_HI = 3.0


def peaks(x1, x2):
    """Vectorized evaluation; accepts scalars or numpy arrays."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    term1 = 3.0 * (1.0 - x1) ** 2 * np.exp(-x1 ** 2 - (x2 + 1.0) ** 2)
    term2 = -10.0 * (x1 / 5.0 - x1 ** 3 - x2 ** 5) * np.exp(-x1 ** 2 - x2 ** 2)
    term3 = -np.exp(-(x1 + 1.0) ** 2 - x2 ** 2) / 3.0
    return term1 + term2 + term3

"""Numerical toolkit for the starlike class SK(alpha).

The class consists of normalized analytic functions on the unit disk whose
``zf'/f`` is subordinate to ``q_alpha(z) = 3 / (3 + (alpha-3) z - alpha z^2)``
for ``-3 < alpha <= 1``.
"""

from .errors import SKError
from .reports import BoundReport
from .series import NormalizedSeries, TruncatedSeries

__all__ = ["BoundReport", "NormalizedSeries", "SKError", "TruncatedSeries"]
__version__ = "0.1.0"

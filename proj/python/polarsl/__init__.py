"""Radial semilinear problems on geodesic polar charts.

Thin re-export of the compiled ``_polarsl`` extension.
"""

from ._polarsl import *  # noqa: F401,F403
from ._polarsl import __doc__  # noqa: F401

"""Degenerate beam observability and boundary control laboratory.

Thin Python layer over the C++ core: degeneracy profiles, the clamped
fourth-order discretization, energy-conserving dynamics, boundary
observability diagnostics, and HUM control synthesis.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

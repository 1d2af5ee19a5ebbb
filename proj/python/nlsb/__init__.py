"""Periodic Dirac spectral theory for the cubic Schrodinger field.

Monodromy and discriminant computation, Floquet spectrum and gaps, Weyl
functions on the spectral curve, divisor variables, quadrature-based
verification of closed-form Poisson-bracket identities, and an open Toda
lattice module.
"""

from ._nlsb import *  # noqa: F401,F403
from ._nlsb import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"

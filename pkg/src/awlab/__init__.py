"""Numerical verification laboratory for a q-deformed algebra on two and five
generators, its finite-dimensional representations, and the attached
orthogonal-function machinery."""

from .qcore import QContext

__version__ = "0.1.0"

__all__ = ["QContext", "__version__"]

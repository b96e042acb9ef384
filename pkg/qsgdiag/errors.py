# -*- coding: utf-8 -*-
"""Exceptions raised across ``qsgdiag``."""


class DimensionError(ValueError):
    """Shapes or dimensions of the inputs do not agree."""
    pass


class HermiticityError(ValueError):
    """Matrix is not hermitean within tolerance."""
    pass


class MaxwellError(ValueError):
    """Field cannot satisfy the source-free Maxwell equations."""
    pass


class ConvergenceError(RuntimeError):
    """Eigensolver did not converge within the allowed sweeps."""
    pass

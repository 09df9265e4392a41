"""Exceptions raised by jclattice"""

from __future__ import annotations

from typing import Optional


class JCLatticeError(Exception):
    """Base class of all package errors"""


class ConfigurationError(JCLatticeError, ValueError):
    """Invalid scenario or propagation settings

    Attributes:
        field: Offending configuration key, if known
    """

    def __init__(self, msg: str, field: Optional[str] = None) -> None:
        super().__init__(msg)
        self.field = field


class ConvergenceError(JCLatticeError, RuntimeError):
    """Automatic truncation did not converge below its cap"""

    def __init__(self, msg: str, cap: int) -> None:
        super().__init__(msg)
        self.cap = cap


class EigensolverError(JCLatticeError, RuntimeError):
    """The eigensolver failed on a Hamiltonian"""


class InfeasibleDesignError(JCLatticeError, ValueError):
    """A requested coupling cannot be realised by a positive spacing

    Attributes:
        n: Index of the first failing bond, if known
    """

    def __init__(self, msg: str, n: Optional[int] = None) -> None:
        super().__init__(msg)
        self.n = n


class UnitError(JCLatticeError, ValueError):
    """Unknown or mixed length units"""

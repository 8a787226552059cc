"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class QuatEisensteinError(Exception):
    """Base class for library errors."""


class LatticeError(QuatEisensteinError, ValueError):
    """A value left the lattice (half-integral quaternions, O, its dual, or Her_2 over the dual)."""


class PadicDomainError(QuatEisensteinError, ValueError):
    """Argument outside the convergence domain of log_p, exp_p or the Leopoldt quotient."""


class TruncationError(QuatEisensteinError, KeyError):
    """Access to a q-expansion outside its trace bound."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else ""


class InfeasibleError(QuatEisensteinError, ValueError):
    """Requested Bernoulli index or weight exceeds the supported bound."""


class InvariantViolation(QuatEisensteinError, AssertionError):
    """A verified identity or lemma was falsified by a computation."""

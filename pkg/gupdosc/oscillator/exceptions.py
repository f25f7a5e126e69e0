class GupDoscError(Exception):
    """Base class of every error raised by the solver"""


class UsageError(GupDoscError, ValueError):
    """The caller asked for something the solver cannot do (CLI exit status 2)"""


class DimensionMismatchError(UsageError):
    def __init__(self, left: int, right: int, operation: str = 'operation'):
        self.left = left
        self.right = right
        super().__init__(f'{operation}: dimension mismatch ({left} vs {right})')


class ConvergenceError(GupDoscError, ArithmeticError):
    """The eigensolver ran out of sweeps or its result broke the residual contract"""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f'{message} (achieved residual {residual:.3e})')


class CriticalFieldError(GupDoscError):
    def __init__(self, message: str = 'oscillator length undefined at critical field'):
        super().__init__(message)


class BranchCollapseError(GupDoscError):
    """Negative radicand in the Landau formula (over-critical field)"""

    def __init__(self, n: int, radicand: float):
        self.n = n
        self.radicand = radicand
        super().__init__(f'branch collapse: 1 + 4*lambda*n = {radicand:.6g} < 0 at n={n}')


class DegenerateClusterError(GupDoscError):
    def __init__(self, label: str, coupling: float):
        self.label = label
        self.coupling = coupling
        super().__init__(
            f'{label} is coupled to a degenerate partner by H\' (|<i|H\'|j>| = {coupling:.3e}); '
            f'use degenerate_shift for this cluster'
        )

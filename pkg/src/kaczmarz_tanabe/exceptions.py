class ZeroRowError(ValueError):
    """A row of the system matrix has (numerically) zero norm."""

    def __init__(self, index):
        super().__init__(f"row {index} of A is zero")
        self.index = index


class NoConvergence(RuntimeError):
    """An iterative oracle hit its iteration cap.

    The best iterate found so far is kept on ``x`` so callers can decide
    whether it is good enough.
    """

    def __init__(self, message, x=None, iterations=0, residual=float("nan")):
        super().__init__(message)
        self.x = x
        self.iterations = iterations
        self.residual = residual


class DegenerateWeightError(ValueError):
    def __init__(self, kind, index):
        super().__init__(f"{kind} weight {index} is zero")
        self.kind = kind
        self.index = index


class DivergenceError(RuntimeError):
    """An iterate stopped being finite."""

    def __init__(self, method, k):
        super().__init__(f"{method}: iterate became non-finite at iteration {k}")
        self.method = method
        self.k = k

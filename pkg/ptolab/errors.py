from __future__ import annotations


class PtolabError(Exception):
    """Base class for every error raised on purpose by ptolab."""


class StructuralError(PtolabError, ValueError):
    """Input data is malformed (shape, symmetry, sign, labels)."""


class UnknownLabelError(StructuralError, KeyError):
    def __init__(self, label, labels=()):
        self.label = label
        shown = ", ".join(map(str, list(labels)[:8]))
        more = " ..." if len(labels) > 8 else ""
        super().__init__(f"Label '{label}' not found (known: {shown}{more})")

    def __str__(self) -> str:
        return self.args[0]


class MatrixParseError(StructuralError):
    """Raised when a matrix file cannot be decoded at all."""


class PreconditionError(PtolabError, ValueError):
    """An operation was called outside the domain where it is defined."""


class ScheduleTooLargeError(PreconditionError):
    def __init__(self, m: int, n: int, size: int, limit: int):
        self.m, self.n, self.size, self.limit = m, n, size, limit
        super().__init__(
            f"m={m} needs n={n} coordinates and |S_n,m|={size} slice elements "
            f"(limit {limit}); schedule is infeasible at this scale"
        )

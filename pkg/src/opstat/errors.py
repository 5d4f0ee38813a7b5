"""Exception hierarchy shared by all modules."""


class OpStatError(ValueError):
    """Base class for domain errors (the math says no)."""


class ManualError(OpStatError):
    pass


class EmptyOperation(ManualError):
    pass


class DuplicateOutcomeInOperation(ManualError):
    pass


class RedundantOperation(ManualError):
    def __init__(self, inner, outer):
        self.inner = inner
        self.outer = outer
        super().__init__(f"operation {inner} is contained in operation {outer}")


class UnknownOutcome(ManualError):
    pass


class NewIdCollision(ManualError):
    pass


class PackedNotSubset(ManualError):
    pass


class MergeCollapsesOperation(ManualError):
    pass


class EventCapExceeded(OpStatError):
    pass


class WeightError(OpStatError):
    pass


class MissingOutcome(WeightError):
    pass


class ValueOutOfRange(WeightError):
    pass


class OperationSumViolation(WeightError):
    """An operation whose weights do not sum to one."""

    def __init__(self, op_index, outcomes, total):
        self.op_index = op_index
        self.outcomes = tuple(outcomes)
        self.sum = float(total)
        super().__init__(
            f"operation {op_index} {list(self.outcomes)} sums to {self.sum!r}"
        )

    def to_dict(self):
        return {"op_index": self.op_index, "outcomes": list(self.outcomes), "sum": self.sum}


class ManualMismatch(WeightError):
    pass


class SpinError(OpStatError):
    pass


class NotOrthogonal(SpinError):
    pass


class ZeroVector(SpinError):
    pass


class NotInFrame(SpinError):
    pass


class Underdetermined(SpinError):
    def __init__(self, null_dim):
        self.null_dim = int(null_dim)
        super().__init__(f"frame constraints leave a {self.null_dim}-dimensional null space")


class ParamOutOfRange(OpStatError):
    pass


class EmptyCell(OpStatError):
    pass

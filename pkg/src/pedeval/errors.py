"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures without knowing which module raised them.
"""

from __future__ import annotations


class PedEvalError(Exception):
    exit_code = 1


class ValidationError(PedEvalError):
    exit_code = 2


class JoinError(PedEvalError):
    exit_code = 3


class IoFailure(PedEvalError):
    exit_code = 4


class MalformedFile(ValidationError):
    pass


class SchemaViolation(ValidationError):
    """Raised with the full list of problems found in one file."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        head = "; ".join(self.problems[:5])
        more = f" (+{len(self.problems) - 5} more)" if len(self.problems) > 5 else ""
        super().__init__(f"{len(self.problems)} schema violation(s): {head}{more}")


class DanglingVideoRef(ValidationError):
    def __init__(self, refs: list[tuple[str, str]]):
        self.refs = list(refs)
        shown = ", ".join(f"{p}->{v}" for p, v in self.refs[:5])
        super().__init__(f"instances reference unknown videos: {shown}")


class MalformedLine(ValidationError):
    def __init__(self, lineno: int, reason: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {reason}")


class DuplicatePrediction(ValidationError):
    def __init__(self, lineno: int, model: str, sample_id: str):
        self.lineno = lineno
        self.model = model
        self.sample_id = sample_id
        super().__init__(f"line {lineno}: duplicate prediction for ({model}, {sample_id})")


class ArityMismatch(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class OutOfRangeTte(ValidationError):
    pass


class SchemeTaskMismatch(ValidationError):
    pass


class InconsistentGroundTruth(ValidationError):
    def __init__(self, ped_id: str):
        self.ped_id = ped_id
        super().__init__(f"samples of instance {ped_id!r} disagree on ground truth")


class MissingSection(ValidationError):
    pass


class MissingPrediction(JoinError):
    def __init__(self, sample_ids: list[str]):
        self.sample_ids = list(sample_ids)
        super().__init__(
            f"{len(self.sample_ids)} sample(s) without prediction, e.g. {self.sample_ids[:3]}"
        )


class OrphanPrediction(JoinError):
    def __init__(self, sample_ids: list[str]):
        self.sample_ids = list(sample_ids)
        super().__init__(
            f"{len(self.sample_ids)} prediction(s) without sample, e.g. {self.sample_ids[:3]}"
        )


class JoinMismatch(JoinError):
    pass


class NoPositives(ValidationError):
    def __init__(self, cls: int):
        self.cls = cls
        super().__init__(f"class {cls} has no positive examples")


class DegenerateClass(ValidationError):
    def __init__(self, cls: int):
        self.cls = cls
        super().__init__(f"class {cls} lacks positives or negatives")

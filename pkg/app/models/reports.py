from pydantic import BaseModel


class Check(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class CheckReport(BaseModel):
    """Outcome of one verification harness run on one input."""

    name: str
    subject: str
    checks: list[Check] = []
    figures: dict[str, int | str] = {}

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


class SweepSummary(BaseModel):
    name: str
    total: int
    failed: int
    reports: list[CheckReport] = []

    @property
    def passed(self) -> bool:
        return self.failed == 0


class CensusReport(BaseModel):
    """Circuit-count table over every circuit partition of a graph."""

    vertices: int
    components: int
    total: int
    counts: dict[int, int]
    nullity_failures: int = 0


class ReachabilityPath(BaseModel):
    """A sequence of moves taking one Euler system to another."""

    kind: str  # "kappa" or "transposition"
    moves: list[tuple[str, ...]]
    words: list[str]

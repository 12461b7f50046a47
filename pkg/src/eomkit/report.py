"""Pass/fail reporting structures shared by the verification suites."""

from dataclasses import dataclass, field


@dataclass
class CheckOutcome:
    """One named check with its result and an optional failure witness."""

    name: str
    passed: bool
    witness: str | None = None

    def to_doc(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class SuiteReport:
    """A named collection of check outcomes."""

    suite: str
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: str | None = None) -> None:
        self.checks.append(CheckOutcome(name, passed, witness))

    def to_doc(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_doc() for c in self.checks],
        }

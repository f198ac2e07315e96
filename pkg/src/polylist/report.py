"""Pass/fail records shared by the law suites and the verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .setmodel import format_elem


@dataclass
class LawResult:
    law_id: str
    passed: bool
    counterexample: Any = None
    checked: int = 0
    note: str = ""

    def line(self) -> str:
        if self.passed:
            return f"{self.law_id} PASS"
        return f"{self.law_id} FAIL {self.describe()}"

    def describe(self) -> str:
        if self.counterexample is None:
            return self.note or "-"
        return format_elem(self.counterexample) + (f" {self.note}" if self.note else "")


@dataclass
class LawReport:
    results: list[LawResult] = field(default_factory=list)
    budget: Any = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, law_id: str) -> LawResult:
        for r in self.results:
            if r.law_id == law_id:
                return r
        raise KeyError(law_id)

    def __iter__(self):
        return iter(self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def extend(self, other: "LawReport") -> None:
        self.results.extend(other.results)

    def check(self, law_id: str, cases: Iterable, holds: Callable[..., bool]) -> LawResult:
        """Run ``holds(*case)`` on every case; record the first failure."""
        n = 0
        for case in cases:
            n += 1
            if not holds(*case):
                res = LawResult(law_id, False, case, n)
                self.results.append(res)
                return res
        res = LawResult(law_id, True, None, n)
        self.results.append(res)
        return res

    def record(self, law_id: str, passed: bool, counterexample=None, checked=0, note=""):
        res = LawResult(law_id, passed, counterexample, checked, note)
        self.results.append(res)
        return res


# The verifier's report has the same shape; stages are its "laws".
VerifyReport = LawReport

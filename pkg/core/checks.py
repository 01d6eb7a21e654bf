"""
Named pass/fail records shared by verification suites, experiments and the ledger
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: Optional[float] = None
    tolerance: Optional[float] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def summarize_checks(checks: List[CheckResult]) -> Dict[str, Any]:
    """Counts and names of failing checks"""
    failed = [c.name for c in checks if not c.passed]
    return {
        'total': len(checks),
        'passed': len(checks) - len(failed),
        'failed': failed,
        'all_passed': not failed
    }

"""Serializable proof records.

JSON shape::

    {"kind": str, "k": int, "p": int,
     "params": {name: decimal string},
     "checks": [{"name", "observed", "expected", "pass"}],
     "verified": bool}

Observed and expected values are stored as strings, so big integers and
rationals survive any JSON reader unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

KINDS = ("hatada", "weight-criterion", "nilpotency", "theorem1", "theorem2")


@dataclass(frozen=True)
class Check:
    name: str
    observed: str
    expected: str
    passed: bool


def check(name: str, observed, expected, passed: bool | None = None) -> Check:
    """Record one assertion; by default it passes when the rendered values agree."""
    observed, expected = str(observed), str(expected)
    if passed is None:
        passed = observed == expected
    return Check(name, observed, expected, bool(passed))


@dataclass(frozen=True)
class Certificate:
    kind: str
    k: int
    p: int
    params: dict[str, int] = field(default_factory=dict)
    checks: tuple[Check, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "p": self.p,
            "params": {name: str(value) for name, value in self.params.items()},
            "checks": [
                {"name": c.name, "observed": c.observed, "expected": c.expected, "pass": c.passed}
                for c in self.checks
            ],
            "verified": self.verified,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        cert = cls(
            kind=data["kind"],
            k=int(data["k"]),
            p=int(data["p"]),
            params={name: int(value) for name, value in data["params"].items()},
            checks=tuple(
                Check(c["name"], c["observed"], c["expected"], bool(c["pass"])) for c in data["checks"]
            ),
        )
        if "verified" in data and bool(data["verified"]) != cert.verified:
            raise ValueError("'verified' disagrees with the recorded checks")
        return cert

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

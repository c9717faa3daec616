"""Machine-checkable evidence bundles.

Every nontrivial construction returns (or carries) a Certificate: a named
list of individual checks, each either passed or failed with a witness.
Witnesses are plain JSON-able dicts so reports can replay them.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        d: dict = {"name": self.name, "ok": self.ok}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class Certificate:
    kind: str
    checks: tuple[Check, ...]
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def first_failure(self) -> Check | None:
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def require(self) -> "Certificate":
        if not self.ok:
            bad = self.first_failure()
            assert bad is not None
            raise AssertionError(f"{self.kind}: check {bad.name!r} failed: {bad.witness}")
        return self

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "counts": dict(self.counts),
        }


def merge(kind: str, *certs: Certificate, counts: dict | None = None) -> Certificate:
    checks: list[Check] = []
    merged_counts: dict = {}
    for cert in certs:
        checks.extend(Check(f"{cert.kind}.{c.name}", c.ok, c.witness) for c in cert.checks)
        merged_counts.update(cert.counts)
    if counts:
        merged_counts.update(counts)
    return Certificate(kind, tuple(checks), merged_counts)


@dataclass(frozen=True)
class Diagnostic:
    """Structured failure report for operations that probe open questions.

    Names the first failed condition and carries the witnesses needed to
    replay it.  Returned, never raised: the caller decides whether a failed
    probe is an error.
    """

    stage: str
    message: str
    witness: dict = field(default_factory=dict)
    certificate: Certificate | None = None

    def to_json(self) -> dict:
        d: dict = {"stage": self.stage, "message": self.message, "witness": self.witness}
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_json()
        return d

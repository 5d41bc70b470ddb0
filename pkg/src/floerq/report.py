"""Small report values returned by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckItem:
    name: str
    ok: bool
    witness: str | None = None
    level: str = "error"  # "error" | "warning" | "note"

    def line(self) -> str:
        status = "pass" if self.ok else ("WARN" if self.level == "warning" else
                                         "note" if self.level == "note" else "FAIL")
        out = "%-4s %s" % (status, self.name)
        if self.witness:
            out += "  [%s]" % self.witness
        return out

    def to_json(self):
        return {"name": self.name, "ok": self.ok,
                "witness": self.witness, "level": self.level}


@dataclass
class Report:
    items: list = field(default_factory=list)

    def add(self, item: CheckItem) -> None:
        self.items.append(item)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for it in other.items:
            name = prefix + it.name if prefix else it.name
            self.items.append(CheckItem(name, it.ok, it.witness, it.level))

    @property
    def ok(self) -> bool:
        return all(i.ok or i.level in ("warning", "note") for i in self.items)

    def ok_strict(self) -> bool:
        return all(i.ok or i.level == "note" for i in self.items)

    def first_failure(self) -> CheckItem | None:
        for i in self.items:
            if not i.ok:
                return i
        return None

    def lines(self):
        return [i.line() for i in self.items]

    def to_json(self):
        return {"ok": self.ok, "items": [i.to_json() for i in self.items]}

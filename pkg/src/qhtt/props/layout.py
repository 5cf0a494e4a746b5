"""Register layouts: which name lives in which register."""

from __future__ import annotations

from dataclasses import dataclass

QUBIT = "qubit"  # program qubit
GHOST = "ghost"  # entangled ghost register
UGHOST = "ughost"  # unentangled ghost register
KINDS = (QUBIT, GHOST, UGHOST)


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered ``(name, kind)`` pairs; register ``i`` is ``entries[i]``."""

    entries: tuple = ()

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        for _, k in self.entries:
            if k not in KINDS:
                raise ValueError(f"unknown register kind {k}")

    @classmethod
    def of(cls, names, kind=QUBIT):
        return cls(tuple((n, kind) for n in names))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def __contains__(self, name):
        return any(n == name for n, _ in self.entries)

    def index(self, name) -> int:
        for i, (n, _) in enumerate(self.entries):
            if n == name:
                return i
        raise KeyError(name)

    def kind(self, name) -> str:
        return self.entries[self.index(name)][1]

    def indices(self, names) -> list[int]:
        return [self.index(n) for n in names]

    def append(self, name, kind=QUBIT) -> "RegisterLayout":
        return RegisterLayout(self.entries + ((name, kind),))

    def rename(self, old, new, kind=None) -> "RegisterLayout":
        return RegisterLayout(tuple((new if n == old else n, (kind or k) if n == old else k) for n, k in self.entries))

    def reorder(self, order) -> "RegisterLayout":
        """New register ``i`` is old register ``order[i]``."""
        return RegisterLayout(tuple(self.entries[i] for i in order))

    def drop(self, names) -> "RegisterLayout":
        return RegisterLayout(tuple(e for e in self.entries if e[0] not in names))

    def fresh(self, base: str, taken=()) -> str:
        taken = set(taken) | set(self.names)
        if base not in taken:
            return base
        i = 1
        while f"{base}{i}" in taken:
            i += 1
        return f"{base}{i}"

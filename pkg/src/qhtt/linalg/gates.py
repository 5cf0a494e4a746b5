"""Fixed gate constants available to programs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_S = 1 / np.sqrt(2)


@dataclass(frozen=True)
class Gate:
    name: str
    matrix: np.ndarray

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2

    def __hash__(self):
        return hash(self.name)

    def __eq__(self, other):
        return isinstance(other, Gate) and self.name == other.name and np.array_equal(self.matrix, other.matrix)


def _gate(name, rows):
    m = np.array(rows, dtype=np.complex128)
    m.setflags(write=False)
    return Gate(name, m)


GATES: dict[str, Gate] = {
    g.name: g
    for g in (
        _gate("I", [[1, 0], [0, 1]]),
        _gate("X", [[0, 1], [1, 0]]),
        _gate("Y", [[0, -1j], [1j, 0]]),
        _gate("Z", [[1, 0], [0, -1]]),
        _gate("H", [[_S, _S], [_S, -_S]]),
        _gate("CX", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
        _gate("CZ", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]),
    )
}

GATE_NAMES = tuple(GATES)


def check_unitary(gates=None, tol=1e-12):
    for g in (gates or GATES).values():
        m = g.matrix
        err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if err > tol:
            raise AssertionError(f"gate {g.name} is not unitary (error {err:.3g})")


check_unitary()

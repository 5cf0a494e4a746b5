"""Seeded generator of random straight-line programs for differential testing."""

import numpy as np

ONE_Q = ["I", "X", "Y", "Z", "H"]
TWO_Q = ["CX", "CZ"]


def random_program(rng, max_qubits=4, max_gates=12, max_meas=2) -> str:
    n = int(rng.integers(1, max_qubits + 1))
    qs = [f"q{i}" for i in range(n)]
    lines = [f"  {q} <- init {int(rng.integers(2))}" for q in qs]
    live = list(qs)
    gates = int(rng.integers(1, max_gates + 1))
    meas_left = int(rng.integers(0, max_meas + 1))
    k = 0
    for _ in range(gates):
        if meas_left and len(live) > 1 and rng.random() < 0.15:
            q = live.pop(int(rng.integers(len(live))))
            lines.append(f"  m{k} <- meas {q}")
            k += 1
            meas_left -= 1
            continue
        if len(live) >= 2 and rng.random() < 0.4:
            a, b = rng.choice(len(live), 2, replace=False)
            lines.append(f"  apply {TWO_Q[int(rng.integers(2))]} to ({live[a]}, {live[b]})")
        else:
            lines.append(f"  apply {ONE_Q[int(rng.integers(5))]} to ({live[int(rng.integers(len(live)))]})")
    while meas_left and live:
        q = live.pop(int(rng.integers(len(live))))
        lines.append(f"  m{k} <- meas {q}")
        k += 1
        meas_left -= 1
    body = "\n".join(lines)
    return f"t : QST (u : unit) (requires {{⊤}}) (ensures {{⊤}})\nt = do {{\n{body}\n  return ()\n}}\n"


def programs(count=200, seed=0x51483737):
    rng = np.random.default_rng(seed)
    return [random_program(rng) for _ in range(count)]

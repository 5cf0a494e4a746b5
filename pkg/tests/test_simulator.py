import numpy as np
import pytest

import oracles as O
from progen import programs
from qhtt import simulator as sim
from qhtt.checker import Options, check_decl, check_program
from qhtt.errors import Divergence, SimulationError, UseAfterMeasure
from qhtt.linalg import GATES
from qhtt.surface import parse

S = 1 / np.sqrt(2)

BELL_MEAS = """bm : QST ((x, y) : bit ⊗ bit) (requires {⊤}) (ensures {⊤})
bm = do {
  a <- init 0
  b <- init 0
  apply H to (a)
  apply CX to (a, b)
  x <- meas a
  y <- meas b
  return (x, y)
}
"""


def up_to_phase(u, v, tol=1e-9):
    return abs(abs(np.vdot(u, v)) - np.linalg.norm(u) * np.linalg.norm(v)) <= tol


def test_gate_table_matches_oracle():
    for name in "IXYZH":
        assert np.allclose(sim.SIM_GATES[name], O.MATS[name])
    assert np.allclose(sim.SIM_GATES["CX"], O.cnot(2, 0, 1))
    assert np.allclose(sim.SIM_GATES["CZ"], O.cz(2, 0, 1))


def test_bell_measurements_chi_square():
    hist = sim.histogram(parse(BELL_MEAS), "bm", shots=10_000, seed=7)
    assert set(hist) <= {"00", "11"}
    n0, n1 = hist.get("00", 0), hist.get("11", 0)
    chi2 = (n0 - 5000) ** 2 / 5000 + (n1 - 5000) ** 2 / 5000
    assert chi2 < 10.83  # p = 0.001, one degree of freedom


def test_x_then_measure():
    src = """t : QST (b : bit) (requires {⊤}) (ensures {⊤})
t = do {
  q <- init 0
  apply X to (q)
  b <- meas q
  return b
}
"""
    assert sim.histogram(parse(src), "t", shots=200) == {"1": 200}


@pytest.mark.parametrize("seed", range(8))
def test_teleport_recovers_input(corpus, seed):
    prog = corpus("teleport.qh")
    t = sim.run(prog, "teleport", {"q": [0.6, 0.8]}, seed=seed)
    assert t.final.names == ["b"]
    assert up_to_phase(t.final.vector, np.array([0.6, 0.8]))


def test_modular_teleport(corpus):
    prog = corpus("teleport2.qh")
    for seed in range(8):
        t = sim.run(prog, "teleport", {"q": [S, 1j * S]}, seed=seed)
        assert up_to_phase(t.final.vector, np.array([S, 1j * S]))


@pytest.mark.parametrize("fname", ["const0", "const1", "id", "not"])
def test_deutsch_oracle_cases(corpus, fname):
    prog = corpus("deutsch.qh")
    table = O.BIT_TABLES[fname]
    want = str(table[0] ^ table[1])
    assert sim.histogram(prog, "deutsch", {"f": fname}, shots=50) == {want: 50}


def test_same_seed_same_trajectory():
    prog = parse(BELL_MEAS)
    a = [sim.run(prog, "bm", seed=s).bits() for s in range(30)]
    b = [sim.run(prog, "bm", seed=s).bits() for s in range(30)]
    assert a == b and len(set(a)) == 2


def test_measured_registers_dropped():
    t = sim.run(parse(BELL_MEAS), "bm", seed=1)
    assert t.final.names == []
    assert [name for name, _ in t.outcomes] == ["x", "y"]


def test_returned_qubits_measured_on_request(corpus):
    hist = sim.histogram(corpus("bell00.qh"), "bell00", shots=2000, seed=3, measure_result=True)
    assert set(hist) == {"00", "11"}


def test_missing_input():
    src = """t : (q: qbit) -> QST (r : qbit) (requires {⊤}) (ensures {⊤})
t q = do {
  return q
}
"""
    with pytest.raises(SimulationError, match="missing input"):
        sim.run(parse(src), "t")


def test_use_after_measure():
    src = """t : QST (b : bit) (requires {⊤}) (ensures {⊤})
t = do {
  q <- init 0
  b <- meas q
  apply X to (q)
  return b
}
"""
    with pytest.raises(UseAfterMeasure):
        sim.run(parse(src), "t")


# differential checking


def test_differential_bell(corpus):
    prog = corpus("bell00.qh")
    (r,) = check_program(prog)
    assert sim.differential_check(prog, "bell00", r.cases[0], range(16))


@pytest.mark.parametrize("file, decl", [("teleport.qh", "teleport"), ("teleport2.qh", "teleport"),
                                        ("teleport2.qh", "bob"), ("deutsch.qh", "deutsch"),
                                        ("cointoss.qh", "cointoss")])
def test_differential_corpus(corpus, file, decl):
    prog = corpus(file)
    r = check_decl(prog, prog.get(decl))
    for case in r.cases:
        assert sim.differential_check(prog, decl, case, range(16))


def test_differential_needs_explicit_inputs_for_entangled_params(corpus):
    prog = corpus("teleport2.qh")
    r = check_decl(prog, prog.get("alice"))
    with pytest.raises(SimulationError, match="entangled with ghosts"):
        sim.differential_check(prog, "alice", r.cases[0], range(2))


def test_fault_injection_diverges_at_step_one():
    bad = dict(GATES)
    bad["H"] = GATES["X"]
    src = """h1 : (q: qbit) -> QST (r : qbit) (requires {q =q |0⟩}) (ensures {⊤})
h1 q = do {
  apply H to (q)
  return q
}
"""
    prog = parse(src)
    r = check_decl(prog, prog.get("h1"), Options(gates=bad))
    with pytest.raises(Divergence) as ei:
        sim.differential_check(prog, "h1", r.cases[0], range(4))
    assert ei.value.step == 1 and ei.value.seed == 0


def test_random_programs_small_batch():
    for src in programs(count=20, seed=11):
        prog = parse(src)
        (r,) = check_program(prog)
        assert r.passed
        assert sim.differential_check(prog, "t", r.cases[0], range(4))

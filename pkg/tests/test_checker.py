import numpy as np
import pytest

import oracles as O
from qhtt.checker import CALLPRE, FRAMESEP, POSTCHECK, Options, check_program, typecheck_decl
from qhtt.checker.types import TypeCtx, infer_term, wf_type
from qhtt.errors import QTypeError
from qhtt.linalg import reduced_density
from qhtt.surface import ast as A
from qhtt.surface import parse, parse_term, parse_type

S = 1 / np.sqrt(2)


def check(src, **opts):
    return {r.name: r for r in check_program(parse(src), Options(**opts) if opts else None)}


def one(src, **opts):
    reps = check(src, **opts)
    assert len(reps) == 1 or "t" in reps
    return reps.get("t") or next(iter(reps.values()))


def final_vec(case, names):
    snap = case.steps[-1].snapshot if case.steps else case.initial
    lay = snap.layout
    idx = [lay.index(n) for n in names]
    rest = [i for i in range(lay.n) if i not in idx]
    v = snap.vector.concrete()
    return np.transpose(v.reshape((2,) * lay.n), idx + rest).reshape(-1)


# static typing


def test_wf_types():
    ctx = TypeCtx()
    wf_type(ctx, A.QBIT)
    wf_type(ctx, parse_type("QST (q: qbit) (requires {⊤}) (ensures {q =q |0⟩})"))
    with pytest.raises(QTypeError, match="only appear in specifications"):
        wf_type(ctx, A.TPi("x", A.VECTOR, A.BIT))


def test_infer_terms():
    ctx = TypeCtx()
    assert infer_term(ctx, A.BitLit(0)) == A.BIT
    assert infer_term(ctx, A.GateConst("CX")) == A.UNITARY
    with pytest.raises(QTypeError, match="ghost in program term"):
        infer_term(ctx.with_ghosts([("e", A.QBIT)]), parse_term("e"))


def test_ghost_returned_is_type_error():
    r = one("""t : QST (b : qbit) {e: qbit} (requires {⊤}) (ensures {⊤})
t = do {
  return e
}""")
    assert r.type_error and "ghost in program term" in r.error.message


def test_typecheck_corpus(corpus):
    prog = corpus("teleport2.qh")
    decls = {d.name: d.type for d in prog.decls}
    for d in prog.decls:
        typecheck_decl(d, decls)


# straight-line execution


def test_init_states():
    r = one("""t : QST ((a, b) : qbit ⊗ qbit) (requires {⊤}) (ensures {(a, b) =q |01⟩})
t = do {
  a <- init 0
  b <- init 1
  return (a, b)
}""")
    assert r.passed
    c = r.cases[0]
    assert c.steps[0].prop == "a =q |0⟩"
    assert np.allclose(final_vec(c, ["a", "b"]), [0, 1, 0, 0])


def test_two_inits_are_distinct():
    r = one("""t : QST ((a, b) : qbit ⊗ qbit) (requires {⊤}) (ensures {a =q |0⟩ ∧ b =q |0⟩})
t = do {
  a <- init 0
  b <- init 0
  return (a, b)
}""")
    assert r.passed
    assert r.cases[0].steps[-1].snapshot.layout.names == ["a", "b"]


def test_bell_steps(corpus):
    r = check_program(corpus("bell00.qh"))[0]
    c = r.cases[0]
    assert np.allclose(final_vec(c, ["a", "b"]), [S, 0, 0, S])
    # after H alone: (|00>+|10>)/sqrt(2)
    h = c.steps[2].snapshot
    assert np.allclose(h.vector.concrete(), [S, 0, S, 0])


def test_measurement_keeps_distribution():
    r = one("""t : QST ((x, b) : bit ⊗ qbit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 0
  b <- init 0
  apply H to (a)
  apply CX to (a, b)
  x <- meas a
  return (x, b)
}""")
    c = r.cases[0]
    snap = c.steps[-1].snapshot  # return records no step
    assert "e_x" in snap.layout.names and "a" not in snap.layout.names
    assert np.allclose(final_vec(c, ["e_x", "b"]), [S, 0, 0, S])


def test_meas_of_one_links_outcome():
    r = one("""t : QST (x : bit) (requires {⊤}) (ensures {x =c 1})
t = do {
  q <- init 1
  x <- meas q
  return x
}""")
    assert r.passed
    assert "e_x =q |1⟩" in r.cases[0].steps[-1].prop


@pytest.mark.parametrize("body", ["b <- meas q\n  apply X to (q)", "b <- meas q\n  c <- meas q"])
def test_use_after_measure(body):
    r = one(f"""t : QST (b : bit) (requires {{⊤}}) (ensures {{⊤}})
t = do {{
  q <- init 0
  {body}
  return b
}}""")
    assert not r.passed and r.cases[0].error.kind == "UseAfterMeasure"


def test_literal_branch():
    r = one("""t : QST (q : qbit) (requires {⊤}) (ensures {q =q |1⟩})
t = do {
  q <- init 0
  if 1 then { apply X to (q) } else { apply Z to (q) }
  return q
}""")
    assert r.passed


def test_measured_branch_is_controlled():
    r = one("""t : QST ((x, b) : bit ⊗ qbit) (requires {⊤}) (ensures {b =q |0⟩})
t = do {
  a <- init 0
  b <- init 0
  apply H to (a)
  apply CX to (a, b)
  x <- meas a
  if x then { apply X to (b) }
  return (x, b)
}""")
    assert r.passed


def test_measurement_in_branch_unsupported():
    r = one("""t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  q <- init 0
  p <- init 0
  apply H to (q)
  c <- meas q
  if c then {
    y <- meas p
    return ()
  }
  return ()
}""")
    assert r.cases[0].error.kind == "UnsupportedBranchEffect"


def test_branch_on_unknown_bit():
    r = check("""coin : QST (r : bit) (requires {⊤}) (ensures {⊤})
coin = do {
  q <- init 0
  r <- meas q
  return r
}

t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  q <- init 0
  r <- coin
  if r then { apply X to (q) }
  return ()
}""")["t"]
    assert r.cases[0].error.kind == "UnknownBitOrigin"


def test_register_cap():
    r = one("""t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 0
  b <- init 0
  c <- init 0
  return ()
}""", max_registers=2)
    assert r.cases[0].error.kind == "CapacityError"


def test_empty_body_passes():
    r = one("""t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  return ()
}""")
    assert r.passed and r.cases[0].initial_prop == "⊤"


# calls

CALLEE = """zero : (x: qbit) -> QST (y : qbit) (requires {x =q |0⟩}) (ensures {y =q |1⟩})
zero x = do {
  apply X to (x)
  return x
}
"""


def test_call_applies_callee_effect():
    r = check(CALLEE + """
t : QST ((c, b) : qbit ⊗ qbit) (requires {⊤}) (ensures {c =q |1⟩ ∧ b =q |+⟩})
t = do {
  a <- init 0
  b <- init 0
  apply H to (b)
  c <- zero a
  return (c, b)
}""")
    assert r["t"].passed
    rules = [o.rule for o in r["t"].obligations]
    assert rules == [FRAMESEP, CALLPRE, POSTCHECK]


def test_call_precondition_failure():
    r = check(CALLEE + """
t : QST (c : qbit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 1
  c <- zero a
  return c
}""")["t"]
    assert not r.passed
    assert [o.rule for o in r.obligations if not o.holds] == [CALLPRE]


def test_frame_separation_violation():
    r = check(CALLEE + """
t : QST ((c, b) : qbit ⊗ qbit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 0
  b <- init 0
  apply H to (a)
  apply CX to (a, b)
  c <- zero a
  return (c, b)
}""")["t"]
    assert r.cases[0].error.kind == "FrameSepViolation"
    assert [o.rule for o in r.obligations] == [FRAMESEP]


EAT = """eat : (x: qbit) -> QST (u : unit) {e: qbit} (requires {(x, e) =q |00⟩}) (ensures {⊤})
eat x = do {
  return ()
}
"""


def test_ambiguous_ghost_binding():
    r = check(EAT + """
t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 0
  b <- init 0
  c <- init 0
  u <- eat a
  return u
}""")["t"]
    assert r.cases[0].error.kind == "AmbiguousGhostBinding"


def test_explicit_ghost_binding_resolves_ambiguity():
    r = check(EAT + """
t : QST (u : unit) (requires {⊤}) (ensures {⊤})
t = do {
  a <- init 0
  b <- init 0
  c <- init 0
  u <- eat a with {e := c}
  return u
}""")["t"]
    assert r.passed
    pre = [o for o in r.obligations if o.rule == CALLPRE][0]
    assert pre.verdict.detail == "ghosts e := c"


# corpus


def test_bell_corpus(corpus):
    (r,) = check_program(corpus("bell00.qh"))
    assert r.passed
    (o,) = r.obligations
    assert o.verdict.mode == "exact" and "coefficients exact" in o.verdict.detail


@pytest.mark.parametrize("mutant", ["mutants/bell00_no_h.qh", "mutants/bell00_no_cx.qh"])
def test_bell_mutants_fail_postcheck(corpus, mutant):
    (r,) = check_program(corpus(mutant))
    assert not r.passed
    assert [o.rule for o in r.obligations if not o.holds] == [POSTCHECK]


def test_teleport_corpus(corpus):
    (r,) = check_program(corpus("teleport.qh"))
    assert r.passed and r.obligations[-1].verdict.mode == "sampled"
    (m,) = check_program(corpus("mutants/teleport_swapped.qh"))
    assert not m.passed and m.obligations[-1].rule == POSTCHECK


def test_teleport_modular_binds_ghost(corpus):
    reps = {r.name: r for r in check_program(corpus("teleport2.qh"))}
    assert all(r.passed for r in reps.values())
    pre = [o for o in reps["teleport"].obligations if o.rule == CALLPRE and "alice" in o.message + o.after
           or o.verdict.detail.startswith("ghosts e")]
    assert any(o.verdict.detail == "ghosts e := b" for o in pre)


def test_deutsch_cases(corpus):
    (r,) = check_program(corpus("deutsch.qh"))
    assert r.passed
    labels = [c.label for c in r.cases]
    assert labels == ["f=const0", "f=const1", "f=id", "f=not"]
    for c in r.cases:
        fname = c.label.split("=")[1]
        want = O.deutsch_first_qubit(O.BIT_TABLES[fname])  # oracle: ±|f(0) xor f(1)>
        snap = c.steps[-2].snapshot  # after the second H on x1, before meas
        rho = reduced_density(snap.vector, [snap.layout.index("x1")])
        assert np.allclose(rho, np.outer(want, want.conj()), atol=1e-9)


def test_two_bit_oracle_unsupported():
    r = one("""t : (f: bit -> bit -> bit) -> QST (u : unit) (requires {⊤}) (ensures {⊤})
t f = do {
  return ()
}""")
    assert not r.passed and r.error.kind == "Unsupported"


def test_cointoss(corpus):
    reps = {r.name: r for r in check_program(corpus("cointoss.qh"))}
    assert reps["coin"].passed and reps["cointoss"].passed
    (bad,) = check_program(corpus("cointoss_bad.qh"))
    assert not bad.passed
    assert any("uniform: only defined for quantum variables" in m for m in bad.failures())


def test_prop_mode(corpus):
    (r,) = check_program(corpus("parity.qh"))
    assert r.passed and r.cases[0].mode == "prop"
    assert r.obligations[-1].rule == "Consq"


def test_report_json_shape(corpus):
    (r,) = check_program(corpus("bell00.qh"))
    d = r.to_dict()
    assert d["verdict"] == "pass"
    o = d["obligations"][0]
    for key in ("span", "rule", "propositionBefore", "propositionAfter", "verdict", "mode"):
        assert key in o

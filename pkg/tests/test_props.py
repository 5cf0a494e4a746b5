import numpy as np
import pytest

import oracles as O
from qhtt.errors import NotSubspaceExpressible, QTypeError
from qhtt.linalg import SymVector, equal, span
from qhtt.props import (
    EXACT,
    SAMPLED,
    RegisterLayout,
    StatePred,
    StateView,
    denote_subspace,
    desugar,
    entails,
    sample_points,
    satisfies,
    seed_from_env,
)
from qhtt.props.sampling import DEFAULT_SEED
from qhtt.surface import ast as A
from qhtt.surface import parse_prop

S = 1 / np.sqrt(2)
AB = RegisterLayout.of(["a", "b"])


def P(s):
    return parse_prop(s)


def view(vec, names, **kw):
    return StateView(SymVector.constant(vec), RegisterLayout.of(names), **kw)


# desugaring


def test_desugar_eqq_to_span():
    d = desugar(P("(a,b) =q (|00⟩+|11⟩)/√2"))
    assert isinstance(d, A.InQ) and len(d.subspace.vectors) == 1


def test_desugar_fixpoint_and_predicates():
    assert desugar(A.Top()) == A.Top()
    assert desugar(P("uniform(q)")) == StatePred("uniform", ("q",))


# denotation


def test_classical_equality_space():
    sp = denote_subspace(P("a ≡cl b"), AB)
    # oracle: basis vectors with equal bits
    assert equal(sp, span([O.basis([0, 0]), O.basis([1, 1])]))


def test_quantum_equality_is_swap_fixed_space():
    sp = denote_subspace(P("a ≡q b"), AB)
    assert sp.rank == O.fixed_space_dim(O.swap(2, 0, 1)) == 3
    assert equal(sp, span([O.basis([0, 0]), O.basis([1, 1]), (O.basis([0, 1]) + O.basis([1, 0])) * S]))


def test_bottom_is_zero():
    assert denote_subspace(A.Bottom(), AB).rank == 0


def test_connectives():
    both = denote_subspace(P("a =q |0⟩ ∧ b =q |1⟩"), AB)
    assert equal(both, span([O.basis([0, 1])]))
    either = denote_subspace(P("a =q |0⟩ ∨ a =q |1⟩"), AB)
    assert either.rank == 4


def test_gate_image():
    sp = denote_subspace(P("(CX on (a, b)) · ((a, b) ∈q span{|00⟩, |11⟩})"), AB)
    assert equal(sp, span([O.basis([0, 0]), O.basis([1, 0])]))


def test_not_subspace_expressible():
    with pytest.raises(NotSubspaceExpressible):
        entails(P("uniform(a)"), A.Top(), AB)


# entailment


def test_bottom_entails_everything():
    assert entails(A.Bottom(), P("a =q |0⟩"), AB).holds


def test_bell_entails_parity():
    v = entails(P("(a,b) =q (|00⟩+|11⟩)/√2"), P("(a, b) ∈q span{|00⟩, |11⟩}"), AB)
    assert v.holds and v.mode == EXACT


def test_plus_does_not_entail_zero():
    assert not entails(P("a =q |+⟩"), P("a =q |0⟩"), AB).holds


def test_symbolic_entailment_is_sampled():
    v = entails(P("a =q psi"), P("a =q psi ∨ a =q |0⟩"), AB)
    assert v.holds and v.mode == SAMPLED
    v = entails(P("a =q psi"), P("a =q |0⟩"), AB)
    assert not v.holds and v.counterexample is not None


def test_implication_goal():
    assert entails(P("a =q |0⟩"), P("b =q |1⟩ => (a, b) =q |01⟩"), AB).holds


# satisfaction


def test_bell_satisfies_eqq_not_separable():
    bell = view([S, 0, 0, S], ["a", "b"])
    assert satisfies(bell, P("(a,b) =q (|00⟩+|11⟩)/√2")).holds
    # purity of the marginal is 0.5 (oracle), so a is not separable
    assert not satisfies(bell, P("separable(a)")).holds


def test_plus_is_uniform():
    assert satisfies(view([S, S], ["q"]), P("uniform(q)")).holds
    assert not satisfies(view([1, 0], ["q"]), P("uniform(q)")).holds


def test_basis_is_classical():
    assert satisfies(view([1, 0], ["q"]), P("class(q)")).holds
    assert not satisfies(view([S, S], ["q"]), P("class(q)")).holds


def test_quantum_predicate_on_bit_is_rejected():
    v = view([S, S], ["e_b"], bits={"b": ("link", "e_b")})
    with pytest.raises(QTypeError, match="only defined for quantum variables"):
        satisfies(v, P("uniform(b)"))


def test_symbolic_state_sampled():
    psi = SymVector.symbolic("psi", 2)
    v = StateView(psi, RegisterLayout.of(["q"]))
    verdict = satisfies(v, P("q =q psi"))
    assert verdict.holds and verdict.mode == SAMPLED
    assert not satisfies(v, P("q =q |0⟩")).holds


# sampling


def test_sample_points_fixed_prefix():
    pts = sample_points({"psi[0]", "psi[1]"})
    assert len(pts) == 16
    firsts = [(p["psi[0]"], p["psi[1]"]) for p in pts[:5]]
    assert np.allclose(firsts, [(1, 0), (0, 1), (S, S), (S, -S), (S, 1j * S)])
    for p in pts:
        assert abs(abs(p["psi[0]"]) ** 2 + abs(p["psi[1]"]) ** 2 - 1) < 1e-12


def test_sample_points_deterministic():
    assert sample_points({"psi[0]", "psi[1]"}) == sample_points({"psi[0]", "psi[1]"})
    assert sample_points(set()) == [{}]


def test_seed_from_env(monkeypatch):
    monkeypatch.delenv("QHTT_SEED", raising=False)
    assert seed_from_env() == DEFAULT_SEED
    monkeypatch.setenv("QHTT_SEED", "0x10")
    assert seed_from_env() == 16

"""Hypothesis strategies for well-formed surface ASTs."""

from hypothesis import strategies as st

from qhtt.surface import ast as A

NAMES = ["a", "b", "q", "x", "y", "r", "psi", "phi", "q1", "x_2"]
GATE_NAMES = ["I", "X", "Y", "Z", "H", "CX", "CZ"]
BASE = [A.UNIT, A.BIT, A.QBIT, A.VECTOR, A.COMPLEX, A.UNITARY, A.PROP]

names = st.sampled_from(NAMES)
gates = st.sampled_from(GATE_NAMES)
qvars = st.lists(names, min_size=1, max_size=3, unique=True).map(tuple)

# bit expressions
bits = st.recursive(
    st.one_of(st.builds(A.BConst, st.sampled_from([0, 1])), st.builds(A.BVar, names)),
    lambda inner: st.one_of(st.builds(A.BApp, st.sampled_from(["f", "g"]), inner), st.builds(A.BXor, inner, inner)),
    max_leaves=4,
)

# amplitude and state expressions, generated by sort: scalars, and states on k qubits
numbers = st.sampled_from(["0", "1", "2", "3", "0.5", "0.6", "12"])
scalars = st.recursive(
    st.one_of(st.builds(A.NumE, numbers), st.builds(A.ImagE)),
    lambda inner: st.one_of(
        st.builds(A.AddE, inner, inner),
        st.builds(A.SubE, inner, inner),
        st.builds(A.MulE, inner, inner),
        st.builds(A.DivE, inner, inner),
        st.builds(A.NegE, inner),
        st.builds(A.SqrtE, inner),
        st.builds(A.PowE, inner, bits),
    ),
    max_leaves=3,
)
GATES_BY_ARITY = {1: ["I", "X", "Y", "Z", "H"], 2: ["CX", "CZ"]}


def _state_leaves(k):
    kets = st.builds(A.KetE, st.lists(bits, min_size=k, max_size=k).map(tuple))
    out = [kets, st.builds(A.VecName, names)]
    if k == 1:
        out.append(st.builds(A.KetSym, st.sampled_from(["+", "-"])))
    return st.one_of(*out)


def _state_nodes(k):
    def extend(inner):
        opts = [
            st.builds(A.AddE, inner, inner),
            st.builds(A.SubE, inner, inner),
            st.builds(A.MulE, scalars, inner),
            st.builds(A.MulE, inner, scalars),
            st.builds(A.DivE, inner, scalars),
            st.builds(A.NegE, inner),
            st.builds(A.GateAppE, st.sampled_from(GATES_BY_ARITY[k]), st.none() | bits, inner),
        ]
        if k == 2:
            opts.append(st.builds(A.TensorE, states[1], states[1]))
        return st.one_of(*opts)

    return extend


states = {}
for _k in (1, 2):
    states[_k] = st.recursive(_state_leaves(_k), _state_nodes(_k), max_leaves=4)
amps = st.one_of(scalars, states[1], states[2])


def _span_of(k):
    return st.builds(A.SpanE, st.lists(states[k], min_size=1, max_size=3).map(tuple))


def _sized(k):
    return st.lists(names, min_size=k, max_size=k, unique=True).map(tuple)


arity = st.sampled_from([1, 2])

# propositions
prop_leaves = st.one_of(
    st.builds(A.Top),
    st.builds(A.Bottom),
    arity.flatmap(lambda k: st.builds(A.InQ, _sized(k), _span_of(k))),
    arity.flatmap(lambda k: st.builds(A.EqQ, _sized(k), states[k])),
    st.integers(1, 3).flatmap(lambda k: _sized(2 * k).map(lambda v: A.EquivQ(v[:k], v[k:]))),
    st.integers(1, 3).flatmap(lambda k: _sized(2 * k).map(lambda v: A.EquivCl(v[:k], v[k:]))),
    st.builds(A.EqC, names, bits),
    st.builds(A.Uniform, qvars),
    st.builds(A.Separable, qvars),
    st.builds(A.Class, qvars),
)
props = st.recursive(
    prop_leaves,
    lambda inner: st.one_of(
        st.builds(A.And, inner, inner),
        st.builds(A.Or, inner, inner),
        st.builds(A.Implies, inner, inner),
        arity.flatmap(lambda k: st.builds(A.UnitaryOn, st.sampled_from(GATES_BY_ARITY[k]), _sized(k), inner)),
    ),
    max_leaves=5,
)

# patterns and types
patterns = st.recursive(st.builds(A.PVar, names), lambda inner: st.builds(A.PPair, inner, inner), max_leaves=3)
ghost_lists = st.lists(st.tuples(names, st.sampled_from([A.QBIT, A.VECTOR, A.BIT, A.PROP])), max_size=3,
                       unique_by=lambda g: g[0]).map(tuple)


def _types(inner):
    return st.one_of(
        st.builds(A.TPair, inner, inner),
        st.builds(A.TPi, names | st.just("_"), inner, inner),
        st.builds(A.THoare, patterns, inner, ghost_lists, props, props),
    )


types = st.recursive(st.sampled_from(BASE), _types, max_leaves=4)

# terms and computations
term_leaves = st.one_of(
    st.builds(A.Var, names),
    st.builds(A.BitLit, st.sampled_from([0, 1])),
    st.builds(A.UnitLit),
    st.builds(A.GateConst, gates),
)


def _term_nodes(inner):
    return st.one_of(
        st.builds(A.PairI, inner, inner),
        st.builds(A.Fst, inner),
        st.builds(A.Snd, inner),
        st.builds(A.Lambda, names, st.none() | types, inner),
        st.builds(A.App, inner, inner),
    )


simple_terms = st.recursive(term_leaves, _term_nodes, max_leaves=4)
cmds = st.one_of(
    st.builds(A.Init, st.sampled_from([0, 1])),
    st.builds(A.Meas, simple_terms),
    st.builds(A.Apply, st.builds(A.GateConst, st.sampled_from(GATES_BY_ARITY[1])), st.builds(A.Var, names)),
    st.builds(
        A.Apply,
        st.builds(A.GateConst, st.sampled_from(GATES_BY_ARITY[2])),
        _sized(2).map(lambda v: A.PairI(A.Var(v[0]), A.Var(v[1]))),
    ),
)
# a bare name in a ghost argument always parses as Var, so a lone VecName is not a distinct tree
_ghost_states = st.one_of(states[1], states[2]).filter(lambda e: not isinstance(e, A.VecName))
ghost_args = st.lists(st.tuples(names, st.one_of(st.builds(A.Var, names), _ghost_states)), max_size=2,
                      unique_by=lambda g: g[0]).map(tuple)


def _comp_nodes(inner):
    return st.one_of(
        st.builds(A.BindCmd, patterns, cmds, inner),
        st.builds(A.BindCall, patterns, st.builds(A.Var, names), st.lists(simple_terms, max_size=2).map(tuple),
                  ghost_args, inner),
        st.builds(A.IfThenElse, simple_terms, inner, inner, inner),
    )


comps = st.recursive(st.builds(A.Return, simple_terms), _comp_nodes, max_leaves=5)
terms = st.one_of(simple_terms, st.builds(A.Do, comps))

declarations = st.builds(
    A.Declaration,
    names,
    types,
    st.lists(names, max_size=2, unique=True).map(tuple),
    terms,
)
programs = st.builds(A.Program, st.lists(declarations, min_size=1, max_size=3, unique_by=lambda d: d.name).map(tuple))

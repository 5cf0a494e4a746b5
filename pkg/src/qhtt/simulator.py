"""Dense state-vector simulation of programs, ignoring their specifications.

The simulator is deliberately independent of the checker: it has its own gate
matrices, its own contraction code, and it collapses measured registers
instead of keeping them as ghosts.  Randomness comes from numpy's PCG64
generator seeded with the caller's seed, so trajectories are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import Divergence, SimulationError, UseAfterMeasure
from .props.expr import BIT_FUNCTIONS, EvalEnv, eval_vector
from .surface import ast as A
from .surface.pretty import stmt_lines

_R = 1 / np.sqrt(2)

SIM_GATES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_R, _R], [_R, -_R]], dtype=complex),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


@dataclass
class ConcreteState:
    vector: np.ndarray
    names: list

    def amplitudes(self) -> dict:
        n = len(self.names)
        return {format(i, f"0{n}b"): complex(a) for i, a in enumerate(self.vector) if abs(a) > 1e-12}


@dataclass
class SimStep:
    index: int
    text: str
    state: ConcreteState
    outcomes: dict  # bit variable -> value, for bits bound so far


@dataclass
class Trajectory:
    seed: int
    outcomes: list = field(default_factory=list)  # [(bit variable, value)] in measurement order
    final: ConcreteState | None = None
    steps: list = field(default_factory=list)
    result: object = None
    returned: list = field(default_factory=list)  # axes of returned qubits in ``final``

    def bits(self) -> str:
        return "".join(str(b) for _, b in self.outcomes)


@dataclass(frozen=True)
class _Q:
    rid: int


@dataclass(frozen=True)
class _Fn:
    table: tuple


@dataclass(frozen=True)
class _Callee:
    name: str
    type: object
    decl: object = None  # None for opaque parameters


_UNIT = ("unit",)


class Machine:
    def __init__(self, program, seed: int, funcs=None):
        self.program = program
        self.rng = np.random.default_rng(seed)
        self.vec = np.ones(1, dtype=complex)
        self.ids: list[int] = []  # axis i holds register ids[i]
        self.names: dict[int, str] = {}
        self.freed: set = set()
        self.outcomes: list = []
        self.funcs = dict(funcs or {})
        self._next = itertools.count()

    # -------------------------------------------------- registers

    def alloc(self, name, amps) -> _Q:
        amps = np.asarray(amps, dtype=complex)
        rid = next(self._next)
        self.vec = np.kron(self.vec, amps)
        self.ids.append(rid)
        self.names[rid] = name
        return _Q(rid)

    def axis(self, q: _Q, span=None) -> int:
        if q.rid in self.freed:
            raise UseAfterMeasure(f"qubit {self.names[q.rid]} was measured", span)
        return self.ids.index(q.rid)

    def apply(self, u, axes):
        n = len(self.ids)
        k = len(axes)
        t = self.vec.reshape((2,) * n)
        t = np.tensordot(u.reshape((2,) * (2 * k)), t, axes=(list(range(k, 2 * k)), axes))
        # tensordot puts the gate's output axes first; move them back
        t = np.moveaxis(t, list(range(k)), axes)
        self.vec = t.reshape(-1)

    def replace(self, m, axes, out_ids):
        """Contract ``m`` into ``axes`` and put its outputs first, named by ``out_ids``."""
        n = len(self.ids)
        rest = [i for i in range(n) if i not in axes]
        t = np.transpose(self.vec.reshape((2,) * n), list(axes) + rest).reshape(2 ** len(axes), -1)
        self.vec = (m @ t).reshape(-1)
        self.ids = list(out_ids) + [self.ids[i] for i in rest]

    def measure(self, q: _Q, span=None) -> int:
        ax = self.axis(q, span)
        n = len(self.ids)
        t = np.moveaxis(self.vec.reshape((2,) * n), ax, 0).reshape(2, -1)
        p = np.sum(np.abs(t) ** 2, axis=1)
        total = p.sum()
        if abs(total - 1) > 1e-9:
            raise SimulationError(f"state norm drifted to {total}")
        p1 = float(p[1] / total)
        bit = int(self.rng.random() < p1)
        kept = t[bit]
        self.vec = kept / np.linalg.norm(kept)
        del self.ids[ax]
        self.freed.add(q.rid)
        return bit

    def state(self) -> ConcreteState:
        return ConcreteState(self.vec.copy(), [self.names[r] for r in self.ids])

    # -------------------------------------------------- evaluation

    def term(self, t, env):
        if isinstance(t, A.Var):
            if t.name in env:
                return env[t.name]
            for d in self.program.decls:
                if d.name == t.name:
                    return _Callee(d.name, d.type, d)
            raise SimulationError(f"unbound variable {t.name}", t.span)
        if isinstance(t, A.BitLit):
            return t.value
        if isinstance(t, A.UnitLit):
            return _UNIT
        if isinstance(t, A.GateConst):
            return t.name
        if isinstance(t, A.PairI):
            return (self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, A.Fst):
            return self.term(t.arg, env)[0]
        if isinstance(t, A.Snd):
            return self.term(t.arg, env)[1]
        raise SimulationError("unsupported term", getattr(t, "span", None))

    def bind(self, pat, v, env):
        if isinstance(pat, A.PVar):
            if pat.name != "_":
                env[pat.name] = v
                if isinstance(v, _Q):
                    self.names[v.rid] = pat.name
        else:
            self.bind(pat.left, v[0], env)
            self.bind(pat.right, v[1], env)

    def run(self, c, env, log=None):
        while not isinstance(c, A.Return):
            if isinstance(c, A.BindCmd):
                cmd = c.cmd
                if isinstance(cmd, A.Init):
                    name = c.pattern.name if isinstance(c.pattern, A.PVar) else "_"
                    env_v = self.alloc(name, [1, 0] if cmd.bit == 0 else [0, 1])
                    self.bind(c.pattern, env_v, env)
                elif isinstance(cmd, A.Meas):
                    b = self.measure(self.term(cmd.qubit, env), c.span)
                    name = c.pattern.name if isinstance(c.pattern, A.PVar) else "_"
                    self.outcomes.append((name, b))
                    self.bind(c.pattern, b, env)
                else:
                    g = self.term(cmd.gate, env)
                    tv = self.term(cmd.targets, env)
                    qs = list(tv) if isinstance(tv, tuple) else [tv]
                    self.apply(SIM_GATES[g], [self.axis(q, c.span) for q in qs])
                    self.bind(c.pattern, _UNIT, env)
            elif isinstance(c, A.BindCall):
                self.bind(c.pattern, self.call(c, env), env)
            elif isinstance(c, A.IfThenElse):
                cond = self.term(c.cond, env)
                self.run(c.then if cond else c.orelse, dict(env))
            if log is not None:
                text = " ".join(next(stmt_lines(_single(c)))[1].split())
                outs = {k: v for k, v in env.items() if isinstance(v, int) and not isinstance(v, bool)}
                log.append(SimStep(len(log), text, self.state(), outs))
            c = c.rest
        return self.term(c.value, env)

    def call(self, c, env):
        callee = self.term(c.fn, env)
        args = [self.term(a, env) for a in c.args]
        if not isinstance(callee, _Callee):
            raise SimulationError("call of a non-computation", c.span)
        if callee.decl is not None:
            return self.inline(callee.decl, args, c.span)
        return self.opaque(callee.type, args, env, c.span)

    def inline(self, decl, args, span):
        body, params = decl.body, list(decl.params)
        while isinstance(body, A.Lambda):
            params.append(body.param)
            body = body.body
        if not isinstance(body, A.Do) or len(params) != len(args):
            raise SimulationError(f"cannot call {decl.name}", span)
        saved = dict(self.names)
        local = dict(zip(params, args))
        out = self.run(body.body, local)
        # arguments keep the caller's names
        for a in args:
            if isinstance(a, _Q) and a.rid in saved:
                self.names[a.rid] = saved[a.rid]
        return out

    def opaque(self, ty, args, env, span):
        """Realize a Hoare-typed parameter from its specification."""
        binders = []
        for a in args:
            binders.append((ty.binder, ty.dom, a))
            ty = ty.cod
        hoare = ty
        if any(t != A.BIT for _, t in hoare.ghosts):
            raise SimulationError("opaque computations need specifications over bit ghosts only", span)
        qargs = [(b, a) for b, t, a in binders if t == A.QBIT]
        bits = {b: a for b, t, a in binders if t == A.BIT}
        ghosts = [g for g, _ in hoare.ghosts]
        pre = [f for f in A.conjuncts(hoare.pre) if isinstance(f, A.EqQ)]
        post = [f for f in A.conjuncts(hoare.post) if isinstance(f, A.EqQ)]
        in_names = [b for b, _ in qargs]
        out_names = [v for f in post for v in f.vars]
        cols_in, cols_out = [], []
        for vals in itertools.product((0, 1), repeat=len(ghosts)):
            e = EvalEnv(bits={**bits, **dict(zip(ghosts, vals))}, funcs=self.funcs, free_vectors=False)
            cols_in.append(_joint(pre, e, in_names))
            cols_out.append(_joint(post, e, out_names))
        v, w = np.stack(cols_in, 1), np.stack(cols_out, 1)
        m = w @ np.linalg.pinv(v)
        axes = [self.axis(a, span) for _, a in qargs]
        by_name = dict(qargs)
        out_ids = []
        for name in out_names:
            if name in by_name:
                out_ids.append(by_name[name].rid)
            else:
                rid = next(self._next)
                self.names[rid] = name
                out_ids.append(rid)
        for _, a in qargs:
            if a.rid not in out_ids:
                self.freed.add(a.rid)
        self.replace(m, axes, out_ids)
        values = dict(zip(out_names, (_Q(r) for r in out_ids)))
        return _rebuild(hoare.result, values)


def _joint(facts, env, order):
    vec, names = np.ones(1, dtype=complex), []
    for f in facts:
        vec = np.kron(vec, eval_vector(f.state, env, len(f.vars)).concrete())
        names.extend(f.vars)
    if sorted(names) != sorted(order):
        raise SimulationError("opaque specification does not fix every qubit")
    n = len(names)
    return np.transpose(vec.reshape((2,) * n), [names.index(x) for x in order]).reshape(-1) if n else vec


def _rebuild(pat, values):
    if isinstance(pat, A.PVar):
        return values.get(pat.name, _UNIT)
    return (_rebuild(pat.left, values), _rebuild(pat.right, values))


def _single(c):
    from dataclasses import replace

    return replace(c, rest=A.Return(A.UnitLit()))


# ------------------------------------------------------------ entry points


def signature(decl):
    ty, out = decl.type, []
    params = list(decl.params)
    body = decl.body
    while isinstance(body, A.Lambda):
        params.append(body.param)
        body = body.body
    for p in params:
        out.append((p, ty.dom, ty.binder))
        ty = ty.cod
    return out, body


def run(program, decl_name, inputs=None, seed=0, funcs=None) -> Trajectory:
    """Run one declaration.

    ``inputs`` maps qubit parameters to amplitude lists (a tuple of names may
    map to one joint vector), bit parameters to 0/1, and ``bit -> bit``
    parameters to one of ``const0``, ``const1``, ``id``, ``not``.
    """
    decl = program.get(decl_name)
    inputs = dict(inputs or {})
    sig, body = signature(decl)
    if not isinstance(body, A.Do):
        raise SimulationError(f"{decl_name} is not a computation")
    fn_inputs = {}
    for p, dom, _ in sig:
        if isinstance(dom, A.TPi) and dom.dom == A.BIT and dom.cod == A.BIT:
            if p not in inputs:
                raise SimulationError(f"missing input for {p} (one of {', '.join(BIT_FUNCTIONS)})")
            fn_inputs[p] = BIT_FUNCTIONS[inputs[p]]
    m = Machine(program, seed, funcs=fn_inputs)
    env = {}
    for key, amps in inputs.items():
        if isinstance(key, tuple):  # one joint vector over several qubit parameters
            m.vec = np.kron(m.vec, np.asarray(amps, dtype=complex).reshape(-1))
            for name in key:
                rid = next(m._next)
                m.ids.append(rid)
                m.names[rid] = name
                env[name] = _Q(rid)
    for p, dom, _ in sig:
        if p in env:
            continue
        if dom == A.QBIT:
            if p not in inputs:
                raise SimulationError(f"missing input state for qubit {p} (use --in {p}=a,b)")
            amps = np.asarray(inputs[p], dtype=complex)
            amps = amps / np.linalg.norm(amps)
            env[p] = m.alloc(p, amps)
        elif dom == A.BIT:
            if p not in inputs:
                raise SimulationError(f"missing input for bit {p}")
            env[p] = int(inputs[p])
        elif p in fn_inputs:
            env[p] = _Fn(fn_inputs[p])
        elif dom == A.UNIT:
            env[p] = _UNIT
        else:
            env[p] = _Callee(p, _rename_cod(dom, sig, p))
    traj = Trajectory(seed)
    traj.result = m.run(body.body, env, traj.steps)
    traj.outcomes = list(m.outcomes)
    traj.final = m.state()
    traj.returned = [m.ids.index(q.rid) for q in _qubits(traj.result)]
    return traj


def _qubits(v):
    if isinstance(v, _Q):
        return [v]
    if isinstance(v, tuple) and len(v) == 2 and v != _UNIT:
        return _qubits(v[0]) + _qubits(v[1])
    return []


def measure_returned(traj: Trajectory, rng) -> str:
    """Sample the returned qubits of a finished run in the computational basis."""
    if not traj.returned:
        return ""
    n = len(traj.final.names)
    t = np.moveaxis(traj.final.vector.reshape((2,) * n), traj.returned, range(len(traj.returned)))
    p = np.sum(np.abs(t.reshape(2 ** len(traj.returned), -1)) ** 2, axis=1)
    k = rng.choice(len(p), p=p / p.sum())
    return format(k, f"0{len(traj.returned)}b")


def _rename_cod(dom, sig, upto):
    """Parameter types may mention earlier binders; rename them to parameter names."""
    from .checker.engine import rename_type

    names = {}
    for p, _, binder in sig:
        if p == upto:
            break
        if binder not in ("_", p):
            names[binder] = p
    return rename_type(dom, names)


def histogram(program, decl_name, inputs=None, shots=1000, seed=0, measure_result=False) -> dict:
    """Outcome counts over ``shots`` runs.

    Keys are the program's measurement outcomes in order; with ``measure_result``
    the returned qubits are measured at the end and their bits appended.
    """
    counts: dict[str, int] = {}
    for k in range(shots):
        s = seed * 1_000_003 + k
        t = run(program, decl_name, inputs, seed=s)
        key = t.bits()
        if measure_result:
            key += measure_returned(t, np.random.default_rng([s, 1]))
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


# ------------------------------------------------------------ differential check


def _density(vec, names, keep):
    n = len(names)
    idx = [names.index(k) for k in keep]
    rest = [i for i in range(n) if i not in idx]
    t = np.transpose(vec.reshape((2,) * n), idx + rest).reshape(2 ** len(idx), -1)
    return t @ t.conj().T


def compare_step(snap, sim_step, point, tol=1e-7):
    """Does a checker snapshot agree with one simulator step?"""
    names = snap.layout.names
    v = snap.vector.instantiate(point)
    n = len(names)
    t = v.reshape((2,) * n) if n else v
    fixed = {}
    for var, val in snap.vars.items():
        if var not in sim_step.outcomes:
            continue
        kind, target = getattr(val, "kind", None), getattr(val, "value", None)
        if kind == "link" and target in names:
            fixed[names.index(target)] = sim_step.outcomes[var]
        elif kind == "lit" and target != sim_step.outcomes[var]:
            return False
    if fixed:
        index = tuple(fixed.get(i, slice(None)) for i in range(n))
        t = t[index]
        names = [x for i, x in enumerate(names) if i not in fixed]
    v = np.asarray(t).reshape(-1)
    nv = np.linalg.norm(v)
    if nv <= 1e-12:
        return False
    v = v / nv
    common = [x for x in sim_step.state.names if x in names]
    rho_c = _density(v, names, common)
    rho_s = _density(sim_step.state.vector, sim_step.state.names, common)
    return bool(np.max(np.abs(rho_c - rho_s), initial=0.0) <= tol)


def differential_check(program, decl_name, case, seeds, point=None, inputs=None, tol=1e-7):
    """Run the simulator for every seed and compare with the checker's snapshots.

    ``case`` is a :class:`CaseReport` from a state-mode check.  Simulator
    inputs are taken from the checker's initial state at ``point`` unless
    given explicitly.  Raises :class:`Divergence` at the first mismatch.
    """
    if case.initial is None or case.initial.vector is None:
        raise SimulationError("differential checking needs a state-mode report")
    if point is None:
        from .props.sampling import sample_points

        params = set(case.initial.vector.parameters)
        for s in case.steps:
            params |= set(s.snapshot.vector.parameters) if s.snapshot.vector is not None else set()
        point = sample_points(params)[5] if params else {}
    if inputs is None:
        inputs = initial_inputs(program.get(decl_name), case.initial, point)
        inputs.update(case.inputs)
    for seed in seeds:
        traj = run(program, decl_name, inputs, seed=seed)
        for i, (snap, st) in enumerate(zip(case.steps, traj.steps)):
            if snap.snapshot.vector is None:
                continue
            if not compare_step(snap.snapshot, st, point, tol):
                raise Divergence(f"simulator and checker disagree after step {i + 1} ({st.text}) with seed {seed}",
                                 seed=seed, step=i + 1)
    return True


def initial_inputs(decl, snap, point):
    """Concrete simulator inputs matching the checker's initial state."""
    sig, _ = signature(decl)
    qparams = [p for p, dom, _ in sig if dom == A.QBIT]
    if not qparams:
        return {}
    names = snap.layout.names
    v = snap.vector.instantiate(point)
    rho = _density(v, names, qparams)
    w, u = np.linalg.eigh(rho)
    if w[-1] < 1 - 1e-9:
        raise SimulationError("parameters are entangled with ghosts; pass inputs explicitly")
    return {tuple(qparams): u[:, -1]}

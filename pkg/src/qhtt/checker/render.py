"""Render symbolic states as propositions, in the style of annotated listings.

Everything produced here re-parses with the surface parser.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from ..linalg import GATES, SymVector, apply_gate
from ..linalg.density import schmidt_rank
from ..props.sampling import group_parameters, sample_points
from ..surface import ast as A
from ..surface.pretty import pretty_amp, pretty_prop

TOL = 1e-9

_GATE_WORDS = [("X",), ("Z",), ("X", "Z"), ("Z", "X"), ("Y",), ("H",)]


def _word_matrix(word):
    m = np.eye(2, dtype=np.complex128)
    for g in word:
        m = m @ GATES[g].matrix
    return m


def _word_ast(word, arg):
    for g in reversed(word):
        arg = A.GateAppE(g, None, arg)
    return arg


# ------------------------------------------------------------ scalars and sums


def _ket(index, width):
    bits = format(index, f"0{width}b") if width else ""
    return A.KetE(tuple(A.BConst(int(c)) for c in bits))


def _num(x):
    return A.NumE(f"{x:.6g}")


def _phase_unit(c):
    """1, -1, 1j or -1j if ``c`` has that phase, else None."""
    u = c / abs(c)
    for p in (1, -1, 1j, -1j):
        if abs(u - p) <= 1e-9:
            return p
    return None


def _with_phase(term, p):
    """(negated?, term) for a unit phase p."""
    if p in (1j, -1j):
        term = A.MulE(A.ImagE(), term)
    return (p in (-1, -1j)), term


def _scale_ast(m):
    """AST for dividing by 1/m when m is a recognizable magnitude, else None."""
    if abs(m - 1) <= 1e-9:
        return "one"
    k = 1 / (m * m)
    kr = round(k)
    if kr >= 2 and abs(k - kr) <= 1e-7:
        root = round(np.sqrt(kr))
        if root * root == kr:
            return A.NumE(str(root))
        return A.SqrtE(A.NumE(str(kr)))
    return None


def _general_coeff(c):
    re, im = c.real, c.imag
    if abs(im) <= 1e-12:
        return _num(re)
    if abs(re) <= 1e-12:
        return A.MulE(_num(im), A.ImagE())
    return A.AddE(_num(re), A.MulE(_num(im), A.ImagE()))


def linear_combination(terms, normalize_phase=True):
    """Build ``sum(c * t)`` as an amplitude AST from ``[(complex, ast), ...]``."""
    terms = [(complex(c), t) for c, t in terms if abs(c) > TOL]
    if not terms:
        return A.NumE("0")
    if normalize_phase:
        ph = terms[0][0] / abs(terms[0][0])
        terms = [(c / ph, t) for c, t in terms]
    mags = [abs(c) for c, _ in terms]
    phases = [_phase_unit(c) for c, _ in terms]
    uniform = all(abs(m - mags[0]) <= 1e-9 for m in mags) and None not in phases
    scale = _scale_ast(mags[0]) if uniform else None
    if uniform and (scale is not None or len(terms) == 1):
        out = None
        for p, (_, t) in zip(phases, terms):
            neg, t = _with_phase(t, p)
            if out is None:
                out = A.NegE(t) if neg else t
            else:
                out = A.SubE(out, t) if neg else A.AddE(out, t)
        if len(terms) == 1 or scale == "one":
            return out
        return A.DivE(out, scale)
    out = None
    for (c, t), p in zip(terms, phases):
        if p is not None:
            neg, t = _with_phase(A.MulE(_num(abs(c)), t) if abs(abs(c) - 1) > 1e-9 else t, p)
        else:
            neg, t = False, A.MulE(_general_coeff(c), t)
        if out is None:
            out = A.NegE(t) if neg else t
        else:
            out = A.SubE(out, t) if neg else A.AddE(out, t)
    return out


def render_constant(v: np.ndarray):
    width = int(len(v)).bit_length() - 1
    return linear_combination([(c, _ket(i, width)) for i, c in enumerate(v)])


# ------------------------------------------------------------ symbolic factors


def _param_matrix(f: SymVector):
    """If ``f`` is linear in the components of one vector with no constant
    part, return (name, dim x d matrix); else None."""
    f = f.canonical()
    cols = {m: c for m, c in zip(f.monomials, f.coeffs.T) if np.linalg.norm(c) > TOL}
    if () in cols or not cols:
        return None
    if any(len(m) != 1 for m in cols):
        return None
    try:
        dims = group_parameters([m[0] for m in cols])
    except ValueError:
        return None
    if len(dims) != 1:
        return None
    (name, d), = dims.items()
    d = max(2, 1 << (d - 1).bit_length())  # ghost vectors span at least one qubit
    m = np.zeros((f.dim, d), dtype=np.complex128)
    for mono, c in cols.items():
        i = int(mono[0][len(name) + 1 : -1])
        m[:, i] = c
    return name, m


def recognize(f: SymVector):
    """``(c, ast)`` with ``f == c * ast`` for ``ast`` built from one vector name and gates."""
    pm = _param_matrix(f)
    if pm is None:
        return None
    name, m = pm
    if m.shape[0] != m.shape[1]:
        return None
    base = A.VecName(name)
    d = m.shape[0]
    words = [()] + (_GATE_WORDS if d == 2 else [])
    for word in words:
        u = _word_matrix(word) if word else np.eye(d)
        c = np.vdot(u, m) / d
        if abs(c) > TOL and np.linalg.norm(m - c * u) <= 1e-9:
            return c, _word_ast(word, base)
    return None


def _contract(f: SymVector, keep, fix):
    """Fix registers ``fix`` (dict reg -> bit) and keep ``keep`` in order."""
    n = f.n_qubits
    k = f.coeffs.shape[1]
    t = f.coeffs.reshape((2,) * n + (k,))
    idx = tuple(fix.get(r, slice(None)) for r in range(n)) + (slice(None),)
    t = t[idx]
    remaining = [r for r in range(n) if r not in fix]
    order = [remaining.index(r) for r in keep]
    t = np.transpose(t, order + [len(remaining)])
    return SymVector(np.ascontiguousarray(t).reshape(-1, k), f.monomials)


def render_symbolic(f: SymVector, names):
    """(vars, amplitude AST) for a symbolic block, or None."""
    rec = recognize(f)
    if rec is not None:
        return tuple(names), rec[1]
    n = f.n_qubits
    for carrier in reversed(range(n)):
        others = [r for r in range(n) if r != carrier]
        terms = []
        ok = True
        for j in range(2 ** len(others)):
            fix = {r: (j >> (len(others) - 1 - i)) & 1 for i, r in enumerate(others)}
            chunk = _contract(f, [carrier], fix)
            if np.all(np.abs(chunk.coeffs) <= TOL):
                continue
            rec = recognize(chunk)
            if rec is None:
                ok = False
                break
            c, ast = rec
            terms.append((c, A.TensorE(_ket(j, len(others)), ast)))
        if ok and terms:
            order = tuple(names[r] for r in others) + (names[carrier],)
            return order, linear_combination(terms)
    return None


def _fallback(f: SymVector, names):
    # explicit amplitudes; not meant to be re-parsed
    parts = []
    width = f.n_qubits
    for i, amp in enumerate(f.entries):
        if not amp.terms:
            continue
        coeff = " + ".join(
            (f"{c:.4g}" if m == () else f"{c:.4g}*{'*'.join(m)}") for m, c in sorted(amp.terms.items())
        )
        parts.append(f"({coeff})|{format(i, f'0{width}b')}⟩")
    lhs = names[0] if len(names) == 1 else "(" + ", ".join(names) + ")"
    return f"{lhs} =q " + " + ".join(parts)


# ------------------------------------------------------------ partition into product factors


def _points_for(vec: SymVector):
    params = vec.parameters
    if not params:
        return [{}]
    pts = sample_points(params)
    return pts[5:8] + pts[:1]


def partition(vec: SymVector, n: int):
    """Finest split of registers into blocks with product structure."""
    concrete = [vec.instantiate(p) for p in _points_for(vec)]
    remaining = list(range(n))
    blocks = []
    while remaining:
        first = remaining[0]
        found = None
        for size in range(1, len(remaining)):
            for combo in combinations(remaining[1:], size - 1):
                part = [first, *combo]
                if all(np.linalg.norm(v) <= TOL or schmidt_rank(v, part, tol=1e-7) <= 1 for v in concrete):
                    found = part
                    break
            if found:
                break
        found = found or list(remaining)
        blocks.append(found)
        remaining = [r for r in remaining if r not in found]
    return blocks


def _vec_of(param):
    return param.rsplit("[", 1)[0]


def _factor_at(vec: SymVector, block, point):
    n = vec.n_qubits
    rest = [r for r in range(n) if r not in block]
    v = vec.instantiate(point)
    t = np.transpose(v.reshape((2,) * n), list(block) + rest).reshape(2 ** len(block), -1)
    f = t[:, int(np.argmax(np.linalg.norm(t, axis=0)))]
    nz = np.flatnonzero(np.abs(f) > TOL)
    if not len(nz):
        return f
    f = f / np.linalg.norm(f)
    return f * (abs(f[nz[0]]) / f[nz[0]])


def block_vectors(vec: SymVector, block) -> set:
    """Names of the symbolic vectors the factor on ``block`` depends on."""
    params = vec.parameters
    if not params:
        return set()
    pts = sample_points(params)
    base = _factor_at(vec, block, pts[5])
    out = set()
    for w in group_parameters(params):
        moved = dict(pts[5])
        moved.update({k: v for k, v in pts[6].items() if _vec_of(k) == w})
        if np.linalg.norm(_factor_at(vec, block, moved) - base) > 1e-7:
            out.add(w)
    return out


def block_factor(vec: SymVector, block):
    """Factor of ``vec`` on ``block`` (registers reordered as listed), normalized."""
    n = vec.n_qubits
    own = block_vectors(vec, block)
    if not own:
        pts = _points_for(vec)
        return SymVector.constant(_factor_at(vec, block, pts[0]))
    rest = [r for r in range(n) if r not in block]
    k = vec.coeffs.shape[1]
    t = np.transpose(vec.coeffs.reshape((2,) * n + (k,)), list(block) + rest + [n])
    t = t.reshape(2 ** len(block), 2 ** len(rest), k)
    j = int(np.argmax(np.linalg.norm(t, axis=(0, 2))))
    cols = {}
    for mono, c in zip(vec.monomials, t[:, j, :].T):
        if np.linalg.norm(c) <= TOL:
            continue
        mine = tuple(p for p in mono if _vec_of(p) in own)
        other = tuple(p for p in mono if _vec_of(p) not in own)
        cols.setdefault(other, {})[mine] = c
    other = max(cols, key=lambda o: sum(np.linalg.norm(c) for c in cols[o].values()))
    monos = sorted(cols[other])
    f = SymVector(np.stack([cols[other][m] for m in monos], axis=1), tuple(monos)).canonical()
    nrm = np.linalg.norm(f.instantiate(sample_points(f.parameters)[5]))
    return f.scale(1 / nrm) if nrm > TOL else f


def _block_props(f: SymVector, bnames, depth=1):
    """Propositions describing one product block, or None."""
    if not f.is_symbolic:
        return [A.EqQ(tuple(bnames), render_constant(f.concrete()))]
    out = render_symbolic(f, bnames)
    if out is not None:
        return [A.EqQ(out[0], out[1])]
    if depth == 0:
        return None
    # undo one gate and describe what it was applied to
    k = len(bnames)
    for g in ("CX", "CZ", "H"):
        arity = 2 if g in ("CX", "CZ") else 1
        for regs in permutations(range(k), arity):
            inner = apply_gate(GATES[g], list(regs), f)
            props = []
            for block in partition(inner, k):
                sub = _block_props(block_factor(inner, block), [bnames[r] for r in block], depth - 1)
                if sub is None:
                    break
                props.extend(sub)
            else:
                if len(props) > 1:
                    return [A.UnitaryOn(g, tuple(bnames[r] for r in regs), A.conj(props))]
    return None


def state_facts(vec: SymVector, names) -> list[str]:
    """One fact per product factor, as text."""
    n = vec.n_qubits
    if n == 0:
        return []
    facts = []
    for block in partition(vec, n):
        f = block_factor(vec, block)
        bnames = [names[r] for r in block]
        props = _block_props(f, bnames)
        if props is None:
            facts.append(_fallback(f, bnames))
        else:
            facts.extend(pretty_prop(p) for p in props)
    return facts


def frame_facts(vec: SymVector, names, footprint) -> list[str]:
    """Facts about product blocks that avoid every register in ``footprint``."""
    out = []
    for block in partition(vec, vec.n_qubits):
        bnames = [names[r] for r in block]
        if set(bnames) & set(footprint):
            continue
        props = _block_props(block_factor(vec, block), bnames)
        out.extend(_fallback(block_factor(vec, block), bnames) if props is None else [pretty_prop(p) for p in props])
    return out


def _rref_rows(basis: np.ndarray):
    m = basis.T.copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[piv, c]) <= 1e-9:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r:
                m[i] = m[i] - m[i, c] * m[r]
        r += 1
    m[np.abs(m) <= 1e-12] = 0
    return m[:r]


def subspace_fact(space, names) -> str:
    if space.rank == 0:
        return "⊥"
    if space.rank == space.dim:
        return "⊤"
    vecs = []
    for row in _rref_rows(space.basis):
        vecs.append(render_constant(row / np.linalg.norm(row)))
    return pretty_prop(A.InQ(tuple(names), A.SpanE(tuple(vecs))))


def render_snapshot(snap) -> str:
    names = snap.layout.names
    facts = []
    if snap.vector is not None:
        facts.extend(state_facts(snap.vector, names))
    elif snap.spaces:
        fact = subspace_fact(snap.spaces[0], names)
        if fact != "⊤":
            facts.append(fact)
    for q, reason in sorted(snap.consumed.items()):
        if reason in ("meas", "class"):
            facts.append(f"class({q})")
    return " ∧ ".join(facts) if facts else "⊤"


def render_amp(e) -> str:
    return pretty_amp(e)

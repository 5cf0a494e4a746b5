"""Brute-force reference computations, written without any qhtt code.

Everything here works on explicit dense matrices built entry by entry, so it
shares no kernels, layouts or tolerances with the package.
"""

import itertools

import numpy as np

S = 1 / np.sqrt(2)
MATS = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
    "H": np.array([[S, S], [S, -S]]),
}


def basis(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1
    return v


def full_matrix(n, action):
    """Matrix of the map sending basis state ``bits`` to ``action(bits)`` (a dict bits -> amp)."""
    m = np.zeros((2**n, 2**n), dtype=complex)
    for col, bits in enumerate(itertools.product((0, 1), repeat=n)):
        for out, amp in action(list(bits)).items():
            m[int("".join(map(str, out)), 2), col] += amp
    return m


def one_qubit(n, name, target):
    u = MATS[name]

    def act(bits):
        out = {}
        for b in (0, 1):
            new = list(bits)
            new[target] = b
            out[tuple(new)] = out.get(tuple(new), 0) + u[b, bits[target]]
        return out

    return full_matrix(n, act)


def cnot(n, control, target):
    def act(bits):
        new = list(bits)
        if bits[control]:
            new[target] ^= 1
        return {tuple(new): 1}

    return full_matrix(n, act)


def cz(n, a, b):
    return full_matrix(n, lambda bits: {tuple(bits): -1 if bits[a] and bits[b] else 1})


def swap(n, a, b):
    def act(bits):
        new = list(bits)
        new[a], new[b] = bits[b], bits[a]
        return {tuple(new): 1}

    return full_matrix(n, act)


def partial_trace(vec, n, keep):
    """Reduced density matrix on ``keep`` by summing over the other bits explicitly."""
    keep = list(keep)
    rest = [i for i in range(n) if i not in keep]
    k = len(keep)
    rho = np.zeros((2**k, 2**k), dtype=complex)
    for kb in itertools.product((0, 1), repeat=k):
        for kb2 in itertools.product((0, 1), repeat=k):
            total = 0
            for rb in itertools.product((0, 1), repeat=len(rest)):
                full1, full2 = [0] * n, [0] * n
                for i, b in zip(keep, kb):
                    full1[i] = b
                for i, b in zip(keep, kb2):
                    full2[i] = b
                for i, b in zip(rest, rb):
                    full1[i] = full2[i] = b
                total += vec[int("".join(map(str, full1)), 2)] * np.conj(vec[int("".join(map(str, full2)), 2)])
            rho[int("".join(map(str, kb)) or "0", 2), int("".join(map(str, kb2)) or "0", 2)] = total
    return rho


def null_space(m, tol=1e-10):
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def intersection_dim(a_cols, b_cols):
    """dim(span A ∩ span B) = number of independent solutions of A x = B y."""
    a = np.column_stack(a_cols)
    b = np.column_stack(b_cols)
    sol = null_space(np.hstack([a, -b]))
    if sol.size == 0:
        return 0, np.zeros((a.shape[0], 0))
    vecs = a @ sol[: a.shape[1]]
    return np.linalg.matrix_rank(vecs, tol=1e-9), vecs


def fixed_space_dim(m):
    vals = np.linalg.eigvals(m)
    return int(np.sum(np.abs(vals - 1) < 1e-9))


def deutsch_first_qubit(table):
    """State of the first qubit of Deutsch's circuit right before measurement."""
    n = 2
    state = np.kron(basis([0]), basis([1]))
    state = one_qubit(n, "H", 0) @ state
    state = one_qubit(n, "H", 1) @ state
    uf = full_matrix(n, lambda bits: {(bits[0], bits[1] ^ table[bits[0]]): 1})
    state = uf @ state
    state = one_qubit(n, "H", 0) @ state
    # the second qubit ends in |->; project it out
    minus = np.array([S, -S])
    return state.reshape(2, 2) @ minus.conj()


BIT_TABLES = {"const0": (0, 0), "const1": (1, 1), "id": (0, 1), "not": (1, 0)}

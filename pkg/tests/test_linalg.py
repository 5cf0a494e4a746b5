import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from qhtt.errors import CapacityError, DimError, TargetError
from qhtt.linalg import (
    BACKEND,
    GATES,
    Amp,
    Subspace,
    SymVector,
    apply_gate,
    apply_to_subspace,
    equal,
    includes,
    intersect,
    purity,
    reduced_density,
    schmidt_rank,
    span,
    sum_,
    tensor,
)
from qhtt.linalg import _pykernels
from qhtt.linalg.gates import check_unitary

S = 1 / np.sqrt(2)


def ket(bits):
    return SymVector.basis(bits)


def test_backend_is_known():
    assert BACKEND in ("cython", "python")


def test_gate_table_unitary():
    check_unitary()
    for name in "IXYZH":
        assert np.allclose(GATES[name].matrix, O.MATS[name])


# tensor


def test_tensor_basis():
    assert np.allclose(tensor(ket("0"), ket("1")).concrete(), [0, 1, 0, 0])


def test_tensor_scalar_one_is_identity():
    v = SymVector.constant([0.6, 0.8])
    assert tensor(v, SymVector.scalar_one()).equals(v)
    assert tensor(SymVector.scalar_one(), v).equals(v)


def test_tensor_bilinear_symbolic():
    psi = SymVector.symbolic("psi", 2)
    out = tensor(psi, ket("0"))
    # alpha|00> + beta|10>
    pt = {"psi[0]": 0.3, "psi[1]": 0.7j}
    assert np.allclose(out.instantiate(pt), [0.3, 0, 0.7j, 0])


def test_tensor_cap():
    big = SymVector.basis("0" * 7)
    with pytest.raises(CapacityError):
        tensor(big, big, cap=12)


# gates


def test_x_on_zero():
    assert np.allclose(apply_gate(GATES["X"], [0], ket("0")).concrete(), [0, 1])


def test_h_on_zero():
    # frozen from the oracle: H matrix times (1, 0)
    assert np.allclose(apply_gate(GATES["H"], [0], ket("0")).concrete(), [S, S])


def test_cx_makes_bell():
    v = SymVector.constant((O.basis([0, 0]) + O.basis([1, 0])) * S)
    out = apply_gate(GATES["CX"], [0, 1], v).concrete()
    assert np.allclose(out, [S, 0, 0, S])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_one_qubit_gates_match_oracle(n):
    rng = np.random.default_rng(n)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    for name in "XYZH":
        for t in range(n):
            got = apply_gate(GATES[name], [t], SymVector.constant(v)).concrete()
            assert np.allclose(got, O.one_qubit(n, name, t) @ v)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_two_qubit_gates_match_oracle(n):
    rng = np.random.default_rng(10 + n)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            got = apply_gate(GATES["CX"], [a, b], SymVector.constant(v)).concrete()
            assert np.allclose(got, O.cnot(n, a, b) @ v)
            got = apply_gate(GATES["CZ"], [a, b], SymVector.constant(v)).concrete()
            assert np.allclose(got, O.cz(n, a, b) @ v)


def test_controlled_application():
    v = SymVector.constant(O.basis([1, 0]))
    got = apply_gate(GATES["X"], [1], v, controls=[(0, 1)]).concrete()
    assert np.allclose(got, O.basis([1, 1]))
    got = apply_gate(GATES["X"], [1], v, controls=[(0, 0)]).concrete()
    assert np.allclose(got, O.basis([1, 0]))


def test_gate_on_symbolic_is_linear():
    psi = SymVector.symbolic("psi", 2)
    out = apply_gate(GATES["H"], [0], psi)
    pt = {"psi[0]": 0.6, "psi[1]": 0.8}
    assert np.allclose(out.instantiate(pt), O.MATS["H"] @ [0.6, 0.8])


def test_gate_target_errors():
    with pytest.raises(TargetError):
        apply_gate(GATES["X"], [3], ket("00"))
    with pytest.raises((TargetError, DimError)):
        apply_gate(GATES["CX"], [0, 0], ket("00"))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 2**31))
def test_kernels_agree(n, k, seed):
    rng = np.random.default_rng(seed)
    v = np.ascontiguousarray(rng.normal(size=(2**n, k)) + 1j * rng.normal(size=(2**n, k)))
    w = v.copy()
    from qhtt.linalg import kernels

    bit = int(rng.integers(n))
    kernels.apply_1q(v, O.MATS["H"].astype(complex), bit)
    _pykernels.apply_1q(w, O.MATS["H"].astype(complex), bit)
    assert np.allclose(v, w)
    if n >= 2:
        hi, lo = rng.choice(n, 2, replace=False)
        cx = O.cnot(2, 0, 1)
        kernels.apply_2q(v, cx, int(hi), int(lo))
        _pykernels.apply_2q(w, cx, int(hi), int(lo))
        assert np.allclose(v, w)


# amplitudes


def test_amp_arithmetic():
    a = Amp.param("psi[0]") * Amp.const(2) + Amp.const(1)
    assert a.evaluate({"psi[0]": 0.5}) == pytest.approx(2)
    assert (a - a).is_constant


# reduced density


def test_bell_marginal_is_maximally_mixed():
    bell = SymVector.constant([S, 0, 0, S])
    rho = reduced_density(bell, [0])
    frozen = np.array([[0.5, 0], [0, 0.5]])  # oracle: brute-force partial trace
    assert np.allclose(rho, frozen)
    assert np.allclose(O.partial_trace(bell.concrete(), 2, [0]), frozen)
    assert purity(rho) == pytest.approx(0.5)


def test_product_marginal():
    v = SymVector.constant(np.kron([S, S], [0, 1]))
    assert np.allclose(reduced_density(v, [0]), [[0.5, 0.5], [0.5, 0.5]])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**31))
def test_reduced_density_matches_oracle(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    v /= np.linalg.norm(v)
    keep = sorted(rng.choice(n, int(rng.integers(1, n)), replace=False).tolist())
    assert np.allclose(reduced_density(SymVector.constant(v), keep), O.partial_trace(v, n, keep))


def test_schmidt_rank():
    assert schmidt_rank(np.array([S, 0, 0, S]), [0]) == 2
    assert schmidt_rank(np.kron([S, S], [1, 0]), [0]) == 1


# subspaces


def test_intersect_example():
    p = span([ket("00"), ket("11")])
    q = span([ket("00"), ket("01")])
    r = intersect(p, q)
    # oracle: solve A x = B y by brute force, dimension 1 spanned by |00>
    assert r.rank == 1
    assert equal(r, span([ket("00")]))


def test_lattice_identities():
    p = span([ket("00"), SymVector.constant([0, S, S, 0])])
    assert equal(sum_(p, Subspace.bottom(4)), p)
    assert equal(intersect(p, Subspace.top(4)), p)


def test_bell_in_parity_span():
    # includes(P, Q) reads "P is contained in Q"
    assert includes(span([SymVector.constant([S, 0, 0, S])]), span([ket("00"), ket("11")]))
    assert not includes(span([ket("00")]), span([ket("11")]))


def test_span_dim_errors():
    with pytest.raises(DimError):
        span([ket("0"), ket("00")])
    with pytest.raises(DimError):
        span([])


def test_apply_to_subspace():
    p = span([ket("00"), ket("11")])
    out = apply_to_subspace(GATES["CX"], [0, 1], p)
    assert equal(out, span([ket("00"), ket("10")]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_intersection_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.choice([2, 4, 8]))
    a = [rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(int(rng.integers(1, dim + 1)))]
    b = [rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(int(rng.integers(1, dim + 1)))]
    # force a shared direction some of the time
    if rng.random() < 0.5:
        b.append(a[0] + 2 * a[-1])
    want, _ = O.intersection_dim(a, b)
    assert intersect(span(a), span(b)).rank == want


def test_pure_python_fallback_checks_bell():
    import os
    import subprocess
    import sys

    from conftest import corpus_path

    env = dict(os.environ, QHTT_PURE_PYTHON="1")
    code = (
        "import sys; from qhtt.linalg import BACKEND; from qhtt.cli import main; "
        "assert BACKEND == 'python'; sys.exit(main(['check', sys.argv[1]]))"
    )
    out = subprocess.run([sys.executable, "-c", code, str(corpus_path("bell00.qh"))], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr

import itertools
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_complex, random_map, random_module
from quiltkit import graded as gr
from quiltkit.errors import FactorMismatch, ModulusMismatch, NonzeroDegree, NotAComplex, NotEndomorphism, RingMismatch


def _bubble_sign(degrees, perm):
    """Koszul sign by adjacent transpositions, sorting ``perm`` back to the identity."""
    seq = list(perm)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] > seq[i + 1]:
                if degrees[seq[i]] % 2 and degrees[seq[i + 1]] % 2:
                    sign = -sign
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                changed = True
    return sign


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=6).flatmap(lambda d: st.tuples(st.just(d), st.permutations(range(len(d))))))
def test_koszul_sign_matches_transpositions(data):
    degrees, perm = data
    assert gr.koszul_sign(degrees, perm) == _bubble_sign(degrees, perm)


# ---------------------------------------------------------------- modules and maps


def test_module_basics():
    A = gr.GradedModule.of([0, 1, 5], 4)
    assert A.degrees == (0, 1, 1)
    unit = gr.GradedModule.unit(4)
    assert gr.tensor(A, unit) == A and gr.tensor(unit, A) == A
    with pytest.raises(ValueError):
        gr.GradedModule.of([0], 3)
    with pytest.raises(ValueError):
        gr.GradedModule(4, gr.Z, (("x", 0), ("x", 1)))
    with pytest.raises(ModulusMismatch):
        gr.tensor(A, gr.GradedModule.of([0], 2))
    with pytest.raises(RingMismatch):
        gr.tensor(A, gr.GradedModule.of([0], 4, gr.Z2))


def test_tensor_is_associative_on_modules():
    A, B, C = (gr.GradedModule.of(d, 4, prefix=p) for d, p in (([0, 1], "a"), ([3], "b"), ([1, 2], "c")))
    assert gr.tensor(gr.tensor(A, B), C) == gr.tensor(A, gr.tensor(B, C))
    assert list(gr.tensor(A, B, C).factor_list()) == [A, B, C]


def test_homogeneity_is_enforced():
    A = gr.GradedModule.of([0, 1], 2)
    with pytest.raises(ValueError):
        gr.GradedMap(A, A, 0, np.array([[0, 1], [0, 0]], dtype=object))
    f = gr.GradedMap(A, A, 1, np.array([[0, 1], [3, 0]], dtype=object))
    assert f.degree == 1


def test_z2_reduces_entries():
    A = gr.GradedModule.of([0], 2, gr.Z2)
    f = gr.GradedMap(A, A, 0, np.array([[3]], dtype=object))
    assert f.matrix[0, 0] == 1
    assert (f @ f).matrix[0, 0] == 1


def test_composition_checks_modules():
    A, B = gr.GradedModule.of([0], 2), gr.GradedModule.of([0, 0], 2)
    with pytest.raises(FactorMismatch):
        gr.identity(A) @ gr.identity(B)


# ---------------------------------------------------------------- Koszul coherence


def test_permutation_homomorphism():
    rng = random.Random(1)
    for _ in range(60):
        N = rng.choice((2, 4))
        mods = [random_module(rng, N, 2, prefix=f"m{i}") for i in range(rng.randint(1, 4))]
        k = len(mods)
        rho = rng.sample(range(k), k)
        pi = rng.sample(range(k), k)
        first = gr.koszul_permutation(mods, rho)
        second = gr.koszul_permutation([mods[r] for r in rho], pi)
        combined = gr.koszul_permutation(mods, [rho[p] for p in pi])
        assert second @ first == combined


def test_interchange_law():
    rng = random.Random(2)
    for _ in range(60):
        N = rng.choice((2, 4, 6))
        A, B, C, D, E, F = (random_module(rng, N, 3, prefix=p) for p in "abcdef")
        k1, k2, k3, k4 = (rng.randrange(N) for _ in range(4))
        g1, g2 = random_map(rng, A, B, k1), random_map(rng, C, D, k2)
        f1, f2 = random_map(rng, B, E, k3), random_map(rng, D, F, k4)
        lhs = gr.tensor_map(f1, f2) @ gr.tensor_map(g1, g2)
        rhs = gr.tensor_map(f1 @ g1, f2 @ g2).scale((-1) ** ((k4 * k1) % 2))
        assert lhs == rhs


def test_swap_is_natural():
    rng = random.Random(3)
    for _ in range(40):
        N = rng.choice((2, 4))
        A, B, C, D = (random_module(rng, N, 3, prefix=p) for p in "abcd")
        f, g = random_map(rng, A, C, rng.randrange(N)), random_map(rng, B, D, rng.randrange(N))
        lhs = gr.koszul_permutation([C, D], [1, 0]) @ gr.tensor_map(f, g)
        rhs = gr.tensor_map(g, f) @ gr.koszul_permutation([A, B], [1, 0])
        assert lhs == rhs.scale((-1) ** ((f.degree * g.degree) % 2))


# ---------------------------------------------------------------- traces and duality


def test_cap_cup_degrees_and_annulus():
    rng = random.Random(4)
    for _ in range(50):
        N = rng.choice((2, 4, 6, 8))
        A = random_module(rng, N, 8)
        n = rng.randrange(4)
        d = gr.DualityDatum(A, n)
        assert gr.cap_map(d).degree == (-n) % N
        assert gr.cup_map(d).degree == n % N
        chi = gr.euler_characteristic(A)
        assert (gr.cap_map(d) @ gr.cup_map(d)).scalar() == chi == gr.graded_trace(gr.identity(A))


def test_reversed_pair_signs():
    A = gr.GradedModule.of([0, 1], 2)
    assert gr.DualityDatum.reversed_pair(A, 1).eps == (1, 1)
    assert gr.DualityDatum.reversed_pair(A, 2).eps == (1, -1)


def test_duality_rejects_bad_partner():
    A = gr.GradedModule.of([0, 1], 4)
    with pytest.raises(ValueError):
        gr.DualityDatum(A, 1, dual=A)
    with pytest.raises(ValueError):
        gr.DualityDatum(A, 1, eps=(1,))


def test_trace_cyclicity_and_eps_independence():
    rng = random.Random(5)
    for _ in range(80):
        N = rng.choice((2, 4, 6))
        A, B, C = (random_module(rng, N, 3, prefix=p) for p in "abc")
        k = rng.randrange(N)
        g, h = random_map(rng, A, B, k), random_map(rng, B, A, -k)
        assert gr.graded_trace(g @ h) == (-1) ** (k % 2) * gr.graded_trace(h @ g)
        n = rng.randrange(3)
        f = random_map(rng, gr.tensor(A, C), gr.tensor(B, A), rng.randrange(N))
        d = gr.DualityDatum(A, n)
        mask = [rng.random() < 0.5 for _ in range(A.rank)]
        assert gr.algebraic_trace(f, 0, 1, d) == gr.algebraic_trace(f, 0, 1, d.flipped(mask))


def test_full_trace_is_graded_trace():
    rng = random.Random(6)
    for _ in range(40):
        A = random_module(rng, 4, 5)
        f = random_map(rng, A, A, 0)
        t = gr.algebraic_trace(f, 0, 0, gr.DualityDatum(A, rng.randrange(3)))
        assert t.scalar() == gr.graded_trace(f)


def test_partial_trace_of_product():
    # tr_A(g ⊗ h) = (-1)^{n |h|} Tr(g) h, the sign from moving h past the pairing
    rng = random.Random(7)
    for _ in range(60):
        N = rng.choice((2, 4, 6))
        A, B, C = (random_module(rng, N, 3, prefix=p) for p in "abc")
        k, n = rng.randrange(N), rng.randrange(3)
        g, h = random_map(rng, A, A, 0), random_map(rng, B, C, k)
        d = gr.DualityDatum(A, n)
        expected = h.scale(gr.graded_trace(g) * (-1) ** ((n * k) % 2))
        assert gr.algebraic_trace(gr.tensor_map(g, h), 0, 0, d) == expected
        assert gr.algebraic_trace(gr.tensor_map(h, g), 1, 1, d) == expected


def test_trace_errors():
    A = gr.GradedModule.of([0, 1], 2)
    B = gr.GradedModule.of([0], 2, prefix="b")
    with pytest.raises(NotEndomorphism):
        gr.graded_trace(gr.zero_map(A, B))
    with pytest.raises(NonzeroDegree):
        gr.graded_trace(gr.GradedMap(A, A, 1, np.zeros((2, 2), dtype=object)))
    with pytest.raises(FactorMismatch):
        gr.algebraic_trace(gr.identity(A), 0, 0, gr.DualityDatum(B, 1))
    with pytest.raises(FactorMismatch):
        gr.algebraic_trace(gr.identity(A), 1, 0, gr.DualityDatum(A, 1))


# ---------------------------------------------------------------- Smith normal form and cohomology


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m))))
def test_snf_matches_sympy(rows):
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert gr.smith_normal_form(rows) == diag


def _rank_mod2_brute(rows):
    m = len(rows)
    n = len(rows[0]) if m else 0
    images = set()
    for coeffs in itertools.product((0, 1), repeat=m):
        images.add(tuple(sum(c * rows[i][j] for i, c in enumerate(coeffs)) % 2 for j in range(n)))
    return len(images).bit_length() - 1


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=m, max_size=m))))
def test_rank_mod2_brute_force(rows):
    assert gr.rank_mod2(rows) == _rank_mod2_brute(rows)


def test_two_torsion_fixture():
    M = gr.GradedModule.of([0, 1], 2)
    c = gr.ChainComplex(M, gr.GradedMap(M, M, 1, np.array([[0, 0], [2, 0]], dtype=object)))
    assert gr.cohomology(c) == {0: (0, []), 1: (0, [2])}
    M2 = gr.GradedModule.of([0, 1], 2, gr.Z2)
    c2 = gr.ChainComplex(M2, gr.GradedMap(M2, M2, 1, np.array([[0, 0], [2, 0]], dtype=object)))
    assert gr.cohomology(c2) == {0: (1, []), 1: (1, [])}


def test_complex_validation():
    M = gr.GradedModule.of([0, 1], 2)
    with pytest.raises(NotAComplex):
        gr.ChainComplex(M, gr.identity(M))
    M3 = gr.GradedModule.of([0, 1, 0], 2)
    d = np.array([[0, 0, 0], [1, 0, 1], [0, 0, 0]], dtype=object)
    gr.ChainComplex(M3, gr.GradedMap(M3, M3, 1, d))
    bad = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=object)
    with pytest.raises(NotAComplex):
        gr.ChainComplex(M, gr.GradedMap(M, M, 1, bad[:2, :2]))


@pytest.mark.parametrize("ring", [gr.Z, gr.Z2])
def test_cohomology_of_disguised_complexes(ring):
    rng = random.Random(8)
    for _ in range(40):
        N = rng.choice((2, 4, 6))
        c, expected = random_complex(rng, N, ring)
        assert gr.cohomology(c) == expected


def test_euler_characteristic_of_cohomology():
    rng = random.Random(9)
    for _ in range(30):
        c, _ = random_complex(rng, 4)
        h = gr.cohomology(c)
        assert sum((-1) ** k * free for k, (free, _) in h.items()) == gr.euler_characteristic(c.module)


def test_chain_maps():
    rng = random.Random(10)
    c, _ = random_complex(rng, 4)
    assert gr.is_chain_map(gr.identity(c.module), c, c)
    assert gr.is_chain_map(c.differential, c, c)

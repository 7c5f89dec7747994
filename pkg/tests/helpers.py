"""Random generators shared by the test modules."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from quiltkit import graded as gr
from quiltkit import linalg as la
from quiltkit import quilt as qc
from quiltkit import symplectic as sp
from quiltkit.quilt import IN, OUT, Circle, Label, MarkedPoint, Patch, PatchLabel, QuiltedSurface, Seam

SLOPES = (0, 1, -1, 2, -2, None)  # None is the vertical line

# filled by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES: list = []


# ---------------------------------------------------------------- symplectic


def transvection(V: sp.SymplecticSpace, v, c: Fraction) -> tuple:
    """``x -> x + c w(v, x) v``; symplectic for any ``v`` and ``c``."""
    n = V.dim
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        w = V.omega(v, e)
        cols.append(tuple(ei + c * w * vi for ei, vi in zip(e, v)))
    return la.from_columns(cols, n)


def random_symplectic(rng: random.Random, V: sp.SymplecticSpace, steps: int = 3) -> tuple:
    M = la.identity(V.dim)
    for _ in range(steps):
        v = [Fraction(rng.randint(-2, 2)) for _ in range(V.dim)]
        c = Fraction(rng.choice([-2, -1, 1, 2]), rng.choice([1, 2, 3]))
        M = la.matmul(transvection(V, v, c), M)
    return M


def random_lagrangian(rng: random.Random, V: sp.SymplecticSpace) -> sp.LagrangianSubspace:
    # span of e_1, e_3, ... is Lagrangian for the standard form
    base = la.from_columns([[Fraction(int(i == 2 * k)) for i in range(V.dim)] for k in range(V.half_dim)], V.dim)
    return sp.LagrangianSubspace(V, la.matmul(random_symplectic(rng, V), base))


def random_correspondence(rng: random.Random, V0: sp.SymplecticSpace, V1: sp.SymplecticSpace) -> sp.LagrangianCorrespondence:
    amb = sp.product_space(sp.dual_space(V0), V1)
    # a Lagrangian for the twisted form: graph of a random symplectic map when dims agree,
    # otherwise a product of Lagrangians
    if V0.dim == V1.dim:
        return sp.graph(random_symplectic(rng, V0), V0) if rng.random() < 0.7 else _product_corr(rng, V0, V1, amb)
    return _product_corr(rng, V0, V1, amb)


def _product_corr(rng, V0, V1, amb):
    L0 = random_lagrangian(rng, V0) if V0.dim else None
    L1 = random_lagrangian(rng, V1) if V1.dim else None
    b0 = L0.basis if L0 else ()
    b1 = L1.basis if L1 else ()
    basis = la.block_diag(b0, b1, acols=V0.half_dim, bcols=V1.half_dim)
    return sp.LagrangianCorrespondence(V0, V1, sp.LagrangianSubspace(amb, basis))


def slope_line(s) -> sp.LagrangianSubspace:
    return sp.line(0, 1) if s is None else sp.line(1, s)


def slope_angle(s) -> float:
    return math.pi / 2 if s is None else math.atan(s)


def winding_oracle(slopes) -> int | None:
    """Net rotation of a loop of lines through shortest turns, in half turns.

    ``None`` when two consecutive lines are perpendicular (no shortest turn).
    """
    total = 0.0
    k = len(slopes)
    for i in range(k):
        a, b = slope_angle(slopes[i]), slope_angle(slopes[(i + 1) % k])
        d = (b - a + math.pi / 2) % math.pi - math.pi / 2
        if abs(abs(d) - math.pi / 2) < 1e-9:
            return None
        total += d
    w = total / math.pi
    assert abs(w - round(w)) < 1e-9
    return round(w)


# ---------------------------------------------------------------- graded algebra


def random_module(rng: random.Random, N: int, max_rank: int = 4, ring: str = gr.Z, prefix: str = "x", min_rank: int = 1):
    return gr.GradedModule.of([rng.randrange(N) for _ in range(rng.randint(min_rank, max_rank))], N, ring, prefix)


def random_map(rng: random.Random, src, tgt, degree: int, lo: int = -3, hi: int = 3) -> gr.GradedMap:
    N = src.modulus
    m = np.zeros((tgt.rank, src.rank), dtype=object)
    for i, dy in enumerate(tgt.degrees):
        for j, dx in enumerate(src.degrees):
            if (dx + degree - dy) % N == 0:
                m[i, j] = rng.randint(lo, hi)
    return gr.GradedMap(src, tgt, degree, m)


def random_complex(rng: random.Random, N: int, ring: str = gr.Z, pieces: int = 4):
    """A complex with known cohomology, disguised by a degree-preserving unimodular change of basis.

    Returns the complex and the expected ``{k: (free, torsion)}``.
    """
    degs, pairs = [], []
    expected = {k: [0, []] for k in range(N)}
    for _ in range(rng.randint(1, pieces)):
        k = rng.randrange(N)
        if rng.random() < 0.4:
            degs.append(k)
            expected[k][0] += 1
            continue
        c = rng.choice([0, 1, 2, 3, 4, 6]) if ring == gr.Z else rng.choice([0, 1])
        i = len(degs)
        degs += [k, (k + 1) % N]
        pairs.append((i, i + 1, c))
        if c == 0:
            expected[k][0] += 1
            expected[(k + 1) % N][0] += 1
        elif c > 1:
            expected[(k + 1) % N][1].append(c)
    r = len(degs)
    D = np.zeros((r, r), dtype=object)
    for i, j, c in pairs:
        D[j, i] = c
    # unimodular change of basis inside each degree
    G = np.identity(r, dtype=int).astype(object)
    for _ in range(2 * r):
        a, b = rng.randrange(r), rng.randrange(r)
        if a != b and degs[a] == degs[b]:
            E = np.identity(r, dtype=int).astype(object)
            E[a, b] = rng.choice([-2, -1, 1, 2])
            G = E.dot(G)
    Ginv = _int_inverse(G)
    M = gr.GradedModule.of(degs, N, ring)
    d = gr.GradedMap(M, M, 1, G.dot(D).dot(Ginv))
    exp = {k: (v[0], sorted(v[1])) for k, v in expected.items()}
    if ring == gr.Z2:
        exp = {k: (v[0], []) for k, v in exp.items()}
    return gr.ChainComplex(M, d), exp


def _int_inverse(G: np.ndarray) -> np.ndarray:
    inv = la.inverse(tuple(tuple(Fraction(int(x)) for x in row) for row in G.tolist()))
    out = np.array([[int(x) for x in row] for row in inv], dtype=object)
    assert all(x.denominator == 1 for row in inv for x in row)
    return out


# ---------------------------------------------------------------- quilts

_DIMS = {"M": 2, "N": 4}


def _random_patch(rng: random.Random, pid: str, n_marks: int, strip: bool = False) -> Patch:
    space = rng.choice(sorted(_DIMS))
    label = PatchLabel(space, _DIMS[space])
    if strip:
        dirs = [rng.choice([IN, OUT]), rng.choice([IN, OUT])]
        return Patch(pid, label, (Circle("c", (MarkedPoint("m0", dirs[0]), MarkedPoint("m1", dirs[1]))),))
    genus = rng.choice([0, 0, 0, 1])
    n_circles = rng.choice([1, 1, 1, 2])
    circles = [[] for _ in range(n_circles)]
    for k in range(n_marks):
        circles[rng.randrange(n_circles)].append(MarkedPoint(f"m{k}", rng.choice([IN, OUT])))
    interior = tuple(rng.choice([IN, OUT]) for _ in range(rng.choice([0, 0, 0, 1])))
    return Patch(pid, label, tuple(Circle(f"c{i}", tuple(ms)) for i, ms in enumerate(circles)), genus, interior)


def _compatible(topo, s1, s2) -> bool:
    if (s1[2] is None) != (s2[2] is None):
        return False
    if s1[2] is None:
        return True
    p, q = (s1[0], s1[2]), topo.interval_end(s1)
    p2, q2 = (s2[0], s2[2]), topo.interval_end(s2)
    return topo.mp[p].dir == topo.mp[q2].dir and topo.mp[q].dir == topo.mp[p2].dir


def random_quilt(rng: random.Random, max_patches: int = 5, max_marks: int = 8, modulus: int = 8, with_strip: bool = False, tries: int = 200):
    """A random valid quilt; boundaries are labeled ``L``, seams ``S``."""
    for _ in range(tries):
        k = rng.randint(1, max_patches)
        budget = rng.randint(k if with_strip else 0, max_marks)
        patches = []
        for i in range(k):
            if with_strip and i == 0:
                patches.append(_random_patch(rng, "P0", 2, strip=True))
                budget -= 2
                continue
            m = rng.randint(0, max(0, budget)) if i < k - 1 else max(0, budget)
            m = min(m, 4)
            budget -= m
            patches.append(_random_patch(rng, f"P{i}", m))
        q0 = QuiltedSurface(tuple(patches), modulus=modulus)
        topo = qc._Topology(q0)
        sides = list(topo.sides)
        rng.shuffle(sides)
        seams, used = [], set()
        for s1 in sides:
            if s1 in used or rng.random() < 0.4:
                continue
            for s2 in sides:
                if s2 in used or s2 == s1 or s2[0] == s1[0]:
                    continue
                if _compatible(topo, s1, s2):
                    d1, d2 = topo.patches[s1[0]].label.dim, topo.patches[s2[0]].label.dim
                    seams.append(Seam(s1, s2, Label("S", (d1, d2))))
                    used.update((s1, s2))
                    break
        boundary = tuple((s, Label("L", (topo.patches[s[0]].label.dim,))) for s in topo.sides if s not in used)
        q1 = QuiltedSurface(tuple(patches), tuple(seams), boundary, modulus=modulus)
        t1 = qc._Topology(q1)
        try:
            raw = t1.raw_ends()
        except (KeyError, RecursionError):
            continue
        reps = [(chain[0], t1.mp[chain[0]].dir) for chain, _ in raw]
        rng.shuffle(reps)
        q = QuiltedSurface(
            q1.patches,
            q1.seams,
            q1.boundary,
            tuple(r for r, d in reps if d == IN),
            tuple(r for r, d in reps if d == OUT),
            modulus,
        )
        if not qc.validate(q):
            return q
    raise RuntimeError("could not generate a valid quilt")

"""Packaged fixture suites run by ``quiltkit demo``."""

from __future__ import annotations

import random

import numpy as np

from . import engine as en
from . import fixtures as fx
from . import graded as gr
from . import quilt as qc

DEMOS = ("closed_surfaces", "trace_laws", "shrink", "section6")


def random_module(rng: random.Random, modulus: int, max_rank: int = 8, ring: str = gr.Z, prefix: str = "x") -> gr.GradedModule:
    return gr.GradedModule.of([rng.randrange(modulus) for _ in range(rng.randint(1, max_rank))], modulus, ring, prefix)


def random_map(rng: random.Random, src: gr.GradedModule, tgt: gr.GradedModule, degree: int, lo: int = -3, hi: int = 3) -> gr.GradedMap:
    """A random homogeneous map of the given degree."""
    N = src.modulus
    m = np.zeros((tgt.rank, src.rank), dtype=object)
    for i, dy in enumerate(tgt.degrees):
        for j, dx in enumerate(src.degrees):
            if (dx + degree - dy) % N == 0:
                m[i, j] = rng.randint(lo, hi)
    return gr.GradedMap(src, tgt, degree, m)


def _strip_assignment(A: gr.GradedModule, labels=("L0", "L1")) -> en.GeneratorAssignment:
    a = en.GeneratorAssignment(A.modulus, A.ring)
    a.register_module((False, tuple(labels)), A)
    return a


def annulus_values(A: gr.GradedModule, n: int = 1) -> dict:
    """The annulus invariant three ways: self-glued strip, cap after cup, cup/cap quilt."""
    N = A.modulus
    a = _strip_assignment(A)
    self_glued = en.evaluate(en.Glue(en.Leaf(fx.strip(n, modulus=N)), 0, 0), a)
    d = a.duality((False, ("L0", "L1")), n)
    direct = (gr.cap_map(d) @ gr.cup_map(d)).scalar()
    expr = en.Glue(en.Glue(en.Union(en.Leaf(fx.cap(n, modulus=N)), en.Leaf(fx.cup(n, modulus=N))), 0, 0), 0, 0)
    via_quilt = en.evaluate(expr, a)
    return {
        "euler": gr.euler_characteristic(A),
        "self_glued": self_glued.map.scalar(),
        "self_glued_exact": self_glued.sign_exact,
        "cap_cup": direct,
        "cup_cap_quilt": via_quilt.map.scalar(),
        "cup_cap_quilt_exact": via_quilt.sign_exact,
    }


def closed_surfaces(seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    checks = []
    a = en.GeneratorAssignment(4)
    disk_value = en.evaluate(en.Leaf(fx.plain_disk(1, modulus=4)), a).map
    checks.append({"check": "disk invariant is zero", "pass": disk_value.is_zero(), "detail": f"degree {disk_value.degree}"})
    for N in (2, 4, 6, 8):
        A = random_module(rng, N)
        v = annulus_values(A)
        ok = v["self_glued"] == v["euler"] == v["cap_cup"] and abs(v["cup_cap_quilt"]) == abs(v["euler"])
        checks.append({"check": f"annulus equals Euler characteristic (N={N})", "pass": ok, "detail": str(v)})
    for g in range(1, 5):
        A = random_module(rng, 4, 5)
        phi = random_map(rng, A, A, 0)
        got = en.sphere_with_holes(g, phi)
        want = gr.graded_trace(gr.power(phi, g - 1))
        brute = sum((-1) ** (d % 2) * int(np.linalg.matrix_power(phi.matrix.astype(object), g - 1)[i, i]) if g > 1 else (-1) ** (d % 2) for i, d in enumerate(A.degrees))
        checks.append({"check": f"sphere with {g + 1} holes", "pass": got == want == brute, "detail": f"{got}"})
    return checks


def trace_laws(seed: int = 0, trials: int = 50) -> list[dict]:
    rng = random.Random(seed)
    eps_ok = cyc_ok = ann_ok = True
    for _ in range(trials):
        N = rng.choice((2, 4, 6, 8))
        A, B, C = (random_module(rng, N, 4, prefix=p) for p in "abc")
        n = rng.randrange(3)
        f = random_map(rng, gr.tensor(A, B), gr.tensor(C, A), rng.randrange(N))
        d = gr.DualityDatum(A, n)
        mask = [rng.random() < 0.5 for _ in range(A.rank)]
        eps_ok &= gr.algebraic_trace(f, 0, 1, d) == gr.algebraic_trace(f, 0, 1, d.flipped(mask))
        k = rng.randrange(N)
        g = random_map(rng, A, B, k)
        h = random_map(rng, B, A, -k)
        cyc_ok &= gr.graded_trace(g @ h) == (-1) ** (k % 2) * gr.graded_trace(h @ g)
        ann_ok &= gr.graded_trace(gr.identity(A)) == (gr.cap_map(d) @ gr.cup_map(d)).scalar()
    return [
        {"check": "trace independent of eps", "pass": bool(eps_ok), "detail": f"{trials} trials"},
        {"check": "trace cyclic with Koszul sign", "pass": bool(cyc_ok), "detail": f"{trials} trials"},
        {"check": "Tr(id) equals cap after cup", "pass": bool(ann_ok), "detail": f"{trials} trials"},
    ]


def shrink_checks() -> list[dict]:
    cases = [
        ("three strips", fx.three_strips((1, 2, 1), modulus=8), "S1", {}),
        ("seamed cups", fx.seamed_cups((1, 2), modulus=8), "S", {}),
        ("duality disk", fx.duality_disk(2, modulus=8), "S", {"allow_both_boundary": True}),
        ("cylinder pair", fx.cylinder_pair((1, 3, 2), modulus=8), "B", {}),
    ]
    checks = []
    for name, q, pid, kw in cases:
        q2, rec = qc.shrink_strip(q, pid, **kw)
        before, after = qc.degree_shift(q), qc.degree_shift(q2)
        ok = (before - after) % q.modulus == (rec.n * rec.d) % q.modulus
        checks.append({"check": f"shrink {name}", "pass": ok, "detail": f"{before} -> {after}, record n={rec.n} d={rec.d}"})
    return checks


def run(name: str) -> list[dict]:
    if name == "closed_surfaces":
        return closed_surfaces()
    if name == "trace_laws":
        return trace_laws()
    if name == "shrink":
        return shrink_checks()
    if name == "section6":
        return en.section6_suite()
    raise KeyError(f"unknown demo {name!r}")

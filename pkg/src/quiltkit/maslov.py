"""Maslov-type indices computed exactly.

The loop index sums Kashiwara triple indices.  A sampled loop is read as the
closed path that joins each sample ``L_i`` to ``L_{i+1}`` inside the
(contractible) set of Lagrangians transverse to ``J L_i``, where ``J`` is the
complex structure of a rational Darboux frame.  For that path the index
relative to a reference ``R`` is ``(tau(L_i, L_{i+1}, J L_i) - tau(R, L_i,
L_{i+1})) / 2``; summed around the loop it is an integer independent of
``R``.

Sign convention: the counterclockwise half turn of lines in the standard
plane (slopes 0, 1, inf, -1) has index +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .errors import DegenerateStep, NonIntegralIndex, SpaceMismatch
from .symplectic import LagrangianSubspace, SymplecticSpace


@dataclass(frozen=True)
class LagrangianLoop:
    space: SymplecticSpace
    samples: tuple

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise ValueError("a loop needs at least one sample")
        if any(s.space != self.space for s in samples):
            raise SpaceMismatch("all samples must live in the loop's space")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def of(cls, samples: Sequence[LagrangianSubspace]) -> "LagrangianLoop":
        samples = tuple(samples)
        return cls(samples[0].space, samples)

    def reversed(self) -> "LagrangianLoop":
        return LagrangianLoop(self.space, (self.samples[0],) + tuple(reversed(self.samples[1:])))

    def splice(self, other: "LagrangianLoop") -> "LagrangianLoop":
        """Concatenate two loops based at the same first sample."""
        if self.samples[0] != other.samples[0]:
            raise ValueError("loops must share their first sample")
        return LagrangianLoop(self.space, self.samples + other.samples)


@dataclass(frozen=True)
class BoundaryDatum:
    loop: LagrangianLoop
    oriented: bool = False


@dataclass(frozen=True)
class SurfaceIndexData:
    rank: int
    euler: int
    deg_closed: int = 0
    boundary_indices: tuple = field(default_factory=tuple)
    seam_indices: tuple = field(default_factory=tuple)


@lru_cache(maxsize=1 << 16)
def kashiwara_index(L1: LagrangianSubspace, L2: LagrangianSubspace, L3: LagrangianSubspace) -> int:
    """Signature of ``w(x1,x2) + w(x2,x3) + w(x3,x1)`` on ``L1 + L2 + L3``."""
    V = L1.space
    if L2.space != V or L3.space != V:
        raise SpaceMismatch("Kashiwara index needs three subspaces of one space")
    if V.dim == 0:
        return 0
    n = V.half_dim
    bases = [L.basis for L in (L1, L2, L3)]
    # Gram blocks G_ab = B_a^T W B_b; the form's matrix has symmetric blocks
    # (G_12 + G_21^T)/2 etc., i.e. 1/2 * G_ab placed at (a, b) and its transpose at (b, a).
    gram = {}
    for a in range(3):
        for b in range(3):
            gram[a, b] = la.matmul(la.matmul(la.transpose(bases[a], V.dim), V.form), bases[b])
    q = [[Fraction(0)] * (3 * n) for _ in range(3 * n)]
    for a, b in ((0, 1), (1, 2), (2, 0)):
        g = gram[a, b]
        for i in range(n):
            for j in range(n):
                half = g[i][j] / 2
                q[a * n + i][b * n + j] += half
                q[b * n + j][a * n + i] += half
    pos, negc = la.signature(tuple(tuple(r) for r in q))
    return pos - negc


@lru_cache(maxsize=None)
def complex_structure(V: SymplecticSpace) -> tuple:
    """A rational complex structure compatible with a Darboux frame of ``V``.

    Symplectic Gram-Schmidt yields ``e_1, f_1, ...`` with ``w(e_i, f_i) = 1``;
    ``J`` sends ``e_i -> f_i`` and ``f_i -> -e_i``.
    """
    dim = V.dim
    if dim == 0:
        return ()
    remaining = [tuple(Fraction(int(i == j)) for i in range(dim)) for j in range(dim)]
    frame: list[tuple] = []
    while remaining:
        e = remaining.pop(0)
        k = next((idx for idx, v in enumerate(remaining) if V.omega(e, v) != 0), None)
        if k is None:
            # e is w-orthogonal to everything left; cannot happen for a nondegenerate form
            raise AssertionError("degenerate form in Darboux construction")
        f = remaining.pop(k)
        c = V.omega(e, f)
        f = tuple(x / c for x in f)
        frame.extend([e, f])

        def project(v):
            a, b = V.omega(v, f), V.omega(e, v)
            return tuple(vi - a * ei - b * fi for vi, ei, fi in zip(v, e, f))

        remaining = [project(v) for v in remaining]
        remaining = [v for v in remaining if any(v)]
    T = la.from_columns(frame, dim)
    Jstd: tuple = ()
    for _ in range(dim // 2):
        Jstd = la.block_diag(Jstd, ((Fraction(0), Fraction(-1)), (Fraction(1), Fraction(0))), acols=len(Jstd), bcols=2)
    return la.matmul(la.matmul(T, Jstd), la.inverse(T))


@lru_cache(maxsize=1 << 14)
def rotate(L: LagrangianSubspace) -> LagrangianSubspace:
    """``J L`` for the complex structure of :func:`complex_structure`."""
    J = complex_structure(L.space)
    return LagrangianSubspace(L.space, la.matmul(J, L.basis))


def transverse(L1: LagrangianSubspace, L2: LagrangianSubspace) -> bool:
    if L1.space.dim == 0:
        return True
    return la.rank(la.hstack(L1.basis, L2.basis)) == L1.space.dim


def step_index_twice(L0: LagrangianSubspace, L1: LagrangianSubspace, reference: LagrangianSubspace) -> int:
    """Twice the index of the canonical step ``L0 -> L1`` relative to ``reference``."""
    W = rotate(L0)
    if not transverse(L1, W):
        raise DegenerateStep("consecutive samples are not joined by a canonical short path")
    return kashiwara_index(L0, L1, W) - kashiwara_index(reference, L0, L1)


def maslov_loop(loop: LagrangianLoop, reference: LagrangianSubspace) -> int:
    if reference.space != loop.space:
        raise SpaceMismatch("reference lives in a different space")
    s = loop.samples
    total = sum(step_index_twice(s[i], s[(i + 1) % len(s)], reference) for i in range(len(s)))
    if total % 2:
        raise NonIntegralIndex(f"half-sum {total}/2 is not an integer")
    return total // 2


def loop_parity_check(datum: BoundaryDatum, reference: LagrangianSubspace | None = None) -> bool:
    if not datum.oriented:
        return True
    ref = reference if reference is not None else datum.loop.samples[0]
    return maslov_loop(datum.loop, ref) % 2 == 0


def orientation_monodromy(loop: LagrangianLoop) -> int:
    """Sign picked up by an orientation carried once around the loop.

    Along each canonical step the projection onto ``L_i`` along ``J L_i`` is
    an isomorphism, which transports orientations.  A loop is orientable iff
    the result is ``+1``.
    """
    s = loop.samples
    if loop.space.dim == 0:
        return 1
    sign = 1
    for i in range(len(s)):
        a, b = s[i], s[(i + 1) % len(s)]
        W = rotate(a)
        if not transverse(b, W):
            raise DegenerateStep("consecutive samples are not joined by a canonical short path")
        n = loop.space.half_dim
        # solve a*x + W*y = b_col for each column of b; keep x
        system = la.hstack(a.basis, W.basis)
        coords = [la.solve(system, col)[:n] for col in la.columns(b.basis)]
        d = la.det(la.from_columns(coords, n))
        sign *= 1 if d > 0 else -1
    return sign


def topological_index(data: SurfaceIndexData) -> int:
    return data.deg_closed + sum(data.boundary_indices) + sum(data.seam_indices)


def fredholm_index(rank: int, euler: int, top_index: int) -> int:
    return rank * euler + top_index


def fredholm_index_quilt(per_patch: Sequence[tuple[int, int]], top_index: int) -> int:
    return sum(r * chi for r, chi in per_patch) + top_index

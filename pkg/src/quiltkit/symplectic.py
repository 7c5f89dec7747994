"""Linear symplectic algebra over the rationals.

Spaces, Lagrangian subspaces, Lagrangian correspondences and their
geometric composition.  Subspaces compare by span, spaces by literal form.
The standard space of dimension ``2n`` uses coordinates
``(p1, q1, ..., pn, qn)`` with ``omega = sum p_i q'_i - q_i p'_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .errors import DimensionMismatch, NotLagrangian, NotSymplectic, SpaceMismatch

_J2 = ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)))


@lru_cache(maxsize=4096)
def _check_form(form: tuple) -> None:
    n = len(form)
    if any(len(r) != n for r in form):
        raise DimensionMismatch("symplectic form must be square")
    if n % 2:
        raise NotSymplectic("symplectic space must have even dimension")
    if any(form[i][j] != -form[j][i] for i in range(n) for j in range(n)):
        raise NotSymplectic("form is not antisymmetric")
    if n and la.det(form) == 0:
        raise NotSymplectic("form is degenerate")


@dataclass(frozen=True)
class SymplecticSpace:
    form: tuple

    def __post_init__(self):
        form = la.mat(self.form)
        object.__setattr__(self, "form", form)
        _check_form(form)

    @property
    def dim(self) -> int:
        return len(self.form)

    @property
    def half_dim(self) -> int:
        return self.dim // 2

    def omega(self, x, y) -> Fraction:
        return sum((xi * v for xi, v in zip(x, la.matvec(self.form, y))), Fraction(0))

    def __repr__(self):
        return f"SymplecticSpace(dim={self.dim})"


def standard_space(n: int) -> SymplecticSpace:
    if n < 0:
        raise ValueError("n must be nonnegative")
    form: tuple = ()
    for _ in range(n):
        form = la.block_diag(form, _J2, acols=len(form), bcols=2)
    return SymplecticSpace(form)


def dual_space(V: SymplecticSpace) -> SymplecticSpace:
    return SymplecticSpace(la.neg(V.form))


def product_space(V0: SymplecticSpace, V1: SymplecticSpace) -> SymplecticSpace:
    return SymplecticSpace(la.block_diag(V0.form, V1.form, acols=V0.dim, bcols=V1.dim))


def is_lagrangian(basis, V: SymplecticSpace) -> bool:
    basis = la.mat(basis)
    if len(basis) != V.dim:
        raise DimensionMismatch(f"basis has {len(basis)} rows, space has dimension {V.dim}")
    if V.dim == 0:
        return True
    if la.rank(basis) != V.half_dim:
        return False
    gram = la.matmul(la.transpose(basis), la.matmul(V.form, basis))
    return all(x == 0 for row in gram for x in row)


@dataclass(frozen=True, eq=False)
class LagrangianSubspace:
    """A Lagrangian subspace given by a spanning set of columns.

    The stored basis is the canonical column echelon basis, so two subspaces
    with the same span have identical ``basis``.
    """

    space: SymplecticSpace
    basis: tuple

    def __post_init__(self):
        b = la.mat(self.basis) if self.basis else tuple(() for _ in range(self.space.dim))
        if len(b) != self.space.dim:
            raise DimensionMismatch(f"basis has {len(b)} rows, space has dimension {self.space.dim}")
        canon = la.column_space(b, self.space.dim)
        if not is_lagrangian(canon, self.space):
            raise NotLagrangian("subspace is not Lagrangian")
        object.__setattr__(self, "basis", canon)

    def __eq__(self, other):
        if not isinstance(other, LagrangianSubspace):
            return NotImplemented
        return self.space == other.space and self.basis == other.basis

    def __hash__(self):
        return hash((self.space, self.basis))

    def vectors(self) -> list[tuple]:
        return la.columns(self.basis) if self.space.dim else []

    def contains(self, v) -> bool:
        return la.rank(la.hstack(self.basis, la.from_columns([v], self.space.dim))) == self.space.half_dim

    def __repr__(self):
        return f"LagrangianSubspace(dim={self.space.dim}, basis={[[str(x) for x in r] for r in self.basis]})"


def lagrangian(basis, V: SymplecticSpace) -> LagrangianSubspace:
    return LagrangianSubspace(V, la.mat(basis))


def line(p, q) -> LagrangianSubspace:
    """The line through ``(p, q)`` in the standard plane."""
    return LagrangianSubspace(standard_space(1), ((la.parse_rational(p),), (la.parse_rational(q),)))


@dataclass(frozen=True)
class LagrangianCorrespondence:
    source: SymplecticSpace
    target: SymplecticSpace
    subspace: LagrangianSubspace

    def __post_init__(self):
        expected = product_space(dual_space(self.source), self.target)
        if self.subspace.space != expected:
            raise SpaceMismatch("correspondence must live in source^- x target")

    @classmethod
    def from_basis(cls, source, target, basis) -> "LagrangianCorrespondence":
        amb = product_space(dual_space(source), target)
        return cls(source, target, LagrangianSubspace(amb, la.mat(basis)))

    @property
    def basis(self):
        return self.subspace.basis

    def source_part(self):
        return self.basis[: self.source.dim]

    def target_part(self):
        return self.basis[self.source.dim:]


@dataclass(frozen=True)
class CompositionResult:
    transverse: bool
    embedded: bool
    kernel_dim: int
    composition: LagrangianCorrespondence | None = None


def diagonal(V: SymplecticSpace) -> LagrangianCorrespondence:
    ident = la.identity(V.dim)
    return LagrangianCorrespondence.from_basis(V, V, la.vstack(ident, ident))


def transpose(L01: LagrangianCorrespondence) -> LagrangianCorrespondence:
    return LagrangianCorrespondence.from_basis(L01.target, L01.source, la.vstack(L01.target_part(), L01.source_part()))


def graph(A, V: SymplecticSpace) -> LagrangianCorrespondence:
    A = la.mat(A)
    if len(A) != V.dim or any(len(r) != V.dim for r in A):
        raise DimensionMismatch("graph: matrix size does not match the space")
    if la.matmul(la.matmul(la.transpose(A, V.dim), V.form), A) != V.form:
        raise NotSymplectic("matrix does not preserve the symplectic form")
    return LagrangianCorrespondence.from_basis(V, V, la.vstack(la.identity(V.dim), A))


def subspace_as_correspondence(L: LagrangianSubspace, *, into: bool = True) -> LagrangianCorrespondence:
    """View ``L`` in ``M`` as a correspondence ``pt -> M`` (or ``M -> pt``)."""
    pt = standard_space(0)
    if into:
        return LagrangianCorrespondence.from_basis(pt, L.space, L.basis)
    # L is Lagrangian in M iff it is Lagrangian in M^-.
    return LagrangianCorrespondence.from_basis(L.space, pt, L.basis)


def correspondence_as_subspace(L: LagrangianCorrespondence) -> LagrangianSubspace:
    """Inverse of :func:`subspace_as_correspondence` for ``pt -> M`` or ``M -> pt``."""
    if L.source.dim == 0:
        return LagrangianSubspace(L.target, L.basis)
    if L.target.dim == 0:
        return LagrangianSubspace(L.source, L.basis)
    raise DimensionMismatch("correspondence has no point factor")


def compose(L01: LagrangianCorrespondence, L12: LagrangianCorrespondence) -> CompositionResult:
    """Geometric composition ``L01 o L12`` from ``V0`` to ``V2``.

    The fiber product is parametrised by pairs of coefficient vectors
    ``(a, b)`` with ``P1 a = Q1 b``; its image under the outer projection is
    the composition and the kernel of that projection is the failure of
    embeddedness.
    """
    if L01.target != L12.source:
        raise SpaceMismatch("middle spaces differ")
    V0, V1, V2 = L01.source, L01.target, L12.target
    n0, n1, n2 = V0.half_dim, V1.half_dim, V2.half_dim
    P0, P1 = L01.source_part(), L01.target_part()
    Q1, Q2 = L12.source_part(), L12.target_part()
    k01, k12 = n0 + n1, n1 + n2

    if V1.dim:
        fiber = la.nullspace(la.hstack(P1, la.neg(Q1)) if (k01 + k12) else (), k01 + k12)
    else:
        fiber = la.nullspace((), k01 + k12)
    transverse = len(fiber) == n0 + n2

    outer = la.block_diag(P0, Q2, acols=k01, bcols=k12)
    images = [la.matvec(outer, v) for v in fiber] if outer else [() for _ in fiber]
    if V0.dim + V2.dim:
        image_rank = la.rank(la.from_columns(images, V0.dim + V2.dim)) if images else 0
    else:
        image_rank = 0
    kernel_dim = len(fiber) - image_rank
    embedded = transverse and kernel_dim == 0
    composition = None
    if embedded:
        composition = LagrangianCorrespondence.from_basis(V0, V2, la.from_columns(images, V0.dim + V2.dim))
    return CompositionResult(transverse, embedded, kernel_dim, composition)

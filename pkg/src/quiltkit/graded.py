"""Free Z_N-graded modules over Z or Z/2 and Koszul-signed maps between them.

Matrices are numpy object arrays of Python integers, indexed
``[target basis, source basis]``.  Tensor products are flattened: a module
remembers the tuple of atomic factors it was built from, and basis elements of
a product are ordered with the first factor varying slowest (``numpy.kron``
order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    FactorMismatch,
    ModulusMismatch,
    NonzeroDegree,
    NotAComplex,
    NotEndomorphism,
    RingMismatch,
)

Z, Z2 = "Z", "Z2"
TENSOR = "⊗"


@dataclass(frozen=True)
class GradedModule:
    modulus: int
    ring: str
    basis: tuple  # ((name, degree), ...)
    factors: tuple | None = None  # None: atomic; () for the ground ring

    def __post_init__(self):
        if self.modulus <= 0 or self.modulus % 2:
            raise ValueError("grading modulus must be an even positive integer")
        if self.ring not in (Z, Z2):
            raise ValueError(f"unknown ring {self.ring!r}")
        basis = tuple((str(n), int(d) % self.modulus) for n, d in self.basis)
        if len({n for n, _ in basis}) != len(basis):
            raise ValueError("basis names must be unique")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def of(cls, degrees: Sequence[int], modulus: int, ring: str = Z, prefix: str = "x") -> "GradedModule":
        return cls(modulus, ring, tuple((f"{prefix}{i}", d) for i, d in enumerate(degrees)))

    @classmethod
    def unit(cls, modulus: int, ring: str = Z) -> "GradedModule":
        return cls(modulus, ring, (("1", 0),), ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> tuple:
        return tuple(d for _, d in self.basis)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.basis)

    def factor_list(self) -> tuple:
        return (self,) if self.factors is None else self.factors

    def is_unit(self) -> bool:
        return self.factors == ()


def _check_compatible(*modules: GradedModule) -> None:
    if len({m.modulus for m in modules}) > 1:
        raise ModulusMismatch("grading moduli differ")
    if len({m.ring for m in modules}) > 1:
        raise RingMismatch("coefficient rings differ")


def tensor(*modules: GradedModule) -> GradedModule:
    if not modules:
        raise ValueError("tensor of no modules needs a modulus; use GradedModule.unit")
    _check_compatible(*modules)
    parts = [m for m in modules if not m.is_unit()]
    if not parts:
        return modules[0]
    if len(parts) == 1:
        return parts[0]
    out = parts[0]
    for m in parts[1:]:
        basis = tuple(
            (f"{a}{TENSOR}{b}", da + db) for (a, da), (b, db) in itertools.product(out.basis, m.basis)
        )
        out = GradedModule(out.modulus, out.ring, basis, out.factor_list() + m.factor_list())
    return out


def tensor_all(modules: Sequence[GradedModule], modulus: int, ring: str = Z) -> GradedModule:
    return tensor(GradedModule.unit(modulus, ring), *modules)


def _normalize(matrix, ring: str) -> np.ndarray:
    a = np.array(matrix, dtype=object)
    a = np.vectorize(int, otypes=[object])(a) if a.size else a.astype(object)
    if ring == Z2:
        a = a % 2 if a.size else a
    return a


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedModule
    target: GradedModule
    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_compatible(self.source, self.target)
        N = self.source.modulus
        object.__setattr__(self, "degree", int(self.degree) % N)
        m = _normalize(self.matrix, self.source.ring)
        if m.size == 0:
            m = np.zeros((self.target.rank, self.source.rank), dtype=object)
        if m.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"matrix shape {m.shape} does not match ({self.target.rank}, {self.source.rank})")
        for i, (_, dy) in enumerate(self.target.basis):
            for j, (_, dx) in enumerate(self.source.basis):
                if m[i, j] != 0 and (dx + self.degree - dy) % N:
                    raise ValueError("map is not homogeneous of the stated degree")
        object.__setattr__(self, "matrix", m)

    @property
    def ring(self) -> str:
        return self.source.ring

    @property
    def modulus(self) -> int:
        return self.source.modulus

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.source, self.target, self.degree, tuple(self.matrix.flatten())))

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """``self @ other`` is ``self`` after ``other``."""
        if other.target != self.source:
            raise FactorMismatch("composition: modules do not match")
        return GradedMap(other.source, self.target, self.degree + other.degree, self.matrix.dot(other.matrix))

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise FactorMismatch("sum of maps with different signatures")
        return GradedMap(self.source, self.target, self.degree, self.matrix + other.matrix)

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def scale(self, c: int) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree, self.matrix * c)

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self.matrix.flat)

    def scalar(self) -> int:
        """The value of a map from the ground ring to itself."""
        if not (self.source.is_unit() and self.target.is_unit()):
            raise NotEndomorphism("not a map between ground rings")
        return int(self.matrix[0, 0])

    def __repr__(self):
        return f"GradedMap(deg={self.degree}, {self.target.rank}x{self.source.rank}, {self.matrix.tolist()})"


def identity(m: GradedModule) -> GradedMap:
    return GradedMap(m, m, 0, np.identity(m.rank, dtype=int).astype(object))


def zero_map(source: GradedModule, target: GradedModule, degree: int = 0) -> GradedMap:
    return GradedMap(source, target, degree, np.zeros((target.rank, source.rank), dtype=object))


def power(f: GradedMap, k: int) -> GradedMap:
    if f.source != f.target:
        raise NotEndomorphism("power of a non-endomorphism")
    out = identity(f.source)
    for _ in range(k):
        out = f @ out
    return out


def _parity_signs(module: GradedModule, degree: int) -> np.ndarray:
    return np.array([-1 if (degree * d) % 2 else 1 for d in module.degrees], dtype=object)


def tensor_map(f1: GradedMap, f2: GradedMap) -> GradedMap:
    """``(f1 ⊗ f2)(x1 ⊗ x2) = (-1)^{|f2||x1|} f1(x1) ⊗ f2(x2)``."""
    _check_compatible(f1.source, f2.source)
    signs = _parity_signs(f1.source, f2.degree)
    left = f1.matrix * signs[np.newaxis, :] if f1.matrix.size else f1.matrix
    return GradedMap(
        tensor(f1.source, f2.source),
        tensor(f1.target, f2.target),
        f1.degree + f2.degree,
        np.kron(left, f2.matrix),
    )


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of moving factors so that output slot ``j`` holds input ``perm[j]``."""
    odd = 0
    for j, a in enumerate(perm):
        for b in perm[j + 1:]:
            if a > b and degrees[a] % 2 and degrees[b] % 2:
                odd += 1
    return -1 if odd % 2 else 1


def koszul_permutation(modules: Sequence[GradedModule], perm: Sequence[int]) -> GradedMap:
    modules = list(modules)
    if not modules:
        raise ValueError("need at least one module")
    if sorted(perm) != list(range(len(modules))):
        raise ValueError("not a permutation")
    N, ring = modules[0].modulus, modules[0].ring
    source = tensor_all(modules, N, ring)
    target = tensor_all([modules[p] for p in perm], N, ring)
    ranks = [m.rank for m in modules]
    out_ranks = [ranks[p] for p in perm]
    mat = np.zeros((target.rank, source.rank), dtype=object)
    for idx in itertools.product(*(range(r) for r in ranks)):
        degs = [modules[k].degrees[i] for k, i in enumerate(idx)]
        out_idx = [idx[p] for p in perm]
        col = int(np.ravel_multi_index(idx, ranks)) if ranks else 0
        row = int(np.ravel_multi_index(out_idx, out_ranks)) if out_ranks else 0
        mat[row, col] = koszul_sign(degs, perm)
    return GradedMap(source, target, 0, mat)


@dataclass(frozen=True)
class DualityDatum:
    """A module ``A``, its partner ``B`` with degrees ``n - |x_i|`` and signs ``eps_i``.

    ``cap: A ⊗ B -> ground`` and ``cup: ground -> A ⊗ B``.
    """

    module: GradedModule
    n: int
    eps: tuple | None = None
    dual: GradedModule | None = None

    def __post_init__(self):
        A = self.module
        eps = tuple(self.eps) if self.eps is not None else (1,) * A.rank
        if len(eps) != A.rank or any(e not in (1, -1) for e in eps):
            raise ValueError("eps must be one sign per generator")
        object.__setattr__(self, "eps", eps)
        if self.dual is None:
            B = GradedModule(A.modulus, A.ring, tuple((f"{name}'", self.n - d) for name, d in A.basis))
            object.__setattr__(self, "dual", B)
        else:
            B = self.dual
            if B.rank != A.rank or any((da + db - self.n) % A.modulus for da, db in zip(A.degrees, B.degrees)):
                raise ValueError("dual degrees must satisfy |x| + |x'| = n")

    @classmethod
    def reversed_pair(cls, module: GradedModule, n: int) -> "DualityDatum":
        """Signs for the pair taken in the opposite order: ``+1`` for odd ``n``, else ``(-1)^{|x_i|}``."""
        eps = tuple(1 if n % 2 else (-1) ** (d % 2) for d in module.degrees)
        return cls(module, n, eps)

    def flipped(self, mask: Sequence[bool]) -> "DualityDatum":
        return DualityDatum(self.module, self.n, tuple(-e if f else e for e, f in zip(self.eps, mask)), self.dual)


def cap_map(d: DualityDatum) -> GradedMap:
    A, B = d.module, d.dual
    src = tensor(A, B)
    unit = GradedModule.unit(A.modulus, A.ring)
    mat = np.zeros((1, src.rank), dtype=object)
    for i, deg in enumerate(A.degrees):
        mat[0, i * B.rank + i] = (-1) ** (deg % 2) * d.eps[i]
    return GradedMap(src, unit, -d.n, mat)


def cup_map(d: DualityDatum) -> GradedMap:
    A, B = d.module, d.dual
    tgt = tensor(A, B)
    unit = GradedModule.unit(A.modulus, A.ring)
    mat = np.zeros((tgt.rank, 1), dtype=object)
    for i in range(A.rank):
        mat[i * B.rank + i, 0] = d.eps[i]
    return GradedMap(unit, tgt, d.n, mat)


def graded_trace(f: GradedMap) -> int:
    if f.source != f.target:
        raise NotEndomorphism("trace of a non-endomorphism")
    if f.degree != 0:
        raise NonzeroDegree(f"trace needs degree 0, got {f.degree}")
    total = sum((-1) ** (d % 2) * f.matrix[i, i] for i, d in enumerate(f.source.degrees))
    return int(total) % 2 if f.ring == Z2 else int(total)


def euler_characteristic(m: GradedModule) -> int:
    return sum(1 if d % 2 == 0 else -1 for d in m.degrees)


def _drop(seq: Sequence, k: int) -> list:
    return list(seq[:k]) + list(seq[k + 1:])


def algebraic_trace(f: GradedMap, pos_minus: int, pos_plus: int, d: DualityDatum) -> GradedMap:
    """Close the source factor ``pos_minus`` against the target factor ``pos_plus``.

    ``(Id ⊗ cap) ∘ (Psi_+ ⊗ Id) ∘ (f ⊗ Id) ∘ (Psi_- ⊗ Id) ∘ (Id ⊗ cup)``.
    """
    S, T = f.source.factor_list(), f.target.factor_list()
    if not (0 <= pos_minus < len(S)) or not (0 <= pos_plus < len(T)):
        raise FactorMismatch("trace position out of range")
    A, B = d.module, d.dual
    if S[pos_minus] != A or T[pos_plus] != A:
        raise FactorMismatch("traced factors do not match the duality datum")
    N, ring = f.modulus, f.ring
    rest_in, rest_out = _drop(S, pos_minus), _drop(T, pos_plus)
    R_in, R_out = tensor_all(rest_in, N, ring), tensor_all(rest_out, N, ring)
    idB = identity(B)

    step1 = tensor_map(identity(R_in), cup_map(d))
    k = len(S)
    perm_minus = [j if j < pos_minus else (k - 1 if j == pos_minus else j - 1) for j in range(k)]
    step2 = tensor_map(koszul_permutation(rest_in + [A], perm_minus), idB)
    step3 = tensor_map(f, idB)
    perm_plus = _drop(list(range(len(T))), pos_plus) + [pos_plus]
    step4 = tensor_map(koszul_permutation(list(T), perm_plus), idB)
    step5 = tensor_map(identity(R_out), cap_map(d))
    return step5 @ step4 @ step3 @ step2 @ step1


# ---------------------------------------------------------------- complexes


@dataclass(frozen=True, eq=False)
class ChainComplex:
    module: GradedModule
    differential: GradedMap

    def __post_init__(self):
        dm = self.differential
        if dm.source != self.module or dm.target != self.module:
            raise NotAComplex("differential must be an endomorphism of the module")
        if dm.degree != 1 % self.module.modulus:
            raise NotAComplex("differential must have degree +1")
        if not (dm @ dm).is_zero():
            raise NotAComplex("differential does not square to zero")


def smith_normal_form(matrix) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            p = a[t][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            p = a[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def rank_mod2(matrix) -> int:
    rows = [[int(x) % 2 for x in row] for row in matrix]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def degree_block(f: GradedMap, k: int) -> np.ndarray:
    """The block of ``f`` from source degree ``k`` to target degree ``k + deg f``."""
    N = f.modulus
    cols = [j for j, d in enumerate(f.source.degrees) if d == k % N]
    rows = [i for i, d in enumerate(f.target.degrees) if d == (k + f.degree) % N]
    return f.matrix[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=object)


def cohomology(c: ChainComplex) -> dict[int, tuple[int, list[int]]]:
    """Per degree ``k``: ``(free rank, torsion coefficients)``; torsion is empty over Z/2."""
    N = c.module.modulus
    out = {}
    for k in range(N):
        dim = sum(1 for d in c.module.degrees if d == k)
        d_out = degree_block(c.differential, k)
        d_in = degree_block(c.differential, k - 1)
        if c.module.ring == Z2:
            out[k] = (dim - rank_mod2(d_out) - rank_mod2(d_in), [])
            continue
        inv_out = smith_normal_form(d_out.tolist())
        inv_in = smith_normal_form(d_in.tolist())
        out[k] = (dim - len(inv_out) - len(inv_in), [x for x in inv_in if x > 1])
    return out


def is_chain_map(f: GradedMap, c1: ChainComplex, c2: ChainComplex) -> bool:
    if f.source != c1.module or f.target != c2.module:
        return False
    lhs = c2.differential @ f
    rhs = f @ c1.differential
    sign = -1 if f.degree % 2 else 1
    return np.array_equal(lhs.matrix, (rhs.scale(sign)).matrix)

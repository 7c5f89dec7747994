"""Named quilts used by the demos, the CLI and the tests."""

from __future__ import annotations

from fractions import Fraction

from .quilt import (
    IN,
    OUT,
    Circle,
    Label,
    MarkedPoint,
    Patch,
    PatchLabel,
    QuiltedSurface,
    Seam,
    disjoint_union,
    glue_by_index,
)


def mp(mid: str, direction: str, width=1) -> MarkedPoint:
    return MarkedPoint(mid, direction, Fraction(width))


def space_label(name: str, n: int) -> PatchLabel:
    return PatchLabel(name, 2 * n)


def seam_label(name: str, n_a: int, n_b: int) -> Label:
    return Label(name, (2 * n_a, 2 * n_b))


def bdry(name: str, n: int) -> Label:
    return Label(name, (2 * n,))


def disk(pid: str, label: PatchLabel, marks=(), interior=()) -> Patch:
    return Patch(pid, label, (Circle("c", tuple(marks)),), 0, tuple(interior))


# -------------------------------------------------------------- single patches


def strip(n: int = 1, labels=("L0", "L1"), width=1, modulus: int = 2, pid: str = "S") -> QuiltedSurface:
    M = space_label("M", n)
    p = disk(pid, M, [mp("a", IN, width), mp("b", OUT, width)])
    return QuiltedSurface(
        patches=(p,),
        boundary=(((pid, "c", "a"), bdry(labels[0], n)), ((pid, "c", "b"), bdry(labels[1], n))),
        incoming=((pid, "a"),),
        outgoing=((pid, "b"),),
        modulus=modulus,
    )


def cap(n: int = 1, labels=("L0", "L1"), modulus: int = 2) -> QuiltedSurface:
    """Disk with two incoming ends; the ends read ``(L0, L1)`` and ``(L1, L0)``."""
    M = space_label("M", n)
    p = disk("S", M, [mp("a", IN), mp("b", IN)])
    return QuiltedSurface(
        patches=(p,),
        boundary=((("S", "c", "a"), bdry(labels[0], n)), (("S", "c", "b"), bdry(labels[1], n))),
        incoming=(("S", "a"), ("S", "b")),
        modulus=modulus,
    )


def cup(n: int = 1, labels=("L0", "L1"), modulus: int = 2) -> QuiltedSurface:
    """Disk with two outgoing ends; the ends read ``(L0, L1)`` and ``(L1, L0)``."""
    M = space_label("M", n)
    p = disk("S", M, [mp("a", OUT), mp("b", OUT)])
    return QuiltedSurface(
        patches=(p,),
        boundary=((("S", "c", "a"), bdry(labels[0], n)), (("S", "c", "b"), bdry(labels[1], n))),
        outgoing=(("S", "b"), ("S", "a")),
        modulus=modulus,
    )


def plain_disk(n: int = 1, label: str = "L", modulus: int = 2) -> QuiltedSurface:
    p = disk("D", space_label("M", n))
    return QuiltedSurface(patches=(p,), boundary=((("D", "c", None), bdry(label, n)),), modulus=modulus)


def annulus(n: int = 1, labels=("L0", "L1"), modulus: int = 2) -> QuiltedSurface:
    return glue_by_index(strip(n, labels, modulus=modulus), 0, 0)


def holed_strip(n: int = 1, label: str = "L", modulus: int = 2) -> QuiltedSurface:
    """A strip with a disk removed, all boundaries labeled ``label``."""
    M = space_label("M", n)
    p = Patch("S", M, (Circle("c", (mp("a", IN), mp("b", OUT))), Circle("h")), 0)
    L = bdry(label, n)
    return QuiltedSurface(
        patches=(p,),
        boundary=((("S", "c", "a"), L), (("S", "c", "b"), L), (("S", "h", None), L)),
        incoming=(("S", "a"),),
        outgoing=(("S", "b"),),
        modulus=modulus,
    )


def duality_disk(n: int = 1, modulus: int = 2) -> QuiltedSurface:
    return cap(n, ("L^0", "L^1"), modulus)


# -------------------------------------------------------------- three-patch quilt of two views


def figure_two(view: int = 1) -> QuiltedSurface:
    """Three disks S1, S2, S3; incoming ends (S2,0)(S1,0) and (S2,1), one outgoing end of length four.

    View 2 describes the same quilt with other identifiers, rotated circle
    lists and seams written from the opposite side.
    """
    M = [space_label(f"M{k}", 1) for k in (1, 2, 3)]
    L = {k: bdry(f"L{k}", 1) for k in ("a", "b", "c")}
    s21 = seam_label("L21", 1, 1)
    s23 = seam_label("L23", 1, 1)
    if view == 1:
        S1 = disk("S1", M[0], [mp("0", IN), mp("1", OUT)])
        S2 = disk("S2", M[1], [mp("0", IN), mp("1", IN), mp("2", OUT), mp("3", OUT)])
        S3 = disk("S3", M[2], [mp("0", OUT)])
        return QuiltedSurface(
            patches=(S1, S2, S3),
            seams=(
                Seam(("S2", "c", "2"), ("S3", "c", "0"), s23),
                Seam(("S2", "c", "3"), ("S1", "c", "0"), s21),
            ),
            boundary=((("S2", "c", "0"), L["a"]), (("S2", "c", "1"), L["b"]), (("S1", "c", "1"), L["c"])),
            incoming=(("S2", "0"), ("S2", "1")),
            outgoing=(("S2", "2"),),
        )
    S1 = Patch("left", M[0], (Circle("rim", (mp("v", OUT), mp("u", IN))),))
    S2 = Patch("mid", M[1], (Circle("rim", (mp("r", OUT), mp("s", OUT), mp("p", IN), mp("q", IN))),))
    S3 = Patch("top", M[2], (Circle("rim", (mp("w", OUT),)),))
    return QuiltedSurface(
        patches=(S1, S2, S3),
        seams=(
            Seam(("top", "rim", "w"), ("mid", "rim", "r"), s23.transposed()),
            Seam(("left", "rim", "u"), ("mid", "rim", "s"), s21.transposed()),
        ),
        boundary=((("left", "rim", "v"), L["c"]), (("mid", "rim", "q"), L["b"]), (("mid", "rim", "p"), L["a"])),
        incoming=(("mid", "p"), ("mid", "q")),
        outgoing=(("mid", "r"),),
    )


# -------------------------------------------------------------- strip shrinking


def three_strips(n=(1, 1, 1), modulus: int = 2) -> QuiltedSurface:
    """Strips in M0, M1, M2 joined by seams L01, L12 with boundaries L0 and L2."""
    pats = tuple(disk(f"S{k}", space_label(f"M{k}", n[k]), [mp("a", IN), mp("b", OUT)]) for k in range(3))
    return QuiltedSurface(
        patches=pats,
        seams=(
            Seam(("S0", "c", "b"), ("S1", "c", "a"), seam_label("L01", n[0], n[1])),
            Seam(("S1", "c", "b"), ("S2", "c", "a"), seam_label("L12", n[1], n[2])),
        ),
        boundary=((("S0", "c", "a"), bdry("L0", n[0])), (("S2", "c", "b"), bdry("L2", n[2]))),
        incoming=(("S0", "a"),),
        outgoing=(("S0", "b"),),
        modulus=modulus,
    )


def seamed_cups(n=(1, 1), modulus: int = 2) -> QuiltedSurface:
    """Two disks with two outgoing ends each, seamed along one side; ``S`` is a strip with ``d = +1``."""
    X = disk("X", space_label("M0", n[0]), [mp("x1", OUT), mp("x2", OUT)])
    S = disk("S", space_label("M1", n[1]), [mp("s1", OUT), mp("s2", OUT)])
    return QuiltedSurface(
        patches=(X, S),
        seams=(Seam(("X", "c", "x1"), ("S", "c", "s1"), seam_label("L01", n[0], n[1])),),
        boundary=((("X", "c", "x2"), bdry("L0", n[0])), (("S", "c", "s2"), bdry("L1", n[1]))),
        outgoing=(("X", "x1"), ("X", "x2")),
        modulus=modulus,
    )


def two_strips(n=(1, 1), seam: str = "L01∘L12", names=("S0", "S2"), spaces=("M0", "M2"), modulus: int = 2) -> QuiltedSurface:
    a, b = names
    pats = (
        disk(a, space_label(spaces[0], n[0]), [mp("a", IN), mp("b", OUT)]),
        disk(b, space_label(spaces[1], n[1]), [mp("a", IN), mp("b", OUT)]),
    )
    return QuiltedSurface(
        patches=pats,
        seams=(Seam((a, "c", "b"), (b, "c", "a"), seam_label(seam, n[0], n[1])),),
        boundary=(((a, "c", "a"), bdry("L0", n[0])), ((b, "c", "b"), bdry("L2", n[1]))),
        incoming=((a, "a"),),
        outgoing=((a, "b"),),
        modulus=modulus,
    )


# -------------------------------------------------------------- the quilts of the morphism construction


def phi_cylinder(n0: int = 1, n1: int = 1, seam: str = "L01", spaces=("M0", "M1"), modulus: int = 2) -> QuiltedSurface:
    """Two half cylinders seamed along their circles; incoming puncture on the first."""
    A = disk("A", space_label(spaces[0], n0), interior=(IN,))
    B = disk("B", space_label(spaces[1], n1), interior=(OUT,))
    return QuiltedSurface(
        patches=(A, B),
        seams=(Seam(("A", "c", None), ("B", "c", None), seam_label(seam, n0, n1)),),
        modulus=modulus,
    )


def psi_quilt(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    A = disk("A", space_label("M0", n0), [mp("x", OUT)], interior=(IN,))
    B = disk("B", space_label("M1", n1), [mp("y", OUT)])
    return QuiltedSurface(
        patches=(A, B),
        seams=(Seam(("A", "c", "x"), ("B", "c", "y"), seam_label("L01", n0, n1)),),
        outgoing=(("A", "x"),),
        modulus=modulus,
    )


def theta_quilt(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    A = disk("A", space_label("M0", n0), [mp("x", IN)])
    B = disk("B", space_label("M1", n1), [mp("y", IN)], interior=(OUT,))
    return QuiltedSurface(
        patches=(A, B),
        seams=(Seam(("A", "c", "x"), ("B", "c", "y"), seam_label("L01", n0, n1)),),
        incoming=(("A", "x"),),
        modulus=modulus,
    )


def s3comp(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    """Two M0 disks and an M1 disk with a four-fold middle end between the x and y ends."""
    L = seam_label("L01", n0, n1)
    A = disk("A", space_label("M0", n0), [mp("x0", IN), mp("ma", IN)])
    B = disk("B", space_label("M0", n0), [mp("mb", IN), mp("y0", IN)])
    C = disk("C", space_label("M1", n1), [mp("x1", IN), mp("m1", IN), mp("y1", IN), mp("m2", IN)], interior=(OUT,))
    return QuiltedSurface(
        patches=(A, B, C),
        seams=(
            Seam(("A", "c", "x0"), ("C", "c", "m2"), L),
            Seam(("A", "c", "ma"), ("C", "c", "x1"), L),
            Seam(("B", "c", "mb"), ("C", "c", "y1"), L),
            Seam(("B", "c", "y0"), ("C", "c", "m1"), L),
        ),
        incoming=(("A", "x0"), ("A", "ma"), ("B", "y0")),
        modulus=modulus,
    )


def s1_quilt(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    """M0 disk, M1 strip with two outgoing ends, M0 disk."""
    L = seam_label("L01", n0, n1)
    P = disk("P", space_label("M0", n0), [mp("p", OUT)])
    Q = disk("Q", space_label("M1", n1), [mp("q1", OUT), mp("q2", OUT)])
    R = disk("R", space_label("M0", n0), [mp("r", OUT)])
    return QuiltedSurface(
        patches=(P, Q, R),
        seams=(Seam(("P", "c", "p"), ("Q", "c", "q2"), L), Seam(("R", "c", "r"), ("Q", "c", "q1"), L)),
        outgoing=(("P", "p"),),
        modulus=modulus,
    )


def s0_quilt(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    """M0 strip with two outgoing ends between two M1 disks."""
    L = seam_label("L01", n0, n1)
    Z = disk("Z", space_label("M0", n0), [mp("z1", OUT), mp("z2", OUT)])
    U = disk("U", space_label("M1", n1), [mp("u", OUT)])
    V = disk("V", space_label("M1", n1), [mp("v", OUT)])
    return QuiltedSurface(
        patches=(Z, U, V),
        seams=(Seam(("Z", "c", "z1"), ("U", "c", "u"), L), Seam(("Z", "c", "z2"), ("V", "c", "v"), L)),
        outgoing=(("Z", "z1"),),
        modulus=modulus,
    )


def s3p(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    """Two M0 disks seamed to the two circles of an M1 annulus with an outgoing puncture."""
    L = seam_label("L01", n0, n1)
    A = disk("A", space_label("M0", n0), [mp("x0", IN)])
    B = disk("B", space_label("M0", n0), [mp("y0", IN)])
    C = Patch("C", space_label("M1", n1), (Circle("cx", (mp("x1", IN),)), Circle("cy", (mp("y1", IN),))), 0, (OUT,))
    return QuiltedSurface(
        patches=(A, B, C),
        seams=(Seam(("A", "c", "x0"), ("C", "cx", "x1"), L), Seam(("B", "c", "y0"), ("C", "cy", "y1"), L)),
        incoming=(("A", "x0"), ("B", "y0")),
        modulus=modulus,
    )


def s2p(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    """An M0 disk and an M1 disk with an outgoing puncture, joined along both boundary arcs."""
    L = seam_label("L01", n0, n1)
    A = disk("A", space_label("M0", n0), [mp("x0", IN), mp("y0", IN)])
    C = disk("C", space_label("M1", n1), [mp("x1", IN), mp("y1", IN)], interior=(OUT,))
    return QuiltedSurface(
        patches=(A, C),
        seams=(Seam(("A", "c", "x0"), ("C", "c", "y1"), L), Seam(("A", "c", "y0"), ("C", "c", "x1"), L)),
        incoming=(("A", "x0"), ("A", "y0")),
        modulus=modulus,
    )


def cylinder_pair(n=(1, 1, 1), modulus: int = 2) -> QuiltedSurface:
    """M0 disk, M1 annulus, M2 disk; seams L01 and L12; punctures on the disks."""
    A = disk("A", space_label("M0", n[0]), interior=(IN,))
    B = Patch("B", space_label("M1", n[1]), (Circle("c0"), Circle("c2")))
    C = disk("C", space_label("M2", n[2]), interior=(OUT,))
    return QuiltedSurface(
        patches=(A, B, C),
        seams=(
            Seam(("A", "c", None), ("B", "c0", None), seam_label("L01", n[0], n[1])),
            Seam(("B", "c2", None), ("C", "c", None), seam_label("L12", n[1], n[2])),
        ),
        modulus=modulus,
    )


def psi_theta_glued(n0: int = 1, n1: int = 1, modulus: int = 2) -> QuiltedSurface:
    u = disjoint_union(psi_quilt(n0, n1, modulus), theta_quilt(n0, n1, modulus))
    return glue_by_index(u, 0, 0)


REGISTRY = {
    "strip": strip,
    "cap": cap,
    "cup": cup,
    "disk": plain_disk,
    "annulus": annulus,
    "holed_strip": holed_strip,
    "duality_disk": duality_disk,
    "figure_two": figure_two,
    "figure_two_view2": lambda: figure_two(2),
    "three_strips": three_strips,
    "two_strips": two_strips,
    "phi_cylinder": phi_cylinder,
    "psi": psi_quilt,
    "theta": theta_quilt,
    "s3comp": s3comp,
    "s1": s1_quilt,
    "s0": s0_quilt,
    "s3p": s3p,
    "s2p": s2p,
    "cylinder_pair": cylinder_pair,
    "seamed_cups": seamed_cups,
    "psi_theta_glued": psi_theta_glued,
}

"""JSON encoding for every value the command line reads or writes.

Rationals are ``"p/q"`` strings, integer matrices are nested lists, and
:func:`dumps` sorts keys so equal values give byte-identical text.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import engine as en
from . import graded as gr
from . import linalg as la
from . import symplectic as sp
from .quilt import Circle, Label, MarkedPoint, Patch, PatchLabel, QuiltedSurface, Seam


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- linear data


def matrix_to_json(m) -> list:
    return [[la.format_rational(Fraction(x)) for x in row] for row in m]


def matrix_from_json(rows) -> tuple:
    return la.mat(rows)


def _is_standard(V: sp.SymplecticSpace) -> bool:
    return V == sp.standard_space(V.half_dim)


def space_to_json(V: sp.SymplecticSpace) -> dict:
    out = {"dim": V.dim}
    if not _is_standard(V):
        out["form"] = matrix_to_json(V.form)
    return out


def space_from_json(d: dict) -> sp.SymplecticSpace:
    if "form" in d:
        V = sp.SymplecticSpace(matrix_from_json(d["form"]))
        if "dim" in d and d["dim"] != V.dim:
            raise ValueError("form size does not match dim")
        return V
    if d["dim"] % 2:
        raise ValueError("dim must be even")
    return sp.standard_space(d["dim"] // 2)


def _basis_to_json(b: tuple, nrows: int) -> list:
    return matrix_to_json(b) if b else [[] for _ in range(nrows)]


def lagrangian_to_json(L: sp.LagrangianSubspace) -> dict:
    out = space_to_json(L.space)
    out["basis"] = _basis_to_json(L.basis, L.space.dim)
    return out


def lagrangian_from_json(d: dict) -> sp.LagrangianSubspace:
    V = space_from_json(d)
    rows = d["basis"]
    return sp.LagrangianSubspace(V, matrix_from_json(rows) if rows and rows[0] else ())


def correspondence_to_json(L: sp.LagrangianCorrespondence) -> dict:
    out = {
        "source_dim": L.source.dim,
        "target_dim": L.target.dim,
        "basis": _basis_to_json(L.basis, L.source.dim + L.target.dim),
    }
    if not _is_standard(L.source):
        out["source_form"] = matrix_to_json(L.source.form)
    if not _is_standard(L.target):
        out["target_form"] = matrix_to_json(L.target.form)
    return out


def correspondence_from_json(d: dict) -> sp.LagrangianCorrespondence:
    V0 = space_from_json({"dim": d["source_dim"], **({"form": d["source_form"]} if "source_form" in d else {})})
    V1 = space_from_json({"dim": d["target_dim"], **({"form": d["target_form"]} if "target_form" in d else {})})
    rows = d["basis"]
    return sp.LagrangianCorrespondence.from_basis(V0, V1, matrix_from_json(rows) if rows and rows[0] else ())


def loop_to_json(loop) -> list | dict:
    samples = [_basis_to_json(s.basis, loop.space.dim) for s in loop.samples]
    if _is_standard(loop.space):
        return samples
    return {"form": matrix_to_json(loop.space.form), "samples": samples}


def loop_from_json(d):
    from .maslov import LagrangianLoop

    if isinstance(d, dict):
        V = sp.SymplecticSpace(matrix_from_json(d["form"]))
        samples = d["samples"]
    else:
        samples = d
        if not samples:
            raise ValueError("a loop needs at least one sample")
        V = sp.standard_space(len(samples[0]) // 2)
    return LagrangianLoop(V, tuple(sp.LagrangianSubspace(V, matrix_from_json(s)) for s in samples))


# ---------------------------------------------------------------- graded algebra


def module_to_json(m: gr.GradedModule) -> dict:
    out = {"modulus": m.modulus, "ring": m.ring, "basis": [{"name": n, "deg": d} for n, d in m.basis]}
    if m.factors is not None:
        out["factors"] = [module_to_json(f) for f in m.factors]
    return out


def module_from_json(d: dict, modulus: int | None = None, ring: str | None = None) -> gr.GradedModule:
    N = modulus if modulus is not None else d["modulus"]
    R = ring if ring is not None else d.get("ring", gr.Z)
    factors = None
    if "factors" in d:
        factors = tuple(module_from_json(f, N, R) for f in d["factors"])
    return gr.GradedModule(N, R, tuple((b["name"], b["deg"]) for b in d["basis"]), factors)


def map_to_json(f: gr.GradedMap) -> dict:
    return {
        "source": module_to_json(f.source),
        "target": module_to_json(f.target),
        "degree": f.degree,
        "matrix": [[int(x) for x in row] for row in f.matrix.tolist()],
    }


def _int_matrix(rows, nrows: int, ncols: int) -> np.ndarray:
    m = np.zeros((nrows, ncols), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError("map matrices hold integers")
            m[i, j] = x
    return m


def map_from_json(d: dict, modulus: int | None = None, ring: str | None = None) -> gr.GradedMap:
    src = module_from_json(d["source"], modulus, ring)
    tgt = module_from_json(d["target"], modulus, ring)
    rows = d["matrix"]
    if len(rows) != tgt.rank or any(len(r) != src.rank for r in rows):
        raise ValueError("matrix shape does not match the modules")
    return gr.GradedMap(src, tgt, d["degree"], _int_matrix(rows, tgt.rank, src.rank))


def complex_to_json(c: gr.ChainComplex) -> dict:
    return {"module": module_to_json(c.module), "differential": [[int(x) for x in r] for r in c.differential.matrix.tolist()]}


def complex_from_json(d: dict, modulus: int | None = None, ring: str | None = None) -> gr.ChainComplex:
    m = module_from_json(d["module"], modulus, ring)
    rows = d["differential"]
    if len(rows) != m.rank or any(len(r) != m.rank for r in rows):
        raise ValueError("differential must be square of the module's rank")
    return gr.ChainComplex(m, gr.GradedMap(m, m, 1, _int_matrix(rows, m.rank, m.rank)))


# ---------------------------------------------------------------- quilts


def label_to_json(lab: Label) -> dict:
    out: dict = {"name": lab.name}
    if lab.dims is not None:
        if len(lab.dims) == 2:
            out["dim_pair"] = list(lab.dims)
        else:
            out["dim"] = lab.dims[0]
    if isinstance(lab.concrete, sp.LagrangianCorrespondence):
        out["correspondence"] = correspondence_to_json(lab.concrete)
    elif isinstance(lab.concrete, sp.LagrangianSubspace):
        out["lagrangian"] = lagrangian_to_json(lab.concrete)
    return out


def label_from_json(d: dict) -> Label:
    dims = None
    if "dim_pair" in d:
        dims = tuple(d["dim_pair"])
    elif "dim" in d:
        dims = (d["dim"],)
    concrete = None
    if "correspondence" in d:
        concrete = correspondence_from_json(d["correspondence"])
    elif "lagrangian" in d:
        concrete = lagrangian_from_json(d["lagrangian"])
    return Label(d["name"], dims, concrete)


def _patch_label_to_json(pl: PatchLabel) -> dict:
    out = {"name": pl.name, "dim": pl.dim}
    if pl.space is not None:
        out["form"] = matrix_to_json(pl.space.form)
    return out


def _patch_label_from_json(d: dict) -> PatchLabel:
    space = sp.SymplecticSpace(matrix_from_json(d["form"])) if "form" in d else None
    return PatchLabel(d["name"], d["dim"], space)


def quilt_to_json(q: QuiltedSurface) -> dict:
    patches = []
    for p in q.patches:
        patches.append(
            {
                "id": p.id,
                "genus": p.genus,
                "label": _patch_label_to_json(p.label),
                "circles": [
                    {
                        "id": c.id,
                        "marked": [
                            {"id": m.id, "dir": m.dir, "width": la.format_rational(Fraction(m.width))} for m in c.marked
                        ],
                    }
                    for c in p.circles
                ],
                "interior": [{"dir": d} for d in p.interior],
            }
        )
    return {
        "modulus": q.modulus,
        "patches": patches,
        "seams": [{"a": list(s.a), "b": list(s.b), "label": label_to_json(s.label)} for s in q.seams],
        "boundary_labels": [{"side": list(side), "label": label_to_json(lab)} for side, lab in q.boundary],
        "end_order": {"incoming": [list(r) for r in q.incoming], "outgoing": [list(r) for r in q.outgoing]},
    }


def _side(v) -> tuple:
    if len(v) != 3:
        raise ValueError("a side is [patch, circle, start-or-null]")
    return tuple(v)


def quilt_from_json(d: dict, modulus: int | None = None) -> QuiltedSurface:
    if not isinstance(d, dict) or "patches" not in d:
        raise ValueError("a quilt needs a patches list")
    patches = []
    for p in d["patches"]:
        circles = tuple(
            Circle(c["id"], tuple(MarkedPoint(m["id"], m["dir"], la.parse_rational(m.get("width", "1"))) for m in c.get("marked", [])))
            for c in p.get("circles", [])
        )
        interior = tuple(x["dir"] for x in p.get("interior", []))
        patches.append(Patch(p["id"], _patch_label_from_json(p["label"]), circles, p.get("genus", 0), interior))
    order = d.get("end_order", {})
    return QuiltedSurface(
        patches=tuple(patches),
        seams=tuple(Seam(_side(s["a"]), _side(s["b"]), label_from_json(s["label"])) for s in d.get("seams", [])),
        boundary=tuple((_side(b["side"]), label_from_json(b["label"])) for b in d.get("boundary_labels", [])),
        incoming=tuple(tuple(r) for r in order.get("incoming", [])),
        outgoing=tuple(tuple(r) for r in order.get("outgoing", [])),
        modulus=modulus if modulus is not None else d.get("modulus", 2),
    )


def end_to_json(e) -> dict:
    return {
        "dir": e.dir,
        "cyclic": e.cyclic,
        "points": [list(p) for p in e.points],
        "widths": [la.format_rational(Fraction(w)) for w in e.widths],
        "labels": list(e.label_names()),
    }


def shift_to_json(r) -> dict:
    return {"n": r.n, "d": r.d}


# ---------------------------------------------------------------- expressions and assignments


def expression_from_json(d: dict, fixtures: dict | None = None, modulus: int | None = None):
    """Build an expression tree.

    Leaves are ``{"fixture": name, "args": {...}}`` or ``{"quilt": {...}}``;
    inner nodes are ``{"union": [left, right]}`` and
    ``{"glue": child, "minus": i, "plus": j}``.
    """
    from . import fixtures as fx

    registry = fx.REGISTRY if fixtures is None else fixtures
    if "fixture" in d:
        name = d["fixture"]
        if name not in registry:
            raise KeyError(f"unknown fixture {name!r}")
        value = registry[name]
        q = value(**d.get("args", {})) if callable(value) else value
        if modulus is not None and q.modulus != modulus:
            q = QuiltedSurface(q.patches, q.seams, q.boundary, q.incoming, q.outgoing, modulus)
        return en.Leaf(q)
    if "quilt" in d:
        return en.Leaf(quilt_from_json(d["quilt"], modulus))
    if "union" in d:
        left, right = d["union"]
        return en.Union(expression_from_json(left, fixtures, modulus), expression_from_json(right, fixtures, modulus))
    if "glue" in d:
        return en.Glue(expression_from_json(d["glue"], fixtures, modulus), int(d["minus"]), int(d["plus"]))
    raise ValueError("expression node must have one of fixture, quilt, union, glue")


def _end_key_from_json(d: dict) -> tuple:
    return (bool(d.get("cyclic", False)), tuple(d["labels"]))


def assignment_from_json(d: dict, fixtures: dict | None = None, modulus: int | None = None, ring: str | None = None):
    N = modulus if modulus is not None else d["modulus"]
    R = ring if ring is not None else d.get("ring", gr.Z)
    a = en.GeneratorAssignment(N, R)
    for entry in d.get("modules", []):
        if "cylinder" in entry:
            key = en.cylinder_key(entry["cylinder"])
        else:
            key = _end_key_from_json(entry["end"])
        a.register_module(key, module_from_json(entry["module"], N, R))
    for entry in d.get("eps", []):
        a.eps[_end_key_from_json(entry["end"])] = tuple(entry["signs"])
    for entry in d.get("maps", []):
        q = en.expression_quilt(expression_from_json(entry["quilt"], fixtures, N))
        a.assign(q, map_from_json(entry["map"], N, R))
    return a

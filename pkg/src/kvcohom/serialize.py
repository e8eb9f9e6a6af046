"""Readable JSON files for every object the command line moves around.

Scalars travel as exact-rational strings ("p/q", with "/q" omitted for
integers) so no float ever touches algebraic data, and all indices are
0-based.  Emission is canonical — sorted keys, two-space indent, one
trailing newline — so equal objects always produce identical bytes.
Parsing is strict: wrong keys, wrong shapes, floats, or malformed
rational strings raise InputError rather than being coerced.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .core import KVAlgebra, KVModule, Tensor3, tensor3
from .complexes import Cochain
from .deform import MultiplicationJet
from .errors import InputError
from .extensions import AlgebraExtension, ModuleExtension
from .graded import GradedKVAlgebra
from .linalg import Mat, Vec, vec

__all__ = [
    "format_rat",
    "parse_rat",
    "tensor3_to_obj",
    "tensor3_from_obj",
    "matrix_to_obj",
    "matrix_from_obj",
    "vector_to_obj",
    "vector_from_obj",
    "algebra_to_obj",
    "algebra_from_obj",
    "module_to_obj",
    "module_from_obj",
    "cochain_to_obj",
    "cochain_from_obj",
    "jet_to_obj",
    "jet_from_obj",
    "graded_to_obj",
    "graded_from_obj",
    "extension_to_obj",
    "extension_from_obj",
    "canonical_json",
    "read_json",
    "write_text",
    "load_algebra",
    "load_module",
    "load_cochain",
    "load_jet",
    "load_graded",
    "load_tensor3",
    "load_extension",
]

_RAT_GRAMMAR = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?\Z")


def format_rat(x: Fraction) -> str:
    """Canonical "p/q" form; the denominator is omitted when it is 1."""
    return str(x)


def parse_rat(x: Any) -> Fraction:
    """An exact rational from a JSON scalar.

    Accepts integers and strings matching the "p/q" grammar (q positive).
    Everything else — floats above all — is rejected.
    """
    if isinstance(x, bool):
        raise InputError(f"expected a rational, got the boolean {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if not _RAT_GRAMMAR.match(x):
            raise InputError(f"malformed rational string {x!r}; expected \"p/q\"")
        return Fraction(x)
    raise InputError(f"expected a rational string, got {type(x).__name__}")


def _rat_row(obj: Any, length: int, what: str) -> list[Fraction]:
    if not isinstance(obj, list) or len(obj) != length:
        raise InputError(f"{what} must be an array of {length} rationals")
    return [parse_rat(x) for x in obj]


def tensor3_to_obj(t: Tensor3) -> list:
    return [[[format_rat(x) for x in row] for row in plane] for plane in t]


def tensor3_from_obj(obj: Any, d1: int, d2: int, d3: int, what: str) -> Tensor3:
    if not isinstance(obj, list) or len(obj) != d1:
        raise InputError(f"{what} must be a {d1}x{d2}x{d3} nested array")
    planes = []
    for plane in obj:
        if not isinstance(plane, list) or len(plane) != d2:
            raise InputError(f"{what} must be a {d1}x{d2}x{d3} nested array")
        planes.append([_rat_row(row, d3, what) for row in plane])
    return tensor3(planes)


def matrix_to_obj(m: Mat) -> list:
    return [[format_rat(x) for x in m.row(i)] for i in range(m.rows)]


def matrix_from_obj(obj: Any, rows: int, cols: int, what: str) -> Mat:
    if not isinstance(obj, list) or len(obj) != rows:
        raise InputError(f"{what} must be a {rows}x{cols} matrix")
    return Mat.from_rows([_rat_row(r, cols, what) for r in obj], cols=cols)


def vector_to_obj(v: Vec) -> list:
    return [format_rat(x) for x in v]


def vector_from_obj(obj: Any, length: int, what: str) -> Vec:
    return tuple(_rat_row(obj, length, what))


def _require_keys(obj: Any, required: Sequence[str], optional: Sequence[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise InputError(f"{what} is missing keys: {', '.join(missing)}")
    unknown = sorted(k for k in obj if k not in required and k not in optional)
    if unknown:
        raise InputError(f"{what} has unexpected keys: {', '.join(unknown)}")


def _dim_of(obj: dict, what: str) -> int:
    d = obj["dim"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 0:
        raise InputError(f"{what} \"dim\" must be a non-negative integer")
    return d


def algebra_to_obj(a: KVAlgebra) -> dict:
    out: dict = {"dim": a.dim, "product": tensor3_to_obj(a.product)}
    if a.name is not None:
        out["name"] = a.name
    return out


def algebra_from_obj(obj: Any) -> KVAlgebra:
    _require_keys(obj, ["dim", "product"], ["name"], "algebra")
    n = _dim_of(obj, "algebra")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("algebra \"name\" must be a string")
    return KVAlgebra(
        dim=n,
        product=tensor3_from_obj(obj["product"], n, n, n, "algebra product"),
        name=name,
    )


def module_to_obj(w: KVModule) -> dict:
    """Self-contained module file body; the base algebra rides along inline."""
    return {
        "dim": w.dim,
        "algebra": algebra_to_obj(w.algebra),
        "left": tensor3_to_obj(w.left),
        "right": tensor3_to_obj(w.right),
    }


def module_from_obj(
    obj: Any,
    *,
    algebra: Optional[KVAlgebra] = None,
    base_dir: Optional[Path] = None,
) -> KVModule:
    """Parse a module body.

    The "algebra" field may be inline, a path string (resolved against
    base_dir), or omitted entirely when a surrounding context already
    supplies the algebra.  A context algebra, when given, must agree with
    whatever the file carries.
    """
    _require_keys(obj, ["dim", "left", "right"], ["algebra"], "module")
    m = _dim_of(obj, "module")
    carried: Optional[KVAlgebra] = None
    spec = obj.get("algebra")
    if isinstance(spec, dict):
        carried = algebra_from_obj(spec)
    elif isinstance(spec, str):
        if base_dir is None:
            raise InputError(
                "module refers to an algebra by path, which only works when "
                "loading from a file"
            )
        carried = load_algebra(base_dir / spec)
    elif spec is not None:
        raise InputError("module \"algebra\" must be an object or a path string")
    if carried is not None and algebra is not None and carried != algebra:
        raise InputError("module file carries a different algebra than expected")
    base = carried if carried is not None else algebra
    if base is None:
        raise InputError("module needs an \"algebra\" field (none supplied)")
    n = base.dim
    return KVModule(
        algebra=base,
        dim=m,
        left=tensor3_from_obj(obj["left"], n, m, m, "module left action"),
        right=tensor3_from_obj(obj["right"], m, n, m, "module right action"),
    )


def cochain_to_obj(f: Cochain) -> dict:
    """Degree and flat values only; the carrying (A, W) is context."""
    return {"degree": f.degree, "values": [format_rat(x) for x in f.values]}


def cochain_from_obj(obj: Any, a: KVAlgebra, w: KVModule) -> Cochain:
    _require_keys(obj, ["degree", "values"], [], "cochain")
    q = obj["degree"]
    if isinstance(q, bool) or not isinstance(q, int) or q < 0:
        raise InputError("cochain \"degree\" must be a non-negative integer")
    expected = a.dim**q * w.dim
    values = _rat_row(obj["values"], expected, f"degree-{q} cochain values")
    return Cochain(a, w, q, tuple(values))


def jet_to_obj(jet: MultiplicationJet) -> dict:
    return {
        "base": algebra_to_obj(jet.base),
        "coefficients": [tensor3_to_obj(c) for c in jet.coefficients],
    }


def jet_from_obj(obj: Any) -> MultiplicationJet:
    _require_keys(obj, ["base", "coefficients"], [], "jet")
    base = algebra_from_obj(obj["base"])
    coeffs = obj["coefficients"]
    if not isinstance(coeffs, list):
        raise InputError("jet \"coefficients\" must be an array of tensors")
    n = base.dim
    return MultiplicationJet(
        base,
        tuple(
            tensor3_from_obj(c, n, n, n, f"jet coefficient {k + 1}")
            for k, c in enumerate(coeffs)
        ),
    )


def graded_to_obj(g: GradedKVAlgebra) -> dict:
    return {"even": algebra_to_obj(g.even), "odd": module_to_obj(g.odd)}


def graded_from_obj(obj: Any) -> GradedKVAlgebra:
    _require_keys(obj, ["even", "odd"], [], "graded algebra")
    even = algebra_from_obj(obj["even"])
    odd = module_from_obj(obj["odd"], algebra=even)
    return GradedKVAlgebra(even=even, odd=odd)


def extension_to_obj(ext) -> dict:
    """File body for an extension: the spaces plus the structural matrices."""
    if isinstance(ext, AlgebraExtension):
        return {
            "kind": "algebra",
            "base": algebra_to_obj(ext.base),
            "kernel": module_to_obj(ext.kernel),
            "total": algebra_to_obj(ext.total),
            "injection": matrix_to_obj(ext.injection()),
            "projection": matrix_to_obj(ext.projection()),
            "section": matrix_to_obj(ext.canonical_section()),
        }
    if isinstance(ext, ModuleExtension):
        return {
            "kind": "module",
            "base": algebra_to_obj(ext.base),
            "kernel": module_to_obj(ext.kernel),
            "quotient": module_to_obj(ext.quotient),
            "total": module_to_obj(ext.total),
            "injection": matrix_to_obj(ext.injection()),
            "projection": matrix_to_obj(ext.projection()),
            "section": matrix_to_obj(ext.canonical_section()),
        }
    raise InputError(f"cannot serialize {type(ext).__name__} as an extension")


def _check_matrix(obj: dict, key: str, want: Mat, what: str) -> None:
    got = matrix_from_obj(obj[key], want.rows, want.cols, f"{what} {key}")
    if got != want:
        raise InputError(
            f"{what} {key} does not match the block layout of the total space"
        )


def extension_from_obj(obj: Any):
    """Parse an extension file into the matching extension object.

    The kernel (and quotient) blocks of the total space are checked
    against the carried pieces entry by entry, and the three matrices
    must equal the canonical block maps; anything else is rejected, since
    the builders only ever produce block-form totals.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("extension must be an object with a \"kind\" field")
    kind = obj["kind"]
    common = ["kind", "base", "kernel", "total", "injection", "projection", "section"]
    if kind == "algebra":
        _require_keys(obj, common, [], "algebra extension")
        base = algebra_from_obj(obj["base"])
        kernel = module_from_obj(obj["kernel"], algebra=base)
        total = algebra_from_obj(obj["total"])
        n, m = base.dim, kernel.dim
        if total.dim != n + m:
            raise InputError("total algebra dimension must be dim base + dim kernel")
        ext = AlgebraExtension(base=base, kernel=kernel, total=total)
        for i in range(n):
            for j in range(n):
                if total.product[m + i][m + j][m:] != base.product[i][j]:
                    raise InputError("total product does not project onto the base")
            for al in range(m):
                if (
                    total.product[m + i][al][:m] != kernel.left[i][al]
                    or any(x != 0 for x in total.product[m + i][al][m:])
                    or total.product[al][m + i][:m] != kernel.right[al][i]
                    or any(x != 0 for x in total.product[al][m + i][m:])
                ):
                    raise InputError(
                        "total product does not restrict to the kernel actions"
                    )
        for al in range(m):
            for be in range(m):
                if any(x != 0 for x in total.product[al][be]):
                    raise InputError("the kernel must square to zero in the total")
    elif kind == "module":
        _require_keys(obj, common + ["quotient"], [], "module extension")
        base = algebra_from_obj(obj["base"])
        kernel = module_from_obj(obj["kernel"], algebra=base)
        quotient = module_from_obj(obj["quotient"], algebra=base)
        total = module_from_obj(obj["total"], algebra=base)
        v, m = kernel.dim, quotient.dim
        if total.dim != v + m:
            raise InputError(
                "total module dimension must be dim kernel + dim quotient"
            )
        ext = ModuleExtension(base=base, kernel=kernel, quotient=quotient, total=total)
        for i in range(base.dim):
            for ga in range(v):
                if (
                    total.left[i][ga][:v] != kernel.left[i][ga]
                    or any(x != 0 for x in total.left[i][ga][v:])
                    or total.right[ga][i][:v] != kernel.right[ga][i]
                    or any(x != 0 for x in total.right[ga][i][v:])
                ):
                    raise InputError(
                        "total actions do not restrict to the kernel module"
                    )
            for al in range(m):
                if (
                    total.left[i][v + al][v:] != quotient.left[i][al]
                    or total.right[v + al][i][v:] != quotient.right[al][i]
                ):
                    raise InputError(
                        "total actions do not project onto the quotient module"
                    )
    else:
        raise InputError(f"unknown extension kind {kind!r}")
    _check_matrix(obj, "injection", ext.injection(), f"{kind} extension")
    _check_matrix(obj, "projection", ext.projection(), f"{kind} extension")
    _check_matrix(obj, "section", ext.canonical_section(), f"{kind} extension")
    return ext


def canonical_json(obj: Any) -> str:
    """The one serialization every file and report uses."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p} is not valid JSON: {exc}") from None


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def load_algebra(path) -> KVAlgebra:
    return algebra_from_obj(read_json(path))


def load_module(path, *, algebra: Optional[KVAlgebra] = None) -> KVModule:
    return module_from_obj(
        read_json(path), algebra=algebra, base_dir=Path(path).parent
    )


def load_cochain(path, a: KVAlgebra, w: KVModule) -> Cochain:
    return cochain_from_obj(read_json(path), a, w)


def load_jet(path) -> MultiplicationJet:
    return jet_from_obj(read_json(path))


def load_graded(path) -> GradedKVAlgebra:
    return graded_from_obj(read_json(path))


def load_tensor3(path, d1: int, d2: int, d3: int, what: str) -> Tensor3:
    obj = read_json(path)
    _require_keys(obj, ["tensor"], [], what)
    return tensor3_from_obj(obj["tensor"], d1, d2, d3, what)


def load_extension(path):
    return extension_from_obj(read_json(path))

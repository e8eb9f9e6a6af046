"""Verb-dispatched command line over the whole library.

Every verb reads JSON files (see serialize), computes exactly, and emits
one deterministic artifact: a canonical JSON report for algebraic verbs,
a CSV trajectory for the integrator, or a fixture file.  Identical
inputs, flags, and seeds produce byte-identical output.

Exit codes: 0 when the verb's verdict holds (or the verb is a pure
query), 1 on a mathematical failure with a witness in the report, 2 on
malformed input, 3 when a computation would exceed the cell budget.  A
mathematical failure is never reported as an input error: well-formed
files describing objects that flunk an identity exit with 1.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

from . import serialize as sz
from .battery import run_battery
from .complexes import CohomologyReport, cohomology, nijenhuis_cohomology
from .core import (
    CheckResult,
    KVAlgebra,
    KVModule,
    is_kv,
    is_module,
    jacobi_algebra,
    jacobi_module,
    lie_bracket,
    regular_bimodule,
)
from .complexes import is_cocycle
from .deform import (
    bilinear_cochain,
    curvature_check,
    jet_check,
    rigidity_report,
    solve_next_order,
)
from .errors import BudgetError, DimensionError, InputError, PreconditionError
from .extensions import (
    BigradedCochain,
    algebra_extension_from_cocycle,
    algebra_cocycle_from_section,
    algebra_extensions_equivalent,
    cocycle_from_section,
    extend_module_to_semidirect,
    extensions_equivalent,
    module_extension_from_cocycle,
)
from .fixtures import (
    algebra_fixture,
    algebra_fixture_names,
    flat_polynomial_module,
    graded_flat,
    obstructed_jet,
    rad2_left_module,
)
from .geom import (
    GeodesicProblem,
    STEP_UNDERFLOW,
    aff_algebra,
    find_radiant,
    integrate_geodesic,
    pencil_suite,
)
from .graded import (
    ConnectionlikePair,
    deform_graded,
    is_connectionlike,
    is_kv_chain,
    is_theta_cocycle,
)
from .core import semidirect
from .linalg import Subspace

__all__ = ["FORMAT_VERSION", "JobSpec", "Report", "run", "main"]

FORMAT_VERSION = 1

_EXIT_OK = 0
_EXIT_MATH = 1
_EXIT_INPUT = 2
_EXIT_BUDGET = 3


@dataclass(frozen=True)
class JobSpec:
    """One invocation: the verb plus its flag values (paths stay strings)."""

    verb: str
    options: dict

    def opt(self, key: str, default: Any = None) -> Any:
        return self.options.get(key, default)


@dataclass(frozen=True)
class Report:
    """What a verb produced: the exact output text and the exit code."""

    verb: str
    exit_code: int
    text: str
    body: Optional[dict] = None


class _MathFailure(Exception):
    """Internal: a well-formed input flunked the identity the verb decides."""

    def __init__(self, message: str, results: Optional[dict] = None):
        super().__init__(message)
        self.results = results or {}


def _read_file_bytes(path: str, inputs: dict, key: str) -> bytes:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    inputs[key] = {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}
    return data


def _read_json_file(path: str, inputs: dict, key: str) -> Any:
    data = _read_file_bytes(path, inputs, key)
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path} is not valid UTF-8 JSON: {exc}") from None


def _load_algebra(path: str, inputs: dict, key: str = "algebra") -> KVAlgebra:
    return sz.algebra_from_obj(_read_json_file(path, inputs, key))


def _load_module(
    path: str, inputs: dict, key: str, algebra: Optional[KVAlgebra] = None
) -> KVModule:
    return sz.module_from_obj(
        _read_json_file(path, inputs, key),
        algebra=algebra,
        base_dir=Path(path).parent,
    )


def _load_tensor3(path: str, inputs: dict, key: str, d1: int, d2: int, d3: int):
    obj = _read_json_file(path, inputs, key)
    if not isinstance(obj, dict) or set(obj) != {"tensor"}:
        raise InputError(
            f"{key} file must be an object with a single \"tensor\" key"
        )
    return sz.tensor3_from_obj(obj["tensor"], d1, d2, d3, key)


def _check_to_obj(c: CheckResult) -> dict:
    out: dict = {"ok": bool(c)}
    if c.witness is not None:
        out["witness"] = list(c.witness)
    if c.detail is not None:
        out["detail"] = c.detail
    return out


def _subspace_to_obj(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": [sz.vector_to_obj(v) for v in s.basis]}


def _cohomology_to_obj(rep: CohomologyReport) -> list:
    return [
        {
            "degree": d.degree,
            "dim_C": d.dim_C,
            "dim_Z": d.dim_Z,
            "dim_B": d.dim_B,
            "dim_H": d.dim_H,
            "representatives": [sz.cochain_to_obj(r) for r in d.representatives],
        }
        for d in rep.degrees
    ]


def _module_or_regular(
    job: JobSpec, a: KVAlgebra, inputs: dict, parameters: dict
) -> KVModule:
    path = job.opt("module")
    if path is None:
        parameters["module"] = "regular"
        return regular_bimodule(a)
    return _load_module(path, inputs, "module", algebra=None)


# ---------------------------------------------------------------------------
# verb handlers: fill results/parameters, return (verdict, witness); a
# verdict of None means "pure query" and always exits 0.


def _verb_verify(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    kv = is_kv(a)
    results["is_kv"] = _check_to_obj(kv)
    verdict = bool(kv)
    witness = kv.detail if not kv else None
    if job.opt("module") is not None:
        w = _load_module(job.options["module"], inputs, "module")
        if w.algebra != a:
            raise InputError("module file is over a different algebra")
        mod = is_module(a, w)
        results["is_module"] = _check_to_obj(mod)
        if verdict and not mod:
            witness = mod.detail
        verdict = verdict and bool(mod)
    return verdict, witness


def _verb_jacobi(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    results["algebra_jacobi"] = _subspace_to_obj(jacobi_algebra(a))
    if job.opt("module") is not None:
        w = _load_module(job.options["module"], inputs, "module", algebra=None)
        if w.algebra != a:
            raise InputError("module file is over a different algebra")
        results["module_jacobi"] = _subspace_to_obj(jacobi_module(a, w))
    return None, None


def _verb_cohomology(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    w = _module_or_regular(job, a, inputs, parameters)
    if w.algebra != a:
        raise InputError("module file is over a different algebra")
    q_max = job.opt("q_max", 2)
    parameters["q_max"] = q_max
    budget = job.opt("budget")
    if budget is not None:
        parameters["budget"] = budget
    rep = cohomology(a, w, q_max, budget=budget)
    results["degrees"] = _cohomology_to_obj(rep)
    return None, None


def _verb_nijenhuis(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    w = _module_or_regular(job, a, inputs, parameters)
    if w.algebra != a:
        raise InputError("module file is over a different algebra")
    q_max = job.opt("q_max", 2)
    parameters["q_max"] = q_max
    rep = nijenhuis_cohomology(a, w, q_max)
    results["degrees"] = _cohomology_to_obj(rep)
    consistent = all(d.dim_H == d.dim_Z - d.dim_B for d in rep.degrees)
    results["rank_nullity_consistent"] = consistent
    return consistent, None if consistent else "dim_H != dim_Z - dim_B"


def _verb_extend_algebra(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    w = _load_module(job.options["module"], inputs, "module")
    if w.algebra != a:
        raise InputError("module file is over a different algebra")
    mod = is_module(a, w)
    if not mod:
        raise _MathFailure(f"coefficients are not a module: {mod.detail}")
    omega = sz.cochain_from_obj(
        _read_json_file(job.options["cochain"], inputs, "cochain"), a, w
    )
    if omega.degree != 2:
        raise InputError("algebra extensions need a degree-2 cochain")
    ext = algebra_extension_from_cocycle(a, w, omega)
    total_kv = is_kv(ext.total)
    results["total_is_kv"] = _check_to_obj(total_kv)
    if not total_kv:
        results["extension"] = sz.extension_to_obj(ext)
        raise _MathFailure(
            f"the cochain is not a cocycle: total product fails at "
            f"{total_kv.witness}",
            results,
        )
    results["extension"] = sz.extension_to_obj(ext)
    recovered = algebra_cocycle_from_section(ext, ext.canonical_section())
    results["section_cocycle_matches"] = recovered == omega
    _maybe_emit(job, sz.canonical_json(sz.extension_to_obj(ext)))
    return True, None


def _verb_extend_module(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    v = _load_module(job.options["kernel"], inputs, "kernel")
    w = _load_module(job.options["quotient"], inputs, "quotient")
    if v.algebra != a or w.algebra != a:
        raise InputError("kernel and quotient must be modules over the algebra")
    for name, mod in (("kernel", v), ("quotient", w)):
        verdict = is_module(a, mod)
        if not verdict:
            raise _MathFailure(f"{name} is not a module: {verdict.detail}")
    g = semidirect(a, w)
    vt = extend_module_to_semidirect(g, a.dim, v)
    raw = sz.cochain_from_obj(
        _read_json_file(job.options["cochain"], inputs, "cochain"), g, vt
    )
    if raw.degree != 2:
        raise InputError("module extensions need a degree-2 cochain")
    f = BigradedCochain(raw, a.dim, 1, 1)
    try:
        ext = module_extension_from_cocycle(a, w, v, f)
    except PreconditionError as exc:
        raise _MathFailure(str(exc)) from None
    results["extension"] = sz.extension_to_obj(ext)
    recovered = cocycle_from_section(ext, ext.canonical_section())
    results["section_cocycle_matches"] = recovered.cochain == raw
    _maybe_emit(job, sz.canonical_json(sz.extension_to_obj(ext)))
    return True, None


def _verb_classify_ext(job, inputs, parameters, results):
    obj1 = _read_json_file(job.options["ext1"], inputs, "ext1")
    obj2 = _read_json_file(job.options["ext2"], inputs, "ext2")
    e1 = sz.extension_from_obj(obj1)
    e2 = sz.extension_from_obj(obj2)
    if obj1["kind"] != obj2["kind"]:
        raise InputError("extensions have different kinds")
    results["kind"] = obj1["kind"]
    if obj1["kind"] == "algebra":
        if e1.base != e2.base or e1.kernel != e2.kernel:
            raise InputError("extensions live over different base data")
        shear = algebra_extensions_equivalent(e1, e2)
        results["equivalent"] = shear is not None
        results["shear"] = None if shear is None else sz.matrix_to_obj(shear)
    else:
        if (
            e1.base != e2.base
            or e1.kernel != e2.kernel
            or e1.quotient != e2.quotient
        ):
            raise InputError("extensions live over different base data")
        f1 = cocycle_from_section(e1, e1.canonical_section())
        f2 = cocycle_from_section(e2, e2.canonical_section())
        results["equivalent"] = extensions_equivalent(f1, f2)
    return None, None


def _verb_deform_check(job, inputs, parameters, results):
    jet = sz.jet_from_obj(_read_json_file(job.options["jet"], inputs, "jet"))
    verdict = jet_check(jet)
    results["order"] = jet.order
    results["residuals_zero"] = _check_to_obj(verdict)
    return bool(verdict), verdict.detail if not verdict else None


def _verb_deform_solve(job, inputs, parameters, results):
    jet = sz.jet_from_obj(_read_json_file(job.options["jet"], inputs, "jet"))
    orders = job.opt("orders", 1)
    if orders < 1:
        raise InputError("--orders must be at least 1")
    parameters["orders"] = orders
    steps = []
    witness = None
    for _ in range(orders):
        try:
            sol = solve_next_order(jet)
        except PreconditionError as exc:
            raise _MathFailure(str(exc), results) from None
        step = {
            "order": sol.order,
            "target_is_cocycle": sol.target_is_cocycle,
            "solved": sol.solved,
        }
        if sol.solved:
            step["coefficient"] = sz.tensor3_to_obj(sol.coefficient)
            jet = sol.extended
        else:
            step["certificate"] = sz.vector_to_obj(sol.certificate)
            witness = (
                f"order {sol.order} is obstructed: a functional vanishing on "
                f"every coboundary pairs nonzero with the target"
            )
        steps.append(step)
        if witness is not None:
            break
    results["steps"] = steps
    solved_all = witness is None
    if solved_all:
        results["jet"] = sz.jet_to_obj(jet)
        _maybe_emit(job, sz.canonical_json(sz.jet_to_obj(jet)))
    return solved_all, witness


def _verb_rigidity(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    rep = rigidity_report(a)
    results.update(
        {
            "dim_C2": rep.dim_C2,
            "dim_Z2": rep.dim_Z2,
            "dim_B2": rep.dim_B2,
            "dim_H2": rep.dim_H2,
            "rigid": rep.rigid,
            "class_representatives": [
                sz.tensor3_to_obj(t) for t in rep.class_representatives
            ],
        }
    )
    return None, None


def _verb_curvature_check(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    n = a.dim
    s = _load_tensor3(job.options["tensor"], inputs, "tensor", n, n, n)
    residual = curvature_check(a, s)
    flat = [x for q in residual for p in q for r in p for x in r]
    residual_zero = all(x == 0 for x in flat)
    cocycle = is_cocycle(bilinear_cochain(a, s))
    results["residual_zero"] = residual_zero
    results["s_is_cocycle"] = cocycle
    results["flat_iff_cocycle"] = residual_zero == cocycle
    return (
        residual_zero == cocycle,
        None if residual_zero == cocycle else "curvature and cocycle disagree",
    )


def _verb_graded_check(job, inputs, parameters, results):
    obj = _read_json_file(job.options["graded"], inputs, "graded")
    try:
        g = sz.graded_from_obj(obj)
    except PreconditionError as exc:
        raise _MathFailure(str(exc)) from None
    results["even_dim"] = g.n
    results["odd_dim"] = g.m
    results["total_is_kv"] = True
    return True, None


def _verb_graded_deform(job, inputs, parameters, results):
    g = sz.graded_from_obj(_read_json_file(job.options["graded"], inputs, "graded"))
    theta = _load_tensor3(job.options["theta"], inputs, "theta", g.m, g.m, g.m)
    cocycle = is_theta_cocycle(g, theta)
    chain = is_kv_chain(theta)
    results["theta_is_cocycle"] = _check_to_obj(cocycle)
    results["theta_is_chain"] = _check_to_obj(chain)
    if not (cocycle and chain):
        bad = cocycle if not cocycle else chain
        raise _MathFailure(
            f"theta does not deform: {bad.detail or 'fails the graded conditions'}",
            results,
        )
    deformed = deform_graded(g, theta)
    results["deformed"] = sz.algebra_to_obj(deformed)
    _maybe_emit(job, sz.canonical_json(sz.algebra_to_obj(deformed)))
    return True, None


def _verb_connectionlike(job, inputs, parameters, results):
    g = sz.graded_from_obj(_read_json_file(job.options["graded"], inputs, "graded"))
    theta = _load_tensor3(job.options["theta"], inputs, "theta", g.m, g.m, g.m)
    psi = _load_tensor3(job.options["psi"], inputs, "psi", g.n, g.m, g.n)
    rep = is_connectionlike(g, ConnectionlikePair(theta, psi))
    results.update(
        {
            "psi_symmetric": _check_to_obj(rep.psi_symmetric),
            "theta_cocycle": _check_to_obj(rep.theta_cocycle),
            "theta_psi_compat": _check_to_obj(rep.theta_psi_compat),
            "theta_psi_compat_alt": _check_to_obj(rep.theta_psi_compat_alt),
            "flow_rule_even": _check_to_obj(rep.flow_rule_even),
            "derivation_rule": _check_to_obj(rep.derivation_rule),
            "degenerate": rep.degenerate,
            "holds": rep.holds,
        }
    )
    if not rep.holds:
        for name in ("psi_symmetric", "theta_cocycle", "theta_psi_compat"):
            check = getattr(rep, name)
            if not check:
                return False, f"{name} fails: {check.detail}"
    return rep.holds, None


def _verb_aff_suite(job, inputs, parameters, results):
    alpha = sz.parse_rat(job.opt("alpha", "1"))
    beta = sz.parse_rat(job.opt("beta", "0"))
    parameters["alpha"] = sz.format_rat(alpha)
    parameters["beta"] = sz.format_rat(beta)
    a = aff_algebra()
    kv = is_kv(a)
    jac = jacobi_algebra(a)
    h0 = cohomology(a, regular_bimodule(a), 0).degree(0).dim_H
    lb = lie_bracket(a)
    bracket_e1_e2 = lb[0][1]
    results["is_kv"] = bool(kv)
    results["jacobi"] = _subspace_to_obj(jac)
    results["h0_regular"] = h0
    results["bracket_e1_e2"] = sz.vector_to_obj(bracket_e1_e2)
    suite = pencil_suite(alpha, beta)
    results["pencil"] = {
        "alpha": sz.format_rat(alpha),
        "beta": sz.format_rat(beta),
        "cocycle": suite.cocycle,
        "square_zero": suite.square_zero,
        "nontrivial": suite.nontrivial,
    }
    expectations = (
        (bool(kv), "the base product is not KV"),
        (jac.dim == 1 and jac.contains((Fraction(1), Fraction(0))),
         "Jacobi space is not span{e_1}"),
        (h0 == 0, "H^0 with regular coefficients is nonzero"),
        (bracket_e1_e2 == (Fraction(0), Fraction(1)),
         "[e_1, e_2] is not e_2"),
        (suite.cocycle, "the pencil cochain is not a cocycle"),
        (suite.square_zero, "the pencil self-bracket is nonzero"),
    )
    for ok, message in expectations:
        if not ok:
            return False, message
    return True, None


def _format_float(x: float) -> str:
    return repr(float(x))


def _parse_number(text: str, what: str) -> Fraction:
    """Exact when the flag looks rational, Fraction-of-float otherwise."""
    try:
        return sz.parse_rat(text)
    except InputError:
        pass
    try:
        return Fraction(float(text))
    except (ValueError, OverflowError):
        raise InputError(f"{what} must be a number, got {text!r}") from None


def _verb_geodesic(job, inputs, parameters, results):
    def flt(key: str, default: Optional[float] = None) -> float:
        raw = job.opt(key, default)
        if raw is None:
            raise InputError(f"--{key.replace('_', '-')} is required")
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise InputError(f"--{key} must be a float, got {raw!r}") from None

    problem = GeodesicProblem(
        alpha=_parse_number(str(job.opt("alpha", "0")), "--alpha"),
        beta=_parse_number(str(job.opt("beta", "0")), "--beta"),
        x0=flt("x0", 0.0),
        y0=flt("y0", 0.0),
        vx0=flt("vx0", 1.0),
        vy0=flt("vy0", 0.0),
        t0=flt("t0", 0.0),
        t1=flt("t1", 1.0),
        step=flt("step", 1e-3),
    )
    trajectory = integrate_geodesic(problem)
    lines = [f"# termination: {trajectory.termination}"]
    if trajectory.blowup_time is not None:
        lines.append(f"# blowup_time: {_format_float(trajectory.blowup_time)}")
        lines.append("# blowup_time_abs_tol: 1e-06")
    lines.append("t,x,y,vx,vy")
    for s in trajectory.samples:
        lines.append(",".join(_format_float(c) for c in s))
    text = "\n".join(lines) + "\n"
    if trajectory.termination == STEP_UNDERFLOW:
        raise _MathFailure(
            "the integrator could not advance past "
            f"t = {trajectory.final[0]!r} at the smallest resolvable step"
        )
    return text


def _verb_radiant(job, inputs, parameters, results):
    a = _load_algebra(job.options["algebra"], inputs)
    sols = find_radiant(a)
    results["exists"] = bool(sols)
    results["unique"] = sols.unique
    results["particular"] = (
        None if sols.particular is None else sz.vector_to_obj(sols.particular)
    )
    results["homogeneous"] = _subspace_to_obj(sols.homogeneous)
    return None, None


def _verb_proptest(job, inputs, parameters, results):
    seed = job.opt("seed", 0)
    count = job.opt("count", 20)
    if count < 1:
        raise InputError("--count must be at least 1")
    parameters["seed"] = seed
    parameters["count"] = count
    rep = run_battery(seed, count)
    results.update(rep.to_obj())
    if not rep.passed:
        first = rep.failures[0]
        return False, f"{first.invariant} (instance {first.instance}): {first.witness}"
    return True, None


_FIXTURE_EXTRAS: dict[str, Callable[[], str]] = {
    "graded-flat": lambda: sz.canonical_json(sz.graded_to_obj(graded_flat())),
    "rad2-left": lambda: sz.canonical_json(sz.module_to_obj(rad2_left_module())),
    "flat-poly": lambda: sz.canonical_json(
        sz.module_to_obj(flat_polynomial_module())
    ),
    "jet-obstructed": lambda: sz.canonical_json(sz.jet_to_obj(obstructed_jet())),
}


def fixture_names() -> list[str]:
    return sorted(algebra_fixture_names() + list(_FIXTURE_EXTRAS))


def _verb_fixtures(job, inputs, parameters, results):
    name = job.options["name"]
    if name in _FIXTURE_EXTRAS:
        return _FIXTURE_EXTRAS[name]()
    if name in algebra_fixture_names():
        return sz.canonical_json(sz.algebra_to_obj(algebra_fixture(name)))
    raise InputError(
        f"unknown fixture {name!r}; known: {', '.join(fixture_names())}"
    )


_HANDLERS = {
    "verify": _verb_verify,
    "jacobi": _verb_jacobi,
    "cohomology": _verb_cohomology,
    "nijenhuis": _verb_nijenhuis,
    "extend-algebra": _verb_extend_algebra,
    "extend-module": _verb_extend_module,
    "classify-ext": _verb_classify_ext,
    "deform-check": _verb_deform_check,
    "deform-solve": _verb_deform_solve,
    "rigidity": _verb_rigidity,
    "curvature-check": _verb_curvature_check,
    "graded-check": _verb_graded_check,
    "graded-deform": _verb_graded_deform,
    "connectionlike": _verb_connectionlike,
    "aff-suite": _verb_aff_suite,
    "geodesic": _verb_geodesic,
    "radiant": _verb_radiant,
    "proptest": _verb_proptest,
    "fixtures": _verb_fixtures,
}

# Verbs whose primary artifact is a raw text stream, not a JSON report.
_TEXT_VERBS = {"geodesic", "fixtures"}


def _maybe_emit(job: JobSpec, text: str) -> None:
    path = job.opt("emit")
    if path is not None:
        sz.write_text(path, text)


def _error_report(verb: str, kind: str, message: str, exit_code: int) -> Report:
    body = {
        "format_version": FORMAT_VERSION,
        "verb": verb,
        "error": {"kind": kind, "message": message},
    }
    return Report(verb, exit_code, sz.canonical_json(body), body)


def run(job: JobSpec) -> Report:
    """Execute one job; never raises for input or mathematical trouble."""
    handler = _HANDLERS.get(job.verb)
    if handler is None:
        return _error_report(
            job.verb, "input", f"unknown verb {job.verb!r}", _EXIT_INPUT
        )
    inputs: dict = {}
    parameters: dict = {}
    results: dict = {}
    try:
        outcome = handler(job, inputs, parameters, results)
    except _MathFailure as exc:
        body = {
            "format_version": FORMAT_VERSION,
            "verb": job.verb,
            "inputs": inputs,
            "parameters": parameters,
            "results": exc.results or results,
            "verdict": False,
            "witness": str(exc),
        }
        return Report(job.verb, _EXIT_MATH, sz.canonical_json(body), body)
    except PreconditionError as exc:
        body = {
            "format_version": FORMAT_VERSION,
            "verb": job.verb,
            "inputs": inputs,
            "parameters": parameters,
            "results": results,
            "verdict": False,
            "witness": str(exc),
        }
        return Report(job.verb, _EXIT_MATH, sz.canonical_json(body), body)
    except BudgetError as exc:
        return _error_report(job.verb, "budget", str(exc), _EXIT_BUDGET)
    except (InputError, DimensionError) as exc:
        return _error_report(job.verb, "input", str(exc), _EXIT_INPUT)
    if isinstance(outcome, str):
        # raw artifact (CSV trajectory or fixture file)
        return Report(job.verb, _EXIT_OK, outcome, None)
    verdict, witness = outcome
    body = {
        "format_version": FORMAT_VERSION,
        "verb": job.verb,
        "inputs": inputs,
        "parameters": parameters,
        "results": results,
        "verdict": verdict,
    }
    if witness is not None:
        body["witness"] = witness
    exit_code = _EXIT_OK if verdict in (True, None) else _EXIT_MATH
    return Report(job.verb, exit_code, sz.canonical_json(body), body)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kvcohom",
        description=(
            "Exact cohomology, extensions, deformations, and flat-connection "
            "geometry of Koszul-Vinberg algebras."
        ),
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--output", help="write the report/artifact here instead of stdout")
        return p

    p = add("verify", "check the KV identity (and module identities)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module")

    p = add("jacobi", "Jacobi elements of an algebra (and a module)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module")

    p = add("cohomology", "exact cohomology table through a degree")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module", help="coefficient module file (default: regular)")
    p.add_argument("--q-max", dest="q_max", type=int, default=2)
    p.add_argument("--budget", type=int, help="table-cell budget override")

    p = add("nijenhuis", "commutator Chevalley-Eilenberg comparison table")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module", help="coefficient module file (default: regular)")
    p.add_argument("--q-max", dest="q_max", type=int, default=2)

    p = add("extend-algebra", "build the extension classified by a 2-cocycle")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--emit", help="also write the extension file here")

    p = add("extend-module", "build the module extension of a (1,1) cocycle")
    p.add_argument("--algebra", required=True)
    p.add_argument("--kernel", required=True)
    p.add_argument("--quotient", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--emit", help="also write the extension file here")

    p = add("classify-ext", "decide whether two extensions are equivalent")
    p.add_argument("--ext1", required=True)
    p.add_argument("--ext2", required=True)

    p = add("deform-check", "verify the deformation equations of a jet")
    p.add_argument("--jet", required=True)

    p = add("deform-solve", "extend a jet order by order or certify obstructions")
    p.add_argument("--jet", required=True)
    p.add_argument("--orders", type=int, default=1)
    p.add_argument("--emit", help="write the extended jet file here")

    p = add("rigidity", "tangent-space dimensions and the rigidity verdict")
    p.add_argument("--algebra", required=True)

    p = add("curvature-check", "two-route curvature comparison for a symmetric tensor")
    p.add_argument("--algebra", required=True)
    p.add_argument("--tensor", required=True)

    p = add("graded-check", "validate a two-graded algebra file")
    p.add_argument("--graded", required=True)

    p = add("graded-deform", "deform the odd part by a square-zero product")
    p.add_argument("--graded", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--emit", help="write the deformed algebra file here")

    p = add("connectionlike", "evaluate the defining conditions of a (theta, psi) pair")
    p.add_argument("--graded", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--psi", required=True)

    p = add("aff-suite", "worked two-dimensional example with its cocycle pencil")
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="0")

    p = add("geodesic", "integrate the deformed-connection geodesic system")
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="0")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--vx0", type=float, default=1.0)
    p.add_argument("--vy0", type=float, default=0.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--step", type=float, default=1e-3)

    p = add("radiant", "solve for right identities")
    p.add_argument("--algebra", required=True)

    p = add("proptest", "seeded random invariant battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)

    p = add("fixtures", "emit a named fixture file")
    p.add_argument("name", help=f"one of: {', '.join(fixture_names())}")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    options = {k: v for k, v in vars(ns).items() if k != "verb" and v is not None}
    job = JobSpec(verb=ns.verb, options=options)
    report = run(job)
    output = options.get("output")
    if output is not None:
        try:
            sz.write_text(output, report.text)
        except InputError as exc:
            sys.stderr.write(f"{exc}\n")
            return _EXIT_INPUT
    else:
        sys.stdout.write(report.text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

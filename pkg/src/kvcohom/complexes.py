"""The intrinsic cochain complex of a KV algebra with bimodule coefficients.

Degree-q cochains are dense q-linear maps A^q -> W.  The coboundary of a
q-cochain f evaluates, for arguments a_1, ..., a_{q+1}, to

    sum_{j=1}^{q} (-1)^j [ a_j . f(a_1,...,^a_j,...,a_{q+1})
        - sum_{s != j} f(a_1,...,^a_j,..., a_j a_s in slot s, ..., a_{q+1})
        + f(a_1,...,^a_j,...,a_q, a_j) . a_{q+1} ]

where ^a_j means that argument is omitted, the middle sum runs over every
remaining slot including the last, and the final term moves a_j into the
last argument slot before acting with a_{q+1} on the right.

Degree 0 is special: the degree-0 cochain space is the Jacobi subspace J(W)
(the elements w with (a,b,w) = 0 for all a, b), and (delta w)(a) = -aw + wa.
Outside J(W) the complex property delta(delta w) = 0 genuinely fails, which
is why admission is guarded.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (
    CheckResult,
    Element,
    KVAlgebra,
    KVModule,
    is_kv,
    is_module,
    jacobi_module,
    lie_bracket,
)
from .errors import BudgetError, DimensionError, InputError, PreconditionError
from .linalg import Mat, RatLike, Subspace, Vec, image, kernel, rat, solve, vec

__all__ = [
    "Cochain",
    "DegreeData",
    "CohomologyReport",
    "DEFAULT_ENTRY_BUDGET",
    "ENTRY_BUDGET_ENV",
    "entry_budget",
    "check_budget",
    "coboundary",
    "coboundary0",
    "coboundary_matrix",
    "cohomology",
    "is_cocycle",
    "is_coboundary",
    "nijenhuis_matrices",
    "nijenhuis_cohomology",
]

_ZERO = Fraction(0)

DEFAULT_ENTRY_BUDGET = 10**7
ENTRY_BUDGET_ENV = "KVCOHOM_ENTRY_BUDGET"


def entry_budget() -> int:
    """The configured per-degree cochain-table cell budget."""
    raw = os.environ.get(ENTRY_BUDGET_ENV)
    if raw is None:
        return DEFAULT_ENTRY_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{ENTRY_BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise InputError(f"{ENTRY_BUDGET_ENV} must be positive, got {value}")
    return value


def check_budget(n: int, m: int, q: int, budget: Optional[int] = None) -> int:
    """Cells of the degree-q table, raising BudgetError when over budget."""
    cells = n**q * m
    limit = entry_budget() if budget is None else budget
    if cells > limit:
        raise BudgetError(q, cells, limit)
    return cells


def _flat(args: Sequence[int], n: int) -> int:
    idx = 0
    for a in args:
        idx = idx * n + a
    return idx


@dataclass(frozen=True)
class Cochain:
    """A dense q-linear map A^q -> W in the flattened basis.

    values[(sum_t i_t n^(q-t)) * m + beta] is the w_beta-coordinate of the
    value on the basis tuple (e_{i_1}, ..., e_{i_q}).  A degree-0 cochain is
    just an element of W (and belongs to the complex only inside J(W)).
    """

    algebra: KVAlgebra
    module: KVModule
    degree: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise InputError("cochain degree must be non-negative")
        if self.module.algebra != self.algebra:
            raise DimensionError("cochain module is not over the cochain algebra")
        expected = self.algebra.dim**self.degree * self.module.dim
        if len(self.values) != expected:
            raise DimensionError(
                f"degree-{self.degree} cochain needs {expected} values, "
                f"got {len(self.values)}"
            )

    @staticmethod
    def zero(A: KVAlgebra, W: KVModule, degree: int) -> "Cochain":
        return Cochain(A, W, degree, (_ZERO,) * (A.dim**degree * W.dim))

    @staticmethod
    def from_values(
        A: KVAlgebra, W: KVModule, degree: int, values: Sequence[RatLike]
    ) -> "Cochain":
        return Cochain(A, W, degree, vec(values))

    @staticmethod
    def from_function(
        A: KVAlgebra,
        W: KVModule,
        degree: int,
        fn: Callable[[tuple[int, ...]], Sequence[RatLike]],
    ) -> "Cochain":
        """Tabulate fn over all basis tuples; fn returns the value in W-coords."""
        out: list[Fraction] = []
        for args in itertools.product(range(A.dim), repeat=degree):
            value = vec(fn(args))
            if len(value) != W.dim:
                raise DimensionError("cochain function returned a wrong-length value")
            out.extend(value)
        return Cochain(A, W, degree, tuple(out))

    @property
    def n(self) -> int:
        return self.algebra.dim

    @property
    def m(self) -> int:
        return self.module.dim

    def offset(self, args: Sequence[int]) -> int:
        return _flat(args, self.n) * self.m

    def value(self, args: Sequence[int]) -> Vec:
        off = self.offset(args)
        return self.values[off : off + self.m]

    def value_element(self, args: Sequence[int]) -> Element:
        return Element(self.value(args))

    def evaluate(self, arguments: Sequence[Element]) -> Element:
        """Full multilinear evaluation on arbitrary algebra elements."""
        if len(arguments) != self.degree:
            raise DimensionError(
                f"degree-{self.degree} cochain got {len(arguments)} arguments"
            )
        for a in arguments:
            if a.dim != self.n:
                raise DimensionError("cochain argument has wrong dimension")
        out = [_ZERO] * self.m
        for args in itertools.product(range(self.n), repeat=self.degree):
            c = Fraction(1)
            for t, i in enumerate(args):
                c *= arguments[t].coords[i]
                if c == 0:
                    break
            if c == 0:
                continue
            val = self.value(args)
            for be in range(self.m):
                if val[be] != 0:
                    out[be] += c * val[be]
        return Element(tuple(out))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values)

    def _require_same_space(self, other: "Cochain") -> None:
        if (
            self.algebra != other.algebra
            or self.module != other.module
            or self.degree != other.degree
        ):
            raise DimensionError("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._require_same_space(other)
        return Cochain(
            self.algebra,
            self.module,
            self.degree,
            tuple(x + y for x, y in zip(self.values, other.values)),
        )

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._require_same_space(other)
        return Cochain(
            self.algebra,
            self.module,
            self.degree,
            tuple(x - y for x, y in zip(self.values, other.values)),
        )

    def __neg__(self) -> "Cochain":
        return Cochain(self.algebra, self.module, self.degree, tuple(-x for x in self.values))

    def scale(self, c: RatLike) -> "Cochain":
        cc = rat(c)
        return Cochain(self.algebra, self.module, self.degree, tuple(cc * x for x in self.values))


def coboundary0(W: KVModule, w: Element, *, check: bool = True) -> Cochain:
    """(delta w)(a) = -aw + wa as a degree-1 cochain.

    With check=True (the default) the element must lie in J(W); outside J(W)
    the formula still parses but delta(delta w) fails to vanish, so admission
    into the complex is refused.
    """
    A = W.algebra
    if w.dim != W.dim:
        raise DimensionError("element does not live in the coefficient module")
    if check:
        if not jacobi_module(A, W).contains(w.coords):
            raise PreconditionError(
                "degree-0 cochains live in the Jacobi subspace J(W); "
                "this element is outside it"
            )
    out: list[Fraction] = []
    for i in range(A.dim):
        a = A.basis_element(i)
        val = W.right_act(w, a) - W.left_act(a, w)
        out.extend(val.coords)
    return Cochain(A, W, 1, tuple(out))


def coboundary(f: Cochain) -> Cochain:
    """The coboundary of a cochain; degree 0 is routed through coboundary0."""
    if f.degree == 0:
        return coboundary0(f.module, Element(f.values))
    A, W, q = f.algebra, f.module, f.degree
    n, m = A.dim, W.dim
    gamma = A.product
    left, right = W.left, W.right
    out = [_ZERO] * (n ** (q + 1) * m)
    for args in itertools.product(range(n), repeat=q + 1):
        acc = [_ZERO] * m
        last = args[q]
        for j in range(q):
            sign = -1 if j % 2 == 0 else 1
            ij = args[j]
            rest = args[:j] + args[j + 1 :]
            term = [_ZERO] * m
            # a_j . f(rest)
            fv = f.value(rest)
            for be in range(m):
                c = fv[be]
                if c == 0:
                    continue
                row = left[ij][be]
                for ga in range(m):
                    if row[ga] != 0:
                        term[ga] += c * row[ga]
            # - sum over slots: f(rest with slot p replaced by a_j . a_s)
            for p in range(q):
                row = gamma[ij][rest[p]]
                for k in range(n):
                    co = row[k]
                    if co == 0:
                        continue
                    fv2 = f.value(rest[:p] + (k,) + rest[p + 1 :])
                    for ga in range(m):
                        if fv2[ga] != 0:
                            term[ga] -= co * fv2[ga]
            # + f(rest without its last slot, then a_j) . a_{q+1}
            fv3 = f.value(rest[:-1] + (ij,))
            for be in range(m):
                c = fv3[be]
                if c == 0:
                    continue
                row = right[be][last]
                for ga in range(m):
                    if row[ga] != 0:
                        term[ga] += c * row[ga]
            if sign < 0:
                for ga in range(m):
                    acc[ga] -= term[ga]
            else:
                for ga in range(m):
                    acc[ga] += term[ga]
        off = _flat(args, n) * m
        out[off : off + m] = acc
    return Cochain(A, W, q + 1, tuple(out))


def coboundary_matrix(A: KVAlgebra, W: KVModule, q: int) -> Mat:
    """Matrix of the coboundary in the flattened bases.

    For q = 0 the domain is J(W) in its echelon basis, matching the
    degree-0 rule of the complex; for q >= 1 the domain is the full
    degree-q table.
    """
    if q < 0:
        raise InputError("coboundary degree must be non-negative")
    n, m = A.dim, W.dim
    if q == 0:
        J = jacobi_module(A, W)
        cols = [
            coboundary0(W, Element(b), check=False).values for b in J.basis
        ]
        return Mat.from_cols(cols, rows=n * m)
    rows_dim = n ** (q + 1) * m
    cols_dim = n**q * m
    gamma = A.product
    left, right = W.left, W.right
    entries: dict[tuple[int, int], Fraction] = {}

    def bump(r: int, c: int, val: Fraction) -> None:
        if val == 0:
            return
        key = (r, c)
        cur = entries.get(key)
        entries[key] = val if cur is None else cur + val

    for args in itertools.product(range(n), repeat=q + 1):
        out_base = _flat(args, n) * m
        last = args[q]
        for j in range(q):
            sgn = Fraction(-1 if j % 2 == 0 else 1)
            ij = args[j]
            rest = args[:j] + args[j + 1 :]
            rest_base = _flat(rest, n) * m
            for be in range(m):
                rowl = left[ij][be]
                for ga in range(m):
                    bump(out_base + ga, rest_base + be, sgn * rowl[ga])
            for p in range(q):
                rowg = gamma[ij][rest[p]]
                for k in range(n):
                    co = rowg[k]
                    if co == 0:
                        continue
                    src_base = _flat(rest[:p] + (k,) + rest[p + 1 :], n) * m
                    for be in range(m):
                        bump(out_base + be, src_base + be, -sgn * co)
            src3 = _flat(rest[:-1] + (ij,), n) * m
            for be in range(m):
                rowr = right[be][last]
                for ga in range(m):
                    bump(out_base + ga, src3 + be, sgn * rowr[ga])
    flat = [_ZERO] * (rows_dim * cols_dim)
    for (r, c), val in entries.items():
        flat[r * cols_dim + c] = val
    return Mat(rows_dim, cols_dim, tuple(flat))


@dataclass(frozen=True)
class DegreeData:
    """Exact dimensions and representatives at a single degree."""

    degree: int
    dim_C: int
    dim_Z: int
    dim_B: int
    dim_H: int
    representatives: tuple[Cochain, ...]


@dataclass(frozen=True)
class CohomologyReport:
    """Per-degree dimensions dim_C / dim_Z / dim_B / dim_H with representatives."""

    degrees: tuple[DegreeData, ...]

    def degree(self, q: int) -> DegreeData:
        for d in self.degrees:
            if d.degree == q:
                return d
        raise InputError(f"report does not cover degree {q}")


def _representative_vectors(Z: Subspace, B: Subspace) -> list[Vec]:
    """Kernel basis vectors that extend the image basis, in echelon order."""
    chosen: list[Vec] = []
    span = B
    for v in Z.basis:
        if not span.contains(v):
            chosen.append(v)
            span = span.add(Subspace.from_vectors(Z.ambient_dim, [v]))
    return chosen


def _require_verified(A: KVAlgebra, W: KVModule) -> None:
    verdict = is_kv(A)
    if not verdict:
        raise PreconditionError(f"cohomology needs a KV product; {verdict.detail}")
    verdict = is_module(A, W)
    if not verdict:
        raise PreconditionError(f"cohomology needs a verified module; {verdict.detail}")


def cohomology(
    A: KVAlgebra, W: KVModule, q_max: int, *, budget: Optional[int] = None
) -> CohomologyReport:
    """Exact cohomology through degree q_max.

    H^0 = {w in J(W) : aw = wa for all a}; H^1 = ker(delta_1)/delta(J(W));
    H^q = ker(delta_q)/im(delta_{q-1}) for q >= 2.  The table-cell budget is
    checked for every degree up to q_max + 1 before any allocation.
    """
    if q_max < 0:
        raise InputError("q_max must be non-negative")
    _require_verified(A, W)
    n, m = A.dim, W.dim
    for q in range(q_max + 2):
        check_budget(n, m, q, budget)
    J = jacobi_module(A, W)
    mats = {q: coboundary_matrix(A, W, q) for q in range(q_max + 1)}

    degrees: list[DegreeData] = []
    # Degree 0: C_0 = J(W), no coboundaries from below.
    K0 = kernel(mats[0])  # coordinates in the echelon basis of J
    z0_vecs: list[Vec] = []
    for coeffs in K0.basis:
        combo = [_ZERO] * m
        for c, bvec in zip(coeffs, J.basis):
            if c != 0:
                for t in range(m):
                    combo[t] += c * bvec[t]
        z0_vecs.append(tuple(combo))
    reps0 = tuple(Cochain(A, W, 0, v) for v in z0_vecs)
    degrees.append(DegreeData(0, J.dim, len(z0_vecs), 0, len(z0_vecs), reps0))

    for q in range(1, q_max + 1):
        Z = kernel(mats[q])
        B = image(mats[q - 1])
        dim_h = Z.dim - B.dim
        rep_vecs = _representative_vectors(Z, B)
        if len(rep_vecs) != dim_h:
            raise AssertionError(
                "representative selection disagrees with dim_Z - dim_B; "
                "the image is not contained in the kernel"
            )
        reps = tuple(Cochain(A, W, q, v) for v in rep_vecs)
        degrees.append(DegreeData(q, n**q * m, Z.dim, B.dim, dim_h, reps))
    return CohomologyReport(tuple(degrees))


def is_cocycle(f: Cochain) -> bool:
    """Exact test of delta f = 0 (degree 0 also requires J(W) membership)."""
    if f.degree == 0:
        W = f.module
        if not jacobi_module(f.algebra, W).contains(f.values):
            return False
        return coboundary0(W, Element(f.values), check=False).is_zero()
    return coboundary(f).is_zero()


def is_coboundary(f: Cochain) -> Optional[Cochain]:
    """A preimage g with delta g = f, or None when f is not a coboundary.

    Degree 1 preimages are degree-0 cochains drawn from J(W).  At degree 0
    the coboundary space is {0}; the zero cochain is returned as its own
    (conventional) witness.
    """
    A, W = f.algebra, f.module
    if f.degree == 0:
        return f if f.is_zero() else None
    M = coboundary_matrix(A, W, f.degree - 1)
    x = solve(M, f.values)
    if x is None:
        return None
    if f.degree == 1:
        J = jacobi_module(A, W)
        combo = [_ZERO] * W.dim
        for c, bvec in zip(x, J.basis):
            if c != 0:
                for t in range(W.dim):
                    combo[t] += c * bvec[t]
        return Cochain(A, W, 0, tuple(combo))
    return Cochain(A, W, f.degree - 1, x)


def nijenhuis_matrices(A: KVAlgebra, W: KVModule, q_max: int) -> dict[int, Mat]:
    """Chevalley-Eilenberg differentials d_p: Lambda^p -> Lambda^{p+1} for p < q_max.

    The underlying data is the commutator Lie algebra A_L acting on the
    space of linear maps L(A, W) by (x.f)(b) = x(f(b)) - f([x,b]); cochains
    are alternating with basis indexed by strictly increasing index tuples.
    """
    if q_max < 1:
        raise InputError("nijenhuis_matrices needs q_max >= 1")
    n, m = A.dim, W.dim
    bracket = lie_bracket(A)
    nv = n * m

    # Action of A_L on V = L(A, W): act[i][src][dst].
    act = [[[_ZERO] * nv for _ in range(nv)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for be in range(m):
                src = j * m + be
                for ga in range(m):
                    if W.left[i][be][ga] != 0:
                        act[i][src][j * m + ga] += W.left[i][be][ga]
                for b in range(n):
                    if bracket[i][b][j] != 0:
                        act[i][src][b * m + be] -= bracket[i][b][j]

    combos = {p: list(itertools.combinations(range(n), p)) for p in range(q_max + 1)}
    combo_pos = {p: {c: t for t, c in enumerate(combos[p])} for p in range(q_max + 1)}

    def ce_matrix(p: int) -> Mat:
        """Matrix of the Chevalley-Eilenberg differential Lambda^p -> Lambda^{p+1}."""
        rows_dim = len(combos[p + 1]) * nv
        cols_dim = len(combos[p]) * nv
        entries: dict[tuple[int, int], Fraction] = {}

        def bump(r: int, c: int, val: Fraction) -> None:
            if val == 0:
                return
            key = (r, c)
            cur = entries.get(key)
            entries[key] = val if cur is None else cur + val

        for T in combos[p + 1]:
            out_base = combo_pos[p + 1][T] * nv
            for i in range(p + 1):
                sgn = Fraction(-1 if i % 2 else 1)
                x = T[i]
                rest = T[:i] + T[i + 1 :]
                src_base = combo_pos[p][rest] * nv
                for src in range(nv):
                    arow = act[x][src]
                    for dst in range(nv):
                        bump(out_base + dst, src_base + src, sgn * arow[dst])
            for i in range(p + 1):
                for j in range(i + 1, p + 1):
                    sgn = Fraction(-1 if (i + j) % 2 else 1)
                    rest = tuple(T[t] for t in range(p + 1) if t not in (i, j))
                    for k in range(n):
                        co = bracket[T[i]][T[j]][k]
                        if co == 0 or k in rest:
                            continue
                        pos = sum(1 for r in rest if r < k)
                        sigma = Fraction(-1 if pos % 2 else 1)
                        srt = tuple(sorted(rest + (k,)))
                        src_base = combo_pos[p][srt] * nv
                        for v in range(nv):
                            bump(out_base + v, src_base + v, sgn * co * sigma)
        flat = [_ZERO] * (rows_dim * cols_dim)
        for (r, c), val in entries.items():
            flat[r * cols_dim + c] = val
        return Mat(rows_dim, cols_dim, tuple(flat))

    return {p: ce_matrix(p) for p in range(q_max)}


def nijenhuis_cohomology(A: KVAlgebra, W: KVModule, q_max: int) -> CohomologyReport:
    """The comparison theory: H_N^q = H_CE^{q-1}(A_L, L(A, W)).

    Only dimensions are reported (representatives live in a different
    complex and are omitted), and no relation between this theory and the
    intrinsic one is asserted anywhere: the two dimension tables are meant
    to be read side by side.
    """
    if q_max < 1:
        raise InputError("nijenhuis_cohomology needs q_max >= 1")
    _require_verified(A, W)
    n, m = A.dim, W.dim
    nv = n * m
    mats = nijenhuis_matrices(A, W, q_max)
    counts = {p: len(list(itertools.combinations(range(n), p))) for p in range(q_max + 1)}
    degrees: list[DegreeData] = []
    for q in range(1, q_max + 1):
        p = q - 1
        dim_c = counts[p] * nv
        Z = kernel(mats[p])
        dim_b = image(mats[p - 1]).dim if p - 1 in mats else 0
        degrees.append(DegreeData(q, dim_c, Z.dim, dim_b, Z.dim - dim_b, ()))
    return CohomologyReport(tuple(degrees))

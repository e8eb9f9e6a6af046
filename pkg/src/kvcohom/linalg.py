"""Exact linear algebra over the rationals.

Dense matrices of :class:`fractions.Fraction` entries, with rank computed by
fraction-free (Bareiss) elimination on integer-rescaled rows and
kernel/image/solve computed by rational Gauss-Jordan elimination.  Everything
is exact: no floats, no tolerances, anywhere.

Subspaces carry a reduced-row-echelon basis, so two subspaces are equal as
sets exactly when they compare equal as values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionError

__all__ = [
    "RatLike",
    "Vec",
    "Mat",
    "Subspace",
    "rat",
    "vec",
    "rank",
    "kernel",
    "solve",
    "image",
    "inverse",
    "mat_mul",
    "membership",
    "intersect",
    "zeros",
    "identity",
]

RatLike = Union[Fraction, int, str]
Vec = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(x: RatLike) -> Fraction:
    """Coerce an int, a string like ``"3/4"`` or ``"-2"``, or a Fraction.

    Floats are rejected on purpose: every scalar in the algebraic layer is an
    exact rational, and silently admitting binary floats would poison that.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec(values: Iterable[RatLike]) -> Vec:
    """Build an exact vector (tuple of Fractions) from any rational-likes."""
    return tuple(rat(x) for x in values)


@dataclass(frozen=True)
class Mat:
    """Dense row-major matrix of exact rationals.

    Attributes:
        rows: number of rows (may be 0).
        cols: number of columns (may be 0).
        entries: flat tuple of ``rows * cols`` Fractions, row-major.
    """

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"matrix claims {self.rows}x{self.cols} but carries "
                f"{len(self.entries)} entries"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence[RatLike]], *, cols: Optional[int] = None) -> "Mat":
        """Build a matrix from a sequence of equal-length rows.

        Args:
            rows: the row vectors.
            cols: required when ``rows`` is empty, to fix the column count.
        """
        data = [vec(r) for r in rows]
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionError("rows have unequal lengths")
            if cols is not None and cols != width:
                raise DimensionError("explicit column count contradicts the rows")
        else:
            if cols is None:
                raise DimensionError("an empty matrix needs an explicit column count")
            width = cols
        flat = tuple(x for r in data for x in r)
        return Mat(len(data), width, flat)

    @staticmethod
    def from_cols(cols: Sequence[Sequence[RatLike]], *, rows: Optional[int] = None) -> "Mat":
        """Build a matrix whose columns are the given vectors."""
        data = [vec(c) for c in cols]
        if data:
            height = len(data[0])
            if any(len(c) != height for c in data):
                raise DimensionError("columns have unequal lengths")
            if rows is not None and rows != height:
                raise DimensionError("explicit row count contradicts the columns")
        else:
            if rows is None:
                raise DimensionError("an empty matrix needs an explicit row count")
            height = rows
        flat = tuple(data[j][i] for i in range(height) for j in range(len(data)))
        return Mat(height, len(data), flat)

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self) -> list[list[Fraction]]:
        """Mutable copy of the rows, for elimination routines."""
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Mat":
        flat = tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        return Mat(self.cols, self.rows, flat)

    def mat_vec(self, v: Sequence[RatLike]) -> Vec:
        """Matrix-vector product ``self @ v``."""
        x = vec(v)
        if len(x) != self.cols:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} matrix by length-{len(x)} vector"
            )
        return tuple(
            sum((self.at(i, j) * x[j] for j in range(self.cols)), _ZERO)
            for i in range(self.rows)
        )


def zeros(rows: int, cols: int) -> Mat:
    return Mat(rows, cols, (_ZERO,) * (rows * cols))


def identity(n: int) -> Mat:
    return Mat(n, n, tuple(_ONE if i == j else _ZERO for i in range(n) for j in range(n)))


def rank(m: Mat) -> int:
    """Exact rank over the rationals by fraction-free (Bareiss) elimination.

    Each row is first rescaled by the lcm of its denominators, so the
    elimination runs entirely in integer arithmetic; the one-step Bareiss
    update divides by the previous pivot, which is an exact division.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    work: list[list[int]] = []
    for i in range(m.rows):
        r = m.row(i)
        den = lcm(*(f.denominator for f in r))
        work.append([int(f * den) for f in r])
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                work[i][j] = (work[r][c] * work[i][j] - work[i][c] * work[r][j]) // prev
            work[i][c] = 0
        prev = work[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form by rational Gauss-Jordan elimination.

    Returns:
        (nonzero rows of the RREF, pivot column indices in increasing order).
    """
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c]
        if inv != _ONE:
            work[r] = [x / inv for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work[:r], pivots


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F^ambient_dim with a canonical RREF basis.

    Invariants: basis rows are the nonzero rows of a reduced row echelon
    form, so pivot columns strictly increase and equality of subspaces is
    plain value equality.
    """

    ambient_dim: int
    basis: tuple[Vec, ...]

    def __post_init__(self) -> None:
        for b in self.basis:
            if len(b) != self.ambient_dim:
                raise DimensionError(
                    f"basis vector of length {len(b)} in ambient dimension {self.ambient_dim}"
                )

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence[RatLike]]) -> "Subspace":
        """Span of the given vectors, normalized to the canonical RREF basis."""
        data = [vec(v) for v in vectors]
        for v in data:
            if len(v) != ambient_dim:
                raise DimensionError(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
        reduced, _ = _rref(data, ambient_dim)
        return Subspace(ambient_dim, tuple(tuple(r) for r in reduced))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        eye = identity(ambient_dim)
        return Subspace(ambient_dim, tuple(eye.row(i) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _pivot(self, row: Vec) -> int:
        return next(j for j, x in enumerate(row) if x != 0)

    def reduce(self, v: Sequence[RatLike]) -> Vec:
        """Remainder of ``v`` after subtracting its projection on the basis.

        The remainder is zero exactly when ``v`` lies in the subspace.
        """
        x = list(vec(v))
        if len(x) != self.ambient_dim:
            raise DimensionError(
                f"vector of length {len(x)} in ambient dimension {self.ambient_dim}"
            )
        for row in self.basis:
            p = self._pivot(row)
            coef = x[p]
            if coef != 0:
                for j in range(p, self.ambient_dim):
                    x[j] -= coef * row[j]
        return tuple(x)

    def contains(self, v: Sequence[RatLike]) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def coordinates(self, v: Sequence[RatLike]) -> Optional[Vec]:
        """Coefficients of ``v`` in the canonical basis, or None if outside."""
        x = list(vec(v))
        if len(x) != self.ambient_dim:
            raise DimensionError(
                f"vector of length {len(x)} in ambient dimension {self.ambient_dim}"
            )
        coords = []
        for row in self.basis:
            p = self._pivot(row)
            coef = x[p]
            coords.append(coef)
            if coef != 0:
                for j in range(p, self.ambient_dim):
                    x[j] -= coef * row[j]
        if any(t != 0 for t in x):
            return None
        return tuple(coords)

    def add(self, other: "Subspace") -> "Subspace":
        """Sum of subspaces (span of the union of the bases)."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("subspace sum needs a common ambient dimension")
        return Subspace.from_vectors(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection, via the kernel of the stacked-basis relation matrix.

        A vector lies in both spans iff it is A^T x and B^T y with
        A^T x - B^T y = 0, so kernel vectors (x, y) of [A^T | -B^T]
        parametrize the intersection.
        """
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("subspace intersection needs a common ambient dimension")
        n = self.ambient_dim
        k1, k2 = self.dim, other.dim
        if k1 == 0 or k2 == 0:
            return Subspace.zero(n)
        rows = []
        for i in range(n):
            rows.append(
                [self.basis[a][i] for a in range(k1)] + [-other.basis[b][i] for b in range(k2)]
            )
        ker = kernel(Mat.from_rows(rows, cols=k1 + k2))
        vectors = []
        for kv in ker.basis:
            combo = [_ZERO] * n
            for a in range(k1):
                if kv[a] != 0:
                    for i in range(n):
                        combo[i] += kv[a] * self.basis[a][i]
            vectors.append(combo)
        return Subspace.from_vectors(n, vectors)


def kernel(m: Mat) -> Subspace:
    """Exact null space {v : m v = 0}, dimension cols - rank."""
    reduced, pivots = _rref(m.row_lists(), m.cols)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [_ZERO] * m.cols
        v[j] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][j]
        basis.append(v)
    return Subspace.from_vectors(m.cols, basis)


def solve(m: Mat, b: Sequence[RatLike]) -> Optional[Vec]:
    """Some particular exact solution of ``m x = b``, or None when inconsistent."""
    rhs = vec(b)
    if len(rhs) != m.rows:
        raise DimensionError(
            f"right-hand side of length {len(rhs)} for a matrix with {m.rows} rows"
        )
    aug = [list(m.row(i)) + [rhs[i]] for i in range(m.rows)]
    reduced, pivots = _rref(aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [_ZERO] * m.cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][m.cols]
    return tuple(x)


def image(m: Mat) -> Subspace:
    """Column space of ``m`` as a subspace of F^rows."""
    columns = [[m.at(i, j) for i in range(m.rows)] for j in range(m.cols)]
    return Subspace.from_vectors(m.rows, columns)


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Exact matrix product."""
    if a.cols != b.rows:
        raise DimensionError(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}"
        )
    out = [_ZERO] * (a.rows * b.cols)
    for i in range(a.rows):
        arow = a.row(i)
        for k in range(a.cols):
            aik = arow[k]
            if aik == 0:
                continue
            brow = b.row(k)
            base = i * b.cols
            for j in range(b.cols):
                if brow[j] != 0:
                    out[base + j] += aik * brow[j]
    return Mat(a.rows, b.cols, tuple(out))


def inverse(m: Mat) -> Optional[Mat]:
    """Exact inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise DimensionError("only square matrices can be inverted")
    n = m.rows
    eye = identity(n)
    aug = [list(m.row(i)) + list(eye.row(i)) for i in range(n)]
    reduced, pivots = _rref(aug, 2 * n)
    if pivots != list(range(n)):
        return None
    return Mat.from_rows([r[n:] for r in reduced], cols=n)


def membership(s: Subspace, v: Sequence[RatLike]) -> bool:
    return s.contains(v)


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    return s1.intersect(s2)

"""Named small fixtures used across the library, the CLI, and the tests.

Every algebra here is KV (verifiable with `is_kv`), every module passes
`is_module`, and the graded fixture passes the graded checks; nothing in
this file is exempt from the verifiers, and the tests re-verify all of it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from .core import KVAlgebra, KVModule, Tensor3, tensor3, zero3
from .errors import InputError

if TYPE_CHECKING:  # pragma: no cover
    from .deform import MultiplicationJet
    from .graded import GradedKVAlgebra

__all__ = [
    "aff",
    "assoc1",
    "poly2",
    "rad2",
    "zero_algebra",
    "algebra_catalog",
    "rad2_left_module",
    "flat_polynomial_module",
    "graded_flat",
    "flat_theta",
    "flat_psi",
    "obstructed_jet",
    "algebra_fixture_names",
    "algebra_fixture",
]

_F0 = Fraction(0)
_F1 = Fraction(1)


def aff() -> KVAlgebra:
    """The 2-dim algebra with e1 e2 = e2 and all other basis products zero.

    This is the structure algebra of the affine line; its commutator bracket
    is [e1, e2] = e2 and its Jacobi subspace is span{e1}.
    """
    prod = [[[0, 0], [0, 1]], [[0, 0], [0, 0]]]
    return KVAlgebra(dim=2, product=tensor3(prod), name="aff")


def assoc1() -> KVAlgebra:
    """The 1-dim associative algebra with e e = e."""
    return KVAlgebra(dim=1, product=tensor3([[[1]]]), name="assoc1")


def poly2() -> KVAlgebra:
    """Truncated polynomials F[t]/(t^2): e1 is the identity, e2^2 = 0."""
    prod = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return KVAlgebra(dim=2, product=tensor3(prod), name="poly2")


def rad2() -> KVAlgebra:
    """A 2-dim algebra with a right identity: e1 e1 = e1, e2 e1 = e2, e1 e2 = 2 e2.

    KV for any coefficient on e1 e2; the value 2 makes the left-regular
    module admit a nonzero parallel symmetric 2-cochain, which is what the
    radiant-primitive machinery wants to see exercised.
    """
    prod = [[[1, 0], [0, 2]], [[0, 1], [0, 0]]]
    return KVAlgebra(dim=2, product=tensor3(prod), name="rad2")


def zero_algebra(dim: int) -> KVAlgebra:
    """The zero product on `dim` generators."""
    if dim < 0:
        raise InputError("zero_algebra needs a non-negative dimension")
    return KVAlgebra(dim=dim, product=zero3(dim, dim, dim), name=f"zero{dim}")


def algebra_catalog() -> list[KVAlgebra]:
    """The generative base set for random_kv, all of dimension <= 3."""
    return [
        zero_algebra(1),
        assoc1(),
        zero_algebra(2),
        aff(),
        poly2(),
        rad2(),
        zero_algebra(3),
    ]


def rad2_left_module() -> KVModule:
    """The left-regular module of rad2 (right action zero)."""
    A = rad2()
    return KVModule(algebra=A, dim=2, left=A.product, right=zero3(2, 2, 2))


def flat_polynomial_module() -> KVModule:
    """Truncated polynomials F[x]/(x^3) as a left module over aff().

    e1 acts as x d/dx (so 1 -> 0, x -> x, x^2 -> 2 x^2) and e2 acts as
    x^2 d/dx (so 1 -> 0, x -> x^2, x^2 -> 0); both are derivations of the
    truncated product and together they realize the bracket [e1,e2] = e2,
    which is exactly the left-module condition.
    """
    A = aff()
    left = [
        [[0, 0, 0], [0, 1, 0], [0, 0, 2]],
        [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
    ]
    return KVModule(algebra=A, dim=3, left=tensor3(left), right=zero3(3, 2, 3))


def graded_flat() -> "GradedKVAlgebra":
    """The worked two-graded fixture: aff() even part, F[x]/(x^3) odd part."""
    from .graded import GradedKVAlgebra

    return GradedKVAlgebra(even=aff(), odd=flat_polynomial_module())


def flat_theta() -> Tensor3:
    """The truncated polynomial product on the odd part: theta(x^i, x^j) = x^{i+j}."""
    m = 3
    data = [[[_F0] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i + j < m:
                data[i][j][i + j] = _F1
    return tensor3(data)


def flat_psi() -> Tensor3:
    """The companion pairing psi(D_p, w) = D_{w p mod x^3} on the fixture.

    Writing e1 = x d/dx and e2 = x^2 d/dx as D_x and D_{x^2}: multiplying the
    coefficient polynomial by w and truncating gives psi(e1, 1) = e1,
    psi(e1, x) = e2, psi(e2, 1) = e2 and zero elsewhere.
    """
    n, m = 2, 3
    data = [[[_F0] * n for _ in range(m)] for _ in range(n)]
    data[0][0][0] = _F1
    data[0][1][1] = _F1
    data[1][0][1] = _F1
    return tensor3(data)


def obstructed_jet() -> "MultiplicationJet":
    """An order-1 jet whose next coefficient does not exist.

    Over the 2-dim zero product every coboundary vanishes and every cochain
    is a cocycle, so degree-3 classes are the full cochain space.  The first
    coefficient mu_1(e1,e1) = e2, mu_1(e2,e1) = e1 is then a cocycle, but
    its self-bracket is nonzero, and the order-2 target -1/2 d_{mu_1} mu_1
    can never be a coboundary: the solver must report the obstruction.
    """
    from .deform import MultiplicationJet

    mu1 = [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]
    return MultiplicationJet(zero_algebra(2), (tensor3(mu1),))


_ALGEBRAS = {
    "aff": aff,
    "assoc1": assoc1,
    "poly2": poly2,
    "rad2": rad2,
    "zero1": lambda: zero_algebra(1),
    "zero2": lambda: zero_algebra(2),
    "zero3": lambda: zero_algebra(3),
}


def algebra_fixture_names() -> list[str]:
    return sorted(_ALGEBRAS)


def algebra_fixture(name: str) -> KVAlgebra:
    try:
        return _ALGEBRAS[name]()
    except KeyError:
        raise InputError(
            f"unknown algebra fixture {name!r}; known: {', '.join(algebra_fixture_names())}"
        ) from None

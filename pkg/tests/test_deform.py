"""Formal deformation machinery: brackets, residuals, solving, curvature."""

import itertools
import random
from fractions import Fraction

import pytest

from kvcohom.complexes import (
    Cochain,
    coboundary,
    coboundary_matrix,
    is_coboundary,
    is_cocycle,
)
from kvcohom.core import KVAlgebra, is_kv, random_kv, regular_bimodule, tensor3, zero3
from kvcohom.deform import (
    BasisFlowJet,
    MultiplicationJet,
    bilinear_cochain,
    curvature_check,
    jet_check,
    jet_residuals,
    kv_bracket,
    pair_residual,
    pushforward_jet,
    rigidity_report,
    solve_next_order,
    tensor4_from_cochain,
    trilinear_cochain,
    zero4,
)
from kvcohom.errors import DimensionError, InputError, PreconditionError
from kvcohom.fixtures import (
    aff,
    assoc1,
    obstructed_jet,
    poly2,
    rad2,
    zero_algebra,
)
from kvcohom.linalg import Mat

F = Fraction


def random_bilinear(rng, n):
    return tensor3(
        [
            [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
            for _ in range(n)
        ]
    )


def s_tensor(alpha, beta):
    """The symmetric two-parameter family on the affine fixture:

    S(e1,e1) = alpha e1 + beta e2, S(e1,e2) = S(e2,e1) = alpha e2,
    S(e2,e2) = 0.
    """
    a, b = F(alpha), F(beta)
    return tensor3([[[a, b], [0, a]], [[0, a], [0, 0]]])


def flatten4(t):
    return [x for q in t for p in q for r in p for x in r]


# ---------------------------------------------------------------------------
# the bracket


def test_bracket_with_the_base_product_is_the_coboundary():
    rng = random.Random("bracket-base")
    for A in (aff(), poly2(), rad2(), assoc1()):
        for _ in range(8):
            nu = random_bilinear(rng, A.dim)
            via_bracket = kv_bracket(A.product, nu)
            via_delta = tensor4_from_cochain(coboundary(bilinear_cochain(A, nu)))
            assert via_bracket == via_delta


def test_self_bracket_is_twice_the_kv_defect():
    rng = random.Random("self-bracket")
    for n in (1, 2, 3):
        for _ in range(6):
            mu = random_bilinear(rng, n)
            d = kv_bracket(mu, mu)
            # independent route: the defect (a,b,c)_mu - (b,a,c)_mu directly
            for a, b, c in itertools.product(range(n), repeat=3):
                direct = [F(0)] * n
                for p in range(n):
                    for k in range(n):
                        direct[k] += mu[a][b][p] * mu[p][c][k]
                        direct[k] -= mu[b][c][p] * mu[a][p][k]
                        direct[k] -= mu[b][a][p] * mu[p][c][k]
                        direct[k] += mu[a][c][p] * mu[b][p][k]
                assert tuple(2 * x for x in direct) == d[a][b][c]
            # and the pairwise-collection route
            assert d == tuple(
                tuple(
                    tuple(tuple(2 * x for x in r) for r in p) for p in q
                )
                for q in pair_residual(mu, mu)
            )


def test_bracket_vanishes_on_zero_arguments():
    mu = random_bilinear(random.Random("z"), 2)
    zero = zero3(2, 2, 2)
    assert kv_bracket(mu, zero) == zero4(2)
    assert kv_bracket(zero, mu) == zero4(2)


def test_self_bracket_vanishes_exactly_on_kv_products():
    for seed in range(10):
        A = random_kv(seed)
        assert kv_bracket(A.product, A.product) == zero4(A.dim)
    not_kv = tensor3([[[0, 1], [0, 0]], [[1, 0], [0, 0]]])
    assert kv_bracket(not_kv, not_kv) != zero4(2)


def test_bracket_is_symmetric_in_its_arguments():
    rng = random.Random("sym")
    for _ in range(5):
        mu = random_bilinear(rng, 2)
        nu = random_bilinear(rng, 2)
        assert kv_bracket(mu, nu) == kv_bracket(nu, mu)


# ---------------------------------------------------------------------------
# jets and residuals


def test_zero_jet_has_zero_residuals():
    for A in (aff(), poly2()):
        n = A.dim
        jet = MultiplicationJet(A, (zero3(n, n, n),) * 4)
        assert all(
            all(x == 0 for x in flatten4(E)) for E in jet_residuals(jet)
        )
        assert jet_check(jet)


def test_first_residual_is_the_coboundary_of_the_first_coefficient():
    rng = random.Random("E1")
    for A in (aff(), rad2()):
        for _ in range(6):
            mu1 = random_bilinear(rng, A.dim)
            jet = MultiplicationJet(A, (mu1,))
            E = jet_residuals(jet)
            assert all(x == 0 for x in flatten4(E[0]))
            expected = tensor4_from_cochain(coboundary(bilinear_cochain(A, mu1)))
            assert E[1] == expected


def test_non_cocycle_first_coefficient_is_witnessed():
    A = aff()
    # delta of this cochain is nonzero: the constant map to e2 on (e1, e1).
    mu1 = tensor3([[[0, 0], [1, 0]], [[0, 0], [0, 0]]])
    d = coboundary(bilinear_cochain(A, mu1))
    assert not d.is_zero()
    verdict = jet_check(MultiplicationJet(A, (mu1,)))
    assert not verdict
    k, a, b, c = verdict.witness
    assert k == 1
    assert any(x != 0 for x in jet_residuals(MultiplicationJet(A, (mu1,)))[1][a][b][c])


def test_linear_family_through_the_symmetric_tensor_stays_kv():
    """The affine base deformed by the two-parameter symmetric family is a
    KV family to every order: the first two residuals carry the whole story."""
    A = aff()
    n = A.dim
    for alpha, beta in ((1, 0), (2, 3), (-1, 5)):
        S = s_tensor(alpha, beta)
        assert is_cocycle(bilinear_cochain(A, S))
        jet = MultiplicationJet(A, (S, zero3(n, n, n), zero3(n, n, n), zero3(n, n, n)))
        E = jet_residuals(jet)
        assert all(all(x == 0 for x in flatten4(Ek)) for Ek in E)
        assert jet_check(jet)


def test_jet_requires_a_kv_base_and_square_coefficients():
    not_kv = KVAlgebra(dim=2, product=tensor3([[[0, 1], [0, 0]], [[1, 0], [0, 0]]]))
    with pytest.raises(PreconditionError):
        MultiplicationJet(not_kv, ())
    with pytest.raises(DimensionError):
        MultiplicationJet(aff(), (zero3(3, 3, 3),))
    jet = MultiplicationJet(aff(), (s_tensor(1, 0),))
    assert jet.coefficient(0) == aff().product
    assert jet.coefficient(1) == s_tensor(1, 0)
    assert jet.coefficient(5) == zero3(2, 2, 2)
    with pytest.raises(InputError):
        jet.coefficient(-1)


# ---------------------------------------------------------------------------
# order-by-order solving


def test_next_order_of_an_unperturbed_jet_is_zero():
    A = aff()
    jet = MultiplicationJet(A, (zero3(2, 2, 2),))
    sol = solve_next_order(jet)
    assert sol.solved
    assert sol.order == 2
    assert sol.target == zero4(2)
    assert sol.target_is_cocycle
    assert sol.coefficient == zero3(2, 2, 2)
    assert sol.extended.order == 2


def test_symmetric_family_extends_with_zero_second_coefficient():
    A = aff()
    jet = MultiplicationJet(A, (s_tensor(1, 0),))
    sol = solve_next_order(jet)
    assert sol.solved
    assert sol.target == zero4(2)  # the self-bracket of the family vanishes
    assert sol.coefficient == zero3(2, 2, 2)
    assert jet_check(sol.extended)


def test_obstructed_jet_yields_a_separating_certificate():
    jet = obstructed_jet()
    assert jet_check(jet)  # valid through order 1
    sol = solve_next_order(jet)
    assert not sol.solved
    assert sol.coefficient is None and sol.extended is None
    assert sol.target != zero4(2)
    # over the zero product every cochain is a cocycle, so the obstruction
    # genuinely lives in the degree-3 classes
    assert sol.target_is_cocycle
    cert = sol.certificate
    assert cert is not None
    M = coboundary_matrix(jet.base, regular_bimodule(jet.base), 2)
    # the functional kills the coboundary image ...
    assert all(
        sum(cert[r] * M.at(r, c) for r in range(M.rows)) == 0
        for c in range(M.cols)
    )
    # ... but not the target
    assert sum(a * b for a, b in zip(cert, flatten4(sol.target))) != 0


def test_solving_requires_vanishing_lower_residuals():
    A = aff()
    mu1 = tensor3([[[0, 0], [1, 0]], [[0, 0], [0, 0]]])  # not a cocycle
    with pytest.raises(PreconditionError):
        solve_next_order(MultiplicationJet(A, (mu1,)))


# ---------------------------------------------------------------------------
# trivial deformations by basis flows


def test_constant_flow_pushes_to_the_constant_jet():
    A = aff()
    zero_theta = Mat.from_rows([[0, 0], [0, 0]], cols=2)
    jet = pushforward_jet(BasisFlowJet((zero_theta,) * 3), A)
    assert all(mu == zero3(2, 2, 2) for mu in jet.coefficients)


def test_first_pushforward_coefficient_is_a_coboundary():
    rng = random.Random("push1")
    A = aff()
    for _ in range(8):
        theta = Mat.from_rows(
            [[F(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)], cols=2
        )
        jet = pushforward_jet(BasisFlowJet((theta,)), A)
        theta_cochain = Cochain(
            A,
            regular_bimodule(A),
            1,
            tuple(theta.at(i, k) for i in range(2) for k in range(2)),
        )
        d_theta = coboundary(theta_cochain)
        expected = tensor3(
            [
                [list(d_theta.value((i, j))) for j in range(2)]
                for i in range(2)
            ]
        )
        assert jet.coefficients[0] == expected


def test_pushforward_satisfies_the_defining_composition_law():
    """mu_t(phi_t a, phi_t b) = phi_t(ab) through the truncation order,
    checked by independent series convolution."""
    rng = random.Random("push-law")
    for A in (aff(), rad2(), random_kv(3)):
        n = A.dim
        for _ in range(4):
            thetas = tuple(
                Mat.from_rows(
                    [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)],
                    cols=n,
                )
                for _ in range(4)
            )
            flow = BasisFlowJet(thetas)
            jet = pushforward_jet(flow, A)
            assert all(
                all(x == 0 for x in flatten4(E)) for E in jet_residuals(jet)
            )

            def theta_mat(k):
                if k == 0:
                    return [[F(1) if j == i else F(0) for j in range(n)] for i in range(n)]
                return [list(thetas[k - 1].row(i)) for i in range(n)]

            def apply_rows(mat, coords):
                out = [F(0)] * n
                for i, c in enumerate(coords):
                    if c != 0:
                        for j in range(n):
                            out[j] += c * mat[i][j]
                return out

            def mu_apply(mu, x, y):
                out = [F(0)] * n
                for i in range(n):
                    if x[i] == 0:
                        continue
                    for j in range(n):
                        c = x[i] * y[j]
                        if c == 0:
                            continue
                        for k in range(n):
                            out[k] += c * mu[i][j][k]
                return out

            for a in range(n):
                for b in range(n):
                    ea = [F(1) if t == a else F(0) for t in range(n)]
                    eb = [F(1) if t == b else F(0) for t in range(n)]
                    ab = mu_apply(A.product, ea, eb)
                    for k in range(5):
                        lhs = [F(0)] * n
                        for p in range(k + 1):
                            for q in range(k + 1 - p):
                                r = k - p - q
                                if p > 4 or q > 4 or r > 4:
                                    continue
                                x = apply_rows(theta_mat(q), ea)
                                y = apply_rows(theta_mat(r), eb)
                                term = mu_apply(jet.coefficient(p), x, y)
                                for t in range(n):
                                    lhs[t] += term[t]
                        rhs = apply_rows(theta_mat(k), ab) if k <= 4 else [F(0)] * n
                        if k <= 4:
                            assert lhs == rhs, (a, b, k)


def test_flow_validation():
    with pytest.raises(InputError):
        BasisFlowJet(())
    with pytest.raises(DimensionError):
        BasisFlowJet(
            (Mat.from_rows([[0, 0], [0, 0]], cols=2), Mat.from_rows([[0]], cols=1))
        )
    with pytest.raises(DimensionError):
        pushforward_jet(
            BasisFlowJet((Mat.from_rows([[0, 0, 0]] * 3, cols=3),)), aff()
        )


# ---------------------------------------------------------------------------
# rigidity


def test_rigidity_of_the_idempotent_line():
    report = rigidity_report(assoc1())
    assert (report.dim_C2, report.dim_Z2, report.dim_B2, report.dim_H2) == (1, 1, 1, 0)
    assert report.rigid
    assert report.class_representatives == ()


def test_affine_fixture_is_not_rigid_and_the_symmetric_tensor_witnesses_it():
    A = aff()
    report = rigidity_report(A)
    assert not report.rigid
    assert report.dim_H2 >= 1
    S = s_tensor(1, 0)
    c = bilinear_cochain(A, S)
    assert is_cocycle(c)
    assert is_coboundary(c) is None
    # S sits in the reported cocycle space
    flat = [x for p in S for r in p for x in r]
    from kvcohom.linalg import Subspace

    span = Subspace.from_vectors(
        8, [[x for p in z for r in p for x in r] for z in report.cocycle_basis]
    )
    assert span.contains(flat)


def test_zero_line_tangent_space_is_everything():
    report = rigidity_report(zero_algebra(1))
    assert (report.dim_C2, report.dim_Z2, report.dim_B2, report.dim_H2) == (1, 1, 0, 1)
    assert not report.rigid
    assert len(report.cocycle_basis) == 1


def test_rigidity_report_is_internally_consistent():
    for seed in range(6):
        A = random_kv(seed)
        report = rigidity_report(A)
        assert report.dim_H2 == report.dim_Z2 - report.dim_B2
        assert report.rigid == (report.dim_H2 == 0)
        assert len(report.class_representatives) == report.dim_H2
        for z in report.cocycle_basis:
            assert is_cocycle(bilinear_cochain(A, z))
        for z in report.class_representatives:
            assert is_coboundary(bilinear_cochain(A, z)) is None
    with pytest.raises(PreconditionError):
        rigidity_report(
            KVAlgebra(dim=2, product=tensor3([[[0, 1], [0, 0]], [[1, 0], [0, 0]]]))
        )


# ---------------------------------------------------------------------------
# curvature through the chain identity


def test_flat_connection_has_matching_curvatures():
    A = aff()
    assert curvature_check(A, zero3(2, 2, 2)) == zero4(2)


def test_symmetric_cocycles_make_the_commutation_formula_exact():
    A = aff()
    for alpha, beta in ((1, 0), (2, 3), (-1, 5)):
        assert curvature_check(A, s_tensor(alpha, beta)) == zero4(2)


def test_curvature_defect_is_the_coboundary_contraction():
    rng = random.Random("curv")
    count_nonzero = 0
    for seed in range(12):
        A = random_kv(seed)
        n = A.dim
        raw = random_bilinear(rng, n)
        S = tensor3(
            [
                [
                    [raw[i][j][k] + raw[j][i][k] for k in range(n)]
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )
        residual = curvature_check(A, S)
        minus_ds = tensor4_from_cochain(coboundary(bilinear_cochain(A, S)))
        expected = tuple(
            tuple(
                tuple(tuple(-x for x in r) for r in p) for p in q
            )
            for q in minus_ds
        )
        assert residual == expected
        if residual != zero4(n):
            count_nonzero += 1
    assert count_nonzero > 0  # the identity was exercised beyond cocycles


def test_curvature_rejects_asymmetric_tensors():
    A = aff()
    S = tensor3([[[0, 0], [1, 0]], [[0, 0], [0, 0]]])
    with pytest.raises(InputError, match="symmetric"):
        curvature_check(A, S)

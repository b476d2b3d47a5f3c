"""Curvature expansion, the exact polynomial, solver, and the identity
checkers, with independent symbolic oracles."""

import random
from fractions import Fraction

import pytest

from branegauge.branes import BraneComplex, ChainMap, GaugeField, gauge_solve, pidentity, pzero
from branegauge.dg import Connection, FreeModule, HomElement
from branegauge.errors import ToleranceUnreachable
from branegauge.exact import ExteriorForm, Matrix, Ring, Scalar, TruncPoly
from branegauge.randgen import (
    rand_compatible_family,
    rand_constant_complex,
    rand_form_matrix,
    rand_poly,
    rand_scalar,
)
from helpers import brute_force_polynomial, direct_sum, inclusion_chain_map
from branegauge.yang_mills import (
    CurvatureExpansion,
    SolverConfig,
    cone_ym,
    end_pairing,
    euler_poincare_check,
    gradient_system,
    monomial_directions,
    orthogonality_check,
    semisimple_converse_harness,
    sheaf_brane,
    solve_critical,
    stationarity_check,
    ym_brane,
    ym_polynomial,
    ym_sheaf,
)

R = Ring(2, 4)
M1 = FreeModule(R, 1)
M2 = FreeModule(R, 2)


def xv(ring, i):
    return TruncPoly.variable(ring, i)


def form_matrix(ring, entries):
    return Matrix(entries)


def hom1(module, matrix):
    return HomElement(module, module, 1, matrix)


def nilpotent_instance():
    """Rank 2, flat base, E1 = N dx1, E2 = N^T dx2 with N elementary."""
    zero = ExteriorForm.zero(R, 1)
    one_dx1 = ExteriorForm.dx(R, 0)
    one_dx2 = ExteriorForm.dx(R, 1)
    E1 = Matrix([[zero, one_dx1], [zero, zero]])
    E2 = Matrix([[zero, zero], [one_dx2, zero]])
    base = Connection.flat(M2)
    return CurvatureExpansion(base, [hom1(M2, E1), hom1(M2, E2)])


def rand_expansion(rng, module, m, max_poly_degree=1):
    base = Connection(
        module,
        rand_form_matrix(rng, module.ring, module.rank, module.rank, 1, max_poly_degree),
    )
    dirs = [
        hom1(
            module,
            rand_form_matrix(rng, module.ring, module.rank, module.rank, 1, max_poly_degree),
        )
        for _ in range(m)
    ]
    return CurvatureExpansion(base, dirs)


class TestCurvatureExpansion:
    def test_empty_directions(self):
        rng = random.Random(0)
        ce = rand_expansion(rng, M2, 0)
        assert ce.curvature_at([]) == ce.K0

    def test_nilpotent_blocks(self):
        ce = nilpotent_instance()
        assert all(M.is_zero() for M in ce.B)
        assert ce.BB[0][0].is_zero() and ce.BB[1][1].is_zero()
        s = ce.BB[0][1] + ce.BB[1][0]
        # (N N^T - N^T N) dx1^dx2 = diag(1, -1) dx1^dx2
        dx12 = ExteriorForm(R, 2, {(0, 1): TruncPoly.constant(R, 1)})
        assert s.entries[0][0] == dx12
        assert s.entries[1][1] == -dx12

    def test_expansion_matches_connection_curvature(self):
        rng = random.Random(1)
        for _ in range(6):
            ce = rand_expansion(rng, M2, 2)
            lams = [rand_scalar(rng), rand_scalar(rng)]
            moved = ce.connection_at(lams)
            assert moved.curvature_matrix() == ce.curvature_at(lams)


class TestYMPolynomial:
    def test_zero_expansion(self):
        ce = CurvatureExpansion(Connection.flat(M2), [])
        P = ym_polynomial(ce, "bilinear")
        assert P.coefficients == {}

    def test_nilpotent_bilinear(self):
        P = ym_polynomial(nilpotent_instance(), "bilinear")
        assert P.coefficients == {(2, 2): Scalar(2)}

    def test_nilpotent_hermitian(self):
        P = ym_polynomial(nilpotent_instance(), "hermitian")
        assert P.coefficients == {((1, 1), (1, 1)): Scalar(2)}

    def test_rank1_with_closed_directions_is_constant(self):
        rng = random.Random(2)
        for _ in range(5):
            base = Connection(
                M1, rand_form_matrix(rng, R, 1, 1, 1, 1)
            )
            dirs = [
                hom1(M1, Matrix([[ExteriorForm.dx(R, 0).scale(rand_scalar(rng))]])),
                hom1(M1, Matrix([[ExteriorForm.dx(R, 1).scale(rand_scalar(rng))]])),
            ]
            P = ym_polynomial(CurvatureExpansion(base, dirs), "bilinear")
            assert not P.lambda_dependent()

    def test_matches_brute_force_oracle(self):
        rng = random.Random(3)
        for mode in ("bilinear", "hermitian"):
            for _ in range(5):
                ce = rand_expansion(rng, M2, 2)
                P = ym_polynomial(ce, mode)
                assert P.coefficients == brute_force_polynomial(ce, mode)

    def test_degree_bound(self):
        rng = random.Random(4)
        for _ in range(5):
            ce = rand_expansion(rng, M2, 3)
            for mode in ("bilinear", "hermitian"):
                assert ym_polynomial(ce, mode).degree() <= 4

    def test_hermitian_real_nonnegative(self):
        rng = random.Random(5)
        ce = rand_expansion(rng, M2, 2)
        P = ym_polynomial(ce, "hermitian")
        for _ in range(10):
            lams = [rand_scalar(rng), rand_scalar(rng)]
            v = P.evaluate(lams)
            assert v.im == 0 and v.re >= 0

    def test_consistency_with_ym_sheaf(self):
        rng = random.Random(6)
        ce = rand_expansion(rng, M2, 2)
        for mode in ("bilinear", "hermitian"):
            P = ym_polynomial(ce, mode)
            for _ in range(5):
                lams = [rand_scalar(rng), rand_scalar(rng)]
                moved = ce.connection_at(lams)
                assert ym_sheaf(moved, mode) == P.evaluate(lams)


class TestGradientSystem:
    def test_zero_polynomial(self):
        from branegauge.yang_mills import YMPolynomial

        P = YMPolynomial(2, "bilinear", {})
        sys = gradient_system(P)
        assert all(p.is_zero() for p in sys)

    def test_square_quartic(self):
        from branegauge.yang_mills import YMPolynomial

        P = YMPolynomial(2, "bilinear", {(2, 2): Scalar(1)})
        sys = gradient_system(P)
        assert sys[0].terms == {(1, 2): Scalar(2)}
        assert sys[1].terms == {(2, 1): Scalar(2)}

    def test_gradient_degree_bound(self):
        rng = random.Random(7)
        for _ in range(5):
            ce = rand_expansion(rng, M2, 2)
            for mode in ("bilinear", "hermitian"):
                P = ym_polynomial(ce, mode)
                for comp in gradient_system(P):
                    assert comp.degree() <= 3

    def test_hermitian_gradient_count(self):
        rng = random.Random(8)
        ce = rand_expansion(rng, M2, 2)
        P = ym_polynomial(ce, "hermitian")
        assert len(gradient_system(P)) == 4


class TestSolveCritical:
    def test_simple_origin(self):
        ring = Ring(2, 4)
        sys = [xv(ring, 0), xv(ring, 1)]
        cs = solve_critical(sys, SolverConfig(starts=10, seed=3))
        assert len(cs.points) == 1
        pt = cs.points[0]
        assert max(abs(c) for c in pt.coords) < 1e-10
        assert pt.residual <= 1e-12
        assert not cs.nonisolated

    def test_axes_variety_flagged_nonisolated(self):
        ring = Ring(2, 4)
        sys = [
            xv(ring, 0) * xv(ring, 1) * xv(ring, 1) * 2,
            xv(ring, 0) * xv(ring, 0) * xv(ring, 1) * 2,
        ]
        cs = solve_critical(sys, SolverConfig(starts=30, seed=5))
        assert cs.nonisolated
        assert cs.witness is not None

    def test_bezout_bound_generic(self):
        rng = random.Random(9)
        ring = Ring(2, 4)
        for _ in range(3):
            sys = [rand_poly(rng, ring, 3, density=0.8) for _ in range(2)]
            if any(p.is_zero() for p in sys):
                continue
            try:
                cs = solve_critical(sys, SolverConfig(starts=60, seed=11))
            except ToleranceUnreachable:
                continue
            assert len(cs.isolated) <= 9

    def test_determinism(self):
        rng = random.Random(10)
        ring = Ring(2, 4)
        sys = [rand_poly(rng, ring, 3, density=0.8) for _ in range(2)]
        a = solve_critical(sys, SolverConfig(starts=40, seed=7))
        b = solve_critical(sys, SolverConfig(starts=40, seed=7))
        assert [p.coords for p in a.points] == [p.coords for p in b.points]

    def test_zero_system_every_point_critical(self):
        ring = Ring(2, 4)
        cs = solve_critical([TruncPoly.zero(ring), TruncPoly.zero(ring)])
        assert cs.nonisolated and cs.witness is not None


class TestYMSheafAndBrane:
    def test_flat_zero(self):
        assert ym_sheaf(Connection.flat(M2), "hermitian").is_zero()

    def test_rank1_unit_curvature(self):
        A = Matrix([[ExteriorForm(R, 1, {(1,): xv(R, 0)})]])
        assert ym_sheaf(Connection(M1, A), "hermitian") == Scalar(1)

    def test_acyclic_brane_zero(self):
        F = BraneComplex(R, {0: 2, 1: 2}, {0: pidentity(R, 2)})
        res = gauge_solve(F)
        assert ym_brane(F, res.gauge, "hermitian").is_zero()

    def test_single_term_matches_sheaf(self):
        rng = random.Random(11)
        A = rand_form_matrix(rng, R, 2, 2, 1, 1)
        conn = Connection(M2, A)
        F, gauge = sheaf_brane(conn)
        for mode in ("hermitian", "bilinear"):
            assert ym_brane(F, gauge, mode) == ym_sheaf(conn, mode)

    def test_two_term_zero_differential_signs(self):
        rng = random.Random(12)
        F = BraneComplex(R, {0: 2, 1: 2}, {0: pzero(R, 2, 2)})
        A0 = rand_form_matrix(rng, R, 2, 2, 1, 1)
        A1 = rand_form_matrix(rng, R, 2, 2, 1, 1)
        gauge = GaugeField(
            F,
            {0: pidentity(R, 2), 1: pidentity(R, 2)},
            {0: A0, 1: A1},
            {1: pzero(R, 2, 2)},
            F.default_morphism_degree("gauge"),
        )
        assert gauge.verify()
        lhs = ym_brane(F, gauge, "bilinear")
        rhs = ym_sheaf(Connection(M2, A0), "bilinear") - ym_sheaf(
            Connection(M2, A1), "bilinear"
        )
        assert lhs == rhs


class TestStationarity:
    def test_zero_variation(self):
        rng = random.Random(13)
        conn = Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))
        F, gauge = sheaf_brane(conn)
        from branegauge.branes import GaugeVariation, fzero

        var = GaugeVariation({0: pzero(R, 2, 2)}, {0: fzero(R, 2, 2)}, {})
        report = stationarity_check(F, gauge, var, "hermitian")
        assert report.exactly_zero

    def test_flat_rank1_exactly_zero(self):
        from branegauge.branes import GaugeVariation

        rng = random.Random(14)
        conn = Connection.flat(M1)
        F, gauge = sheaf_brane(conn)
        E = rand_form_matrix(rng, R, 1, 1, 1, 1)
        var = GaugeVariation({0: pzero(R, 1, 1)}, {0: E}, {})
        report = stationarity_check(F, gauge, var, "hermitian")
        assert report.pairing_side.is_zero()
        assert report.fd_derivative == 0

    def test_fd_matches_pairing_random(self):
        from branegauge.branes import GaugeVariation

        rng = random.Random(15)
        hits = 0
        for _ in range(12):
            conn = Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))
            F, gauge = sheaf_brane(conn)
            E = rand_form_matrix(rng, R, 2, 2, 1, 1)
            var = GaugeVariation({0: pzero(R, 2, 2)}, {0: E}, {})
            for mode in ("hermitian", "bilinear"):
                report = stationarity_check(F, gauge, var, mode)
                if abs(report.expected_derivative) > 1e-9:
                    assert report.agreement < 1e-6
                    hits += 1
        assert hits >= 10


class TestOrthogonality:
    def test_flat_true(self):
        report = orthogonality_check(Connection.flat(M2), "hermitian")
        assert report.passed

    def test_constant_curvature_rank1_not_orthogonal_in_flat_model(self):
        # d-exact forms are not orthogonal to constants on the polytorus:
        # the polynomial model has trivial positive-degree cohomology, so a
        # nonzero constant curvature always pairs with some exact form.
        A = Matrix([[ExteriorForm(R, 1, {(1,): xv(R, 0)})]])
        report = orthogonality_check(Connection(M1, A), "hermitian")
        assert not report.passed
        assert report.witness_index is not None

    def test_agrees_with_gradient_at_base(self):
        rng = random.Random(16)
        for _ in range(4):
            base = Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))
            dirs = monomial_directions(M2, 1)[:3]
            ce = CurvatureExpansion(base, dirs)
            P = ym_polynomial(ce, "bilinear")
            sys = gradient_system(P)
            zeros = [Scalar(0)] * len(dirs)
            grad_at_zero = [p.evaluate(zeros) for p in sys]
            pairings = [
                end_pairing(ce.K0, ce.B[i], "bilinear") * 2 for i in range(len(dirs))
            ]
            assert grad_at_zero == pairings


class TestEulerPoincare:
    def test_all_flat(self):
        rng = random.Random(17)
        F = rand_constant_complex(rng, R, [2, 2, 1])
        conns = {i: Connection.flat(F.term(i)) for i in F.degrees}
        report = euler_poincare_check(F, conns, "bilinear")
        assert report.equal and report.term_sum.is_zero()

    def test_single_term_tautology(self):
        rng = random.Random(18)
        F = BraneComplex(R, {0: 2}, {})
        conns = {0: Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))}
        report = euler_poincare_check(F, conns, "bilinear")
        assert report.equal

    def test_random_three_term_exact(self):
        rng = random.Random(19)
        count = 0
        while count < 8:
            ranks = [rng.randint(1, 3) for _ in range(3)]
            F = rand_constant_complex(rng, R, ranks)
            conns = rand_compatible_family(rng, F, max_poly_degree=1)
            report = euler_poincare_check(F, conns, "bilinear")
            assert report.equal
            count += 1


class TestConeYM:
    def test_zero_map_between_flat(self):
        rng = random.Random(20)
        A = rand_constant_complex(rng, R, [1, 1])
        B = rand_constant_complex(rng, R, [1, 1])
        f = ChainMap(A, B, {})
        alpha = {i: Connection.flat(A.term(i)) for i in A.degrees}
        beta = {i: Connection.flat(B.term(i)) for i in B.degrees}
        report = cone_ym(f, alpha, beta, "bilinear")
        assert report.equal
        assert report.ym_cone.is_zero()

    def test_inclusion_into_direct_sum_random(self):
        rng = random.Random(21)
        count = 0
        while count < 8:
            ranks = [rng.randint(1, 2) for _ in range(2)]
            F1 = rand_constant_complex(rng, R, ranks)
            F2 = rand_constant_complex(rng, R, [rng.randint(1, 2) for _ in range(2)])
            FS = direct_sum(F1, F2)
            alpha = rand_compatible_family(rng, F1, max_poly_degree=1)
            alpha2 = rand_compatible_family(rng, F2, max_poly_degree=1)
            beta = {}
            for i in FS.degrees:
                r1, r2 = F1.rank(i), F2.rank(i)
                entries = []
                for r in range(r1 + r2):
                    row = []
                    for c in range(r1 + r2):
                        if r < r1 and c < r1:
                            row.append(alpha[i].A.entries[r][c])
                        elif r >= r1 and c >= r1:
                            row.append(alpha2[i].A.entries[r - r1][c - r1])
                        else:
                            row.append(ExteriorForm.zero(R, 1))
                    entries.append(row)
                beta[i] = Connection(FS.term(i), Matrix(entries))
            f = inclusion_chain_map(F1, FS)
            report = cone_ym(f, alpha, beta, "bilinear")
            assert report.equal
            count += 1


class TestSemisimpleHarness:
    def _flat_nonzero(self, rng, rank):
        g = rand_poly(rng, R, 2, density=0.8)
        C = Matrix.build(
            rank, rank, lambda r, c: TruncPoly.constant(R, rand_scalar(rng))
        )
        dg = ExteriorForm.from_poly(g).exterior_d()
        A = Matrix.build(rank, rank, lambda r, c: dg.scale(C.entries[r][c]))
        conn = Connection(FreeModule(R, rank), A)
        assert conn.curvature().is_zero()
        return conn

    def test_flat_blocks_all_pass(self):
        rng = random.Random(22)
        h_conns = {0: self._flat_nonzero(rng, 2), 1: self._flat_nonzero(rng, 1)}
        g_modules = {0: FreeModule(R, 1), 1: FreeModule(R, 1)}
        delta_g = {0: pidentity(R, 1)}
        report = semisimple_converse_harness(
            h_conns, g_modules, delta_g, "hermitian"
        )
        assert report.induced_match_blocks
        assert report.stationary_exact
        assert report.all_orthogonal

    def test_one_term_reduces_to_sheaf(self):
        rng = random.Random(23)
        h_conns = {0: self._flat_nonzero(rng, 2)}
        report = semisimple_converse_harness(h_conns, {}, {}, "hermitian")
        assert report.induced_match_blocks
        assert report.all_orthogonal


class TestSpotChecksAndFeedback:
    def test_expansion_consistency_twenty_points(self):
        rng = random.Random(30)
        for _ in range(3):
            ce = rand_expansion(rng, M2, 2)
            for _ in range(20):
                lams = [rand_scalar(rng), rand_scalar(rng)]
                assert ce.connection_at(lams).curvature_matrix() == ce.curvature_at(lams)

    def test_critical_point_fed_back_is_stationary(self):
        # solve the nilpotent gradient system, snap a reported point to the
        # exact critical set, and verify exact orthogonality over the
        # instance directions at the fed-back parameter value
        ce = nilpotent_instance()
        P = ym_polynomial(ce, "bilinear")
        sys_ = gradient_system(P)
        cs = solve_critical(sys_, SolverConfig(starts=40, seed=9))
        assert cs.points
        z = cs.points[0].coords
        # the critical set is the union of the axes: snap the smaller
        # coordinate to zero and rationalize the other
        from fractions import Fraction as Fr

        if abs(z[0]) <= abs(z[1]):
            lams = [Scalar(0), Scalar(Fr(round(z[1].real * 8), 8))]
        else:
            lams = [Scalar(Fr(round(z[0].real * 8), 8)), Scalar(0)]
        grads = [p.evaluate(lams) for p in sys_]
        assert all(g.is_zero() for g in grads)
        moved = ce.connection_at(lams)
        report = orthogonality_check(moved, "bilinear", directions=ce.directions)
        assert report.passed

    def test_variation_difference_of_equal_gauges_vanishes(self):
        from branegauge.branes import variation_difference

        rng = random.Random(31)
        conn = Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))
        F, gauge = sheaf_brane(conn)
        xi = variation_difference(F, gauge, gauge, 0)
        assert xi.matrix.is_zero()

    def test_single_term_compatible_family_descends_to_itself(self):
        from branegauge.branes import compatible_family_connections

        rng = random.Random(32)
        conn = Connection(M2, rand_form_matrix(rng, R, 2, 2, 1, 1))
        F = BraneComplex(R, {0: 2}, {})
        out = compatible_family_connections(F, {0: conn})
        assert out[0].A == conn.A

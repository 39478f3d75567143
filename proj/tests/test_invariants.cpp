#include <catch2/catch_amalgamated.hpp>

#include "twoblock/invariants.hpp"

using namespace twoblock;

namespace {

/// Every monomial of p has total degree d (characteristic coefficients are
/// homogeneous in the matrix entries even when the weighted grading mixes).
bool total_degree_is(const Poly& p, int d) {
    for (const auto& t : p.terms())
        if (t.m.tdeg() != d) return false;
    return !p.is_zero();
}

} // namespace

TEST_CASE("characteristic coefficients of a literal 2x2 matrix") {
    VarTable tab;
    tab.add("a", 1, 1);
    tab.add("b", 1, 1);
    tab.add("c", 1, 1);
    tab.add("d", 1, 1);
    Poly a = Poly::variable(tab, 0), b = Poly::variable(tab, 1);
    Poly c = Poly::variable(tab, 2), d = Poly::variable(tab, 3);
    PolyMat X{{a, b}, {c, d}};
    auto q = char_poly_coeffs(X);
    REQUIRE(q.size() == 2);
    CHECK(q[0] == -(a + d));
    CHECK(q[1] == a * d - b * c);

    // Truncation returns the same leading coefficients.
    auto q1 = char_poly_coeffs(X, 1);
    REQUIRE(q1.size() == 1);
    CHECK(q1[0] == q[0]);
}

TEST_CASE("characteristic coefficients match the characteristic polynomial at sample points") {
    // Check det(tI - X) = t^3 + q1 t^2 + q2 t + q3 by evaluating at integer
    // matrices and comparing against a directly expanded determinant.
    VarTable tab;
    for (int i = 0; i < 9; ++i) tab.add("m" + std::to_string(i), 1, 1);
    PolyMat X(3, std::vector<Poly>(3, Poly::zero(tab)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) X[size_t(i)][size_t(j)] = Poly::variable(tab, 3 * i + j);
    auto q = char_poly_coeffs(X);
    REQUIRE(q.size() == 3);

    std::vector<Rat> pt = {Rat(2), Rat(-1), Rat(0), Rat(3), Rat(1, 2), Rat(5),
                           Rat(-2), Rat(7), Rat(1, 3)};
    // 3x3 determinant of (tI - M) expanded by hand for t = 4.
    Rat t(4);
    Rat m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m[i][j] = -pt[size_t(3 * i + j)];
            if (i == j) m[i][j] = m[i][j] + t;
        }
    Rat det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
              m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
              m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Rat viaq = t * t * t + q[0].eval(pt) * t * t + q[1].eval(pt) * t + q[2].eval(pt);
    CHECK(det == viaq);
}

TEST_CASE("odd characteristic coefficients vanish on the fixed subalgebras") {
    for (auto r : {build_so_realization(3, 3), build_sp_realization(2, 2)}) {
        auto q = char_poly_coeffs(coordinate_matrix(r));
        REQUIRE(int(q.size()) == r.gl.N());
        for (size_t i = 0; i < q.size(); ++i) {
            if (i % 2 == 0) {
                INFO(r.pp.str() << " q" << i + 1);
                CHECK(q[i].is_zero());
            } else {
                CHECK(total_degree_is(q[i], int(i) + 1));
            }
        }
    }
}

TEST_CASE("even characteristic coefficients are Casimirs of the Lie-Poisson bracket") {
    for (auto r : {build_so_realization(3, 3), build_sp_realization(2, 2)}) {
        PoissonStructure ps(r);
        auto q = char_poly_coeffs(coordinate_matrix(r));
        for (size_t i = 1; i < q.size(); i += 2) {
            auto w = casimir_check(ps, q[i]);
            INFO(r.pp.str() << " q" << i + 1 << " failing coordinate "
                            << w.failing_coordinate);
            CHECK(w.casimir);
        }
        // A bare coordinate is not a Casimir (the check can fail).
        Poly x0 = Poly::variable(r.coordinate_table(), 0);
        auto w = casimir_check(ps, x0);
        CHECK_FALSE(w.casimir);
        CHECK(w.failing_coordinate >= 0);
        CHECK_FALSE(w.residual.is_zero());
    }
}

TEST_CASE("coordinate bracket is antisymmetric and a biderivation") {
    Realization r = build_so_realization(3, 5);
    PoissonStructure ps(r);
    const VarTable& tab = r.coordinate_table();
    Poly F = Poly::variable(tab, 0) * Poly::variable(tab, 3) +
             Poly::variable(tab, 7).scaled(Rat(2, 3));
    Poly G = Poly::variable(tab, 1) * Poly::variable(tab, 1) - Poly::variable(tab, 5);
    Poly H = Poly::variable(tab, 2) + Poly::variable(tab, 9) * Poly::variable(tab, 4);

    CHECK(ps.bracket(F, G) == -ps.bracket(G, F));
    CHECK(ps.bracket(F * G, H) == F * ps.bracket(G, H) + ps.bracket(F, H) * G);

    // Coordinate brackets agree with the structure constants.
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            PolyBuilder expect(tab);
            for (const auto& [d, c] : r.sc(a, b))
                expect.add_poly(Poly::variable(tab, d), c);
            CHECK(ps.bracket(Poly::variable(tab, a), Poly::variable(tab, b)) ==
                  expect.build());
        }
}

TEST_CASE("Jacobi identity holds for the polynomial bracket on samples") {
    Realization r = build_sp_realization(2, 4);
    PoissonStructure ps(r);
    const VarTable& tab = r.coordinate_table();
    Poly F = Poly::variable(tab, 0) * Poly::variable(tab, 2);
    Poly G = Poly::variable(tab, 1) + Poly::variable(tab, 4) * Poly::variable(tab, 3);
    Poly H = Poly::variable(tab, 5) * Poly::variable(tab, 0);
    Poly jac = ps.bracket(F, ps.bracket(G, H)) + ps.bracket(G, ps.bracket(H, F)) +
               ps.bracket(H, ps.bracket(F, G));
    CHECK(jac.is_zero());
}

TEST_CASE("pfaffian squares to the determinant coefficient") {
    for (auto pr : {std::pair<int, int>{3, 3}, {3, 5}}) {
        Realization r = build_so_realization(pr.first, pr.second);
        int N = r.gl.N();
        auto pf = pfaffian(r);
        REQUIRE_FALSE(pf.pf.is_zero());
        CHECK(total_degree_is(pf.pf, N / 2));
        CHECK(pf.pf.lead_coeff().sign() > 0);

        auto q = char_poly_coeffs(coordinate_matrix(r));
        const Poly& qN = q.back();
        Poly sq = pf.pf * pf.pf;
        // Proportionality: sq = scalar * qN, scalar fixed by lead terms.
        REQUIRE(qN.lead_mono() == sq.lead_mono());
        Rat scalar = sq.lead_coeff() / qN.lead_coeff();
        INFO(r.pp.str() << " scalar " << scalar.str());
        CHECK(sq == qN.scaled(scalar));

        // poly_sqrt recovers the pfaffian from its square.
        auto root = poly_sqrt(sq);
        REQUIRE(root.has_value());
        CHECK(*root == pf.pf);
    }
}

TEST_CASE("pfaffian is rejected for symplectic realizations") {
    Realization r = build_sp_realization(2, 2);
    CHECK_THROWS_AS(pfaffian(r), std::invalid_argument);
}

TEST_CASE("block reflection fixes determinant coefficients and negates the pfaffian") {
    Realization r = build_so_realization(3, 3);
    auto q = char_poly_coeffs(coordinate_matrix(r));
    for (size_t i = 1; i < q.size(); i += 2) CHECK(q[i].apply_gamma() == q[i]);
    auto pf = pfaffian(r);
    CHECK(pf.pf.apply_gamma() == -pf.pf);
}

TEST_CASE("pfaffian of the equal-parts orthogonal realization") {
    Realization r = build_equal_block_realization(Kind::So, 4); // so8(4,4)
    auto pf = pfaffian(r);
    REQUIRE_FALSE(pf.pf.is_zero());
    CHECK(total_degree_is(pf.pf, 4));
    auto q = char_poly_coeffs(coordinate_matrix(r), 2);
    CHECK(q[0].is_zero());
    PoissonStructure ps(r);
    CHECK(casimir_check(ps, q[1]).casimir);
}

TEST_CASE("medium orthogonal algebra: low coefficients and pfaffian centrality") {
    Realization r = build_so_realization(3, 5);
    PoissonStructure ps(r);
    auto q = char_poly_coeffs(coordinate_matrix(r), 4);
    CHECK(q[0].is_zero());
    CHECK(q[2].is_zero());
    CHECK(casimir_check(ps, q[1]).casimir);
    CHECK(casimir_check(ps, q[3]).casimir);
    auto pf = pfaffian(r);
    CHECK(casimir_check(ps, pf.pf).casimir);
}

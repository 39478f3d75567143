#include "twoblock/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace twoblock;

namespace {

std::vector<std::vector<Rat>> qmat(std::vector<std::vector<long>> m) {
    std::vector<std::vector<Rat>> out;
    for (auto& r : m) {
        std::vector<Rat> row;
        for (long x : r) row.push_back(Rat(x));
        out.push_back(row);
    }
    return out;
}

} // namespace

TEST_CASE("rank of exact integer matrices") {
    CHECK(linalg::rank_q(qmat({{1, 2}, {2, 4}})) == 1);
    CHECK(linalg::rank_q(qmat({{1, 2}, {3, 4}})) == 2);
    CHECK(linalg::rank_q(qmat({{0, 0}, {0, 0}})) == 0);
    CHECK(linalg::rank_q(qmat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 2);
    // A case where floating point would lose: nearly dependent rows with huge entries.
    std::vector<std::vector<Rat>> m = {
        {Rat(mpz_class("1000000000000000000000")), Rat(1)},
        {Rat(mpz_class("1000000000000000000001")), Rat(1)},
    };
    CHECK(linalg::rank_q(m) == 2);
}

TEST_CASE("kernel vectors are primitive, deterministic, and correct") {
    // x + 2y + 3z = 0, 4x + 5y + 6z = 0 -> kernel spanned by (1, -2, 1).
    auto m = qmat({{1, 2, 3}, {4, 5, 6}});
    auto k = linalg::kernel(m, 3);
    REQUIRE(k.size() == 1);
    CHECK(k[0] == std::vector<Rat>{Rat(1), Rat(-2), Rat(1)});
    // Verify membership: M k = 0.
    for (const auto& row : m) {
        Rat s(0);
        for (size_t j = 0; j < 3; ++j) s += row[j] * k[0][j];
        CHECK(s.is_zero());
    }
    // Full-rank map has trivial kernel.
    CHECK(linalg::kernel(qmat({{1, 0}, {0, 1}}), 2).empty());
    // Zero map: kernel is everything, one primitive vector per column.
    auto kz = linalg::kernel(qmat({{0, 0, 0}}), 3);
    CHECK(kz.size() == 3);
}

TEST_CASE("solve finds exact coefficients or reports non-membership") {
    auto a = qmat({{1, 0}, {1, 1}, {0, 2}});
    auto sol = linalg::solve(a, {Rat(3), Rat(5), Rat(4)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Rat(3));
    CHECK((*sol)[1] == Rat(2));
    CHECK_FALSE(linalg::solve(a, {Rat(3), Rat(5), Rat(5)}).has_value());

    // Rational solution.
    auto b = qmat({{2, 0}, {0, 3}});
    auto s2 = linalg::solve(b, {Rat(1), Rat(1)});
    REQUIRE(s2.has_value());
    CHECK((*s2)[0] == Rat(1, 2));
    CHECK((*s2)[1] == Rat(1, 3));
}

TEST_CASE("solve agrees with brute-force verification on a dense system") {
    // 4x4 invertible integer matrix; verify A * solve(A, b) == b exactly.
    auto a = qmat({{2, -1, 0, 3}, {1, 1, 1, 1}, {0, 5, -2, 1}, {3, 0, 0, -4}});
    std::vector<Rat> b = {Rat(7), Rat(2, 3), Rat(-1), Rat(0)};
    auto sol = linalg::solve(a, b);
    REQUIRE(sol.has_value());
    for (size_t i = 0; i < 4; ++i) {
        Rat s(0);
        for (size_t j = 0; j < 4; ++j) s += a[i][j] * (*sol)[j];
        CHECK(s == b[i]);
    }
}

TEST_CASE("monomials_of_weight enumerates a weighted degree slice") {
    VarTable t;
    t.add("a", 2);
    t.add("b", 4);
    t.add("c", 4);
    // Weight 8: a^4, a^2 b, a^2 c, b^2, b c, c^2 -> 6 monomials.
    auto ms = monomials_of_weight(t, 8);
    CHECK(ms.size() == 6);
    for (const auto& m : ms) CHECK(m.wdeg() == 8);
    // Descending canonical order, no duplicates.
    for (size_t i = 1; i < ms.size(); ++i) CHECK(ms[i] < ms[i - 1]);
    CHECK(monomials_of_weight(t, 0).size() == 1);
    CHECK(monomials_of_weight(t, 1).empty());
    CHECK(monomials_of_weight(t, 2).size() == 1);
}

TEST_CASE("graded membership certifies ideal membership degreewise") {
    VarTable t;
    t.add("x", 2);
    t.add("y", 2);
    Poly x = Poly::variable(t, 0), y = Poly::variable(t, 1);

    // Ideal (x): x*y^2 is in degree 6, y^3 is not.
    auto in = graded_membership(x * y * y, {x});
    CHECK(in.member);
    REQUIRE(in.combination.size() == 1);
    CHECK(in.combination[0].gen == 0);
    CHECK(in.combination[0].coef == Rat(1));
    // Reconstruct: coef * multiplier * gen == target.
    Poly rebuilt = (x * Poly::monomial(t, in.combination[0].multiplier, Rat(1)))
                       .scaled(in.combination[0].coef);
    CHECK(rebuilt == x * y * y);

    CHECK_FALSE(graded_membership(y * y * y, {x}).member);

    // Two generators with overlap: x^2 - y^2 in (x - y, x + y) at degree 4.
    auto g = graded_membership(x * x - y * y, {x - y, x + y});
    CHECK(g.member);

    // Membership in the span at matching degree (degree-0 multiplier).
    auto same = graded_membership(x + y, {x - y, x + y});
    CHECK(same.member);
    CHECK_FALSE(graded_membership(x + y, {x - y}).member);

    // Zero target is always a member.
    CHECK(graded_membership(Poly::zero(t), {x}).member);
}

TEST_CASE("graded membership reconstructs the certified combination") {
    VarTable t;
    t.add("x", 2);
    t.add("y", 2);
    t.add("z", 4);
    Poly x = Poly::variable(t, 0), y = Poly::variable(t, 1), z = Poly::variable(t, 2);
    Poly g1 = x * x + z, g2 = y * y - z.scaled(Rat(2));
    Poly target = g1 * y - g2 * x.scaled(Rat(1, 2));
    auto res = graded_membership(target, {g1, g2});
    REQUIRE(res.member);
    Poly rebuilt = Poly::zero(t);
    std::vector<Poly> gens = {g1, g2};
    for (const auto& part : res.combination)
        rebuilt = rebuilt +
                  (gens[size_t(part.gen)] * Poly::monomial(t, part.multiplier, Rat(1)))
                      .scaled(part.coef);
    CHECK(rebuilt == target);
}

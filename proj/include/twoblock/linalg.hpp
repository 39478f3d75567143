#pragma once

#include "twoblock/polynomial.hpp"
#include "twoblock/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace twoblock {

/// Exact linear algebra over the rationals via integer fraction-free
/// elimination. Rows are cleared to integers, eliminated with gcd-reduced
/// cross-multiplication, and content-stripped after every step, so entries
/// stay proportional to minors and nothing ever rounds. All pivot choices are
/// deterministic functions of the input order.
namespace linalg {

using ZRow = std::vector<mpz_class>;

inline void strip_content(ZRow& row) {
    mpz_class g = 0;
    for (const auto& x : row) {
        if (x == 0) continue;
        g = g == 0 ? abs(x) : mpz_gcd_of(g, x);
        if (g == 1) break;
    }
    if (g > 1)
        for (auto& x : row) x /= g;
    for (const auto& x : row) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : row) y = -y;
        break;
    }
}

inline ZRow clear_denominators(const std::vector<Rat>& row) {
    mpz_class l = 1;
    for (const auto& r : row) {
        mpz_class d = r.den();
        l = l / mpz_gcd_of(l, d) * d;
    }
    ZRow out(row.size());
    for (size_t i = 0; i < row.size(); ++i) out[i] = row[i].num() * (l / row[i].den());
    strip_content(out);
    return out;
}

/// Row echelon form of an integer matrix (in place). Returns pivot column per
/// produced row; rank = number of pivots. Pivot selection: among candidate
/// rows, fewest nonzeros, ties by lowest row index.
inline std::vector<int> echelon(std::vector<ZRow>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    size_t ncols = rows[0].size();
    size_t r = 0;
    for (size_t col = 0; col < ncols && r < rows.size(); ++col) {
        size_t best = rows.size();
        size_t best_nnz = SIZE_MAX;
        for (size_t i = r; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            size_t nnz = 0;
            for (const auto& x : rows[i])
                if (x != 0) ++nnz;
            if (nnz < best_nnz) {
                best_nnz = nnz;
                best = i;
            }
        }
        if (best == rows.size()) continue;
        std::swap(rows[r], rows[best]);
        for (size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            mpz_class p = rows[r][col], q = rows[i][col];
            mpz_class g = mpz_gcd_of(p, q);
            mpz_class a = p / g, b = q / g;
            for (size_t j = 0; j < ncols; ++j) rows[i][j] = a * rows[i][j] - b * rows[r][j];
            strip_content(rows[i]);
        }
        pivots.push_back(int(col));
        ++r;
    }
    rows.resize(r);
    return pivots;
}

inline int rank(std::vector<ZRow> rows) {
    return int(echelon(rows).size());
}

inline int rank_q(const std::vector<std::vector<Rat>>& m) {
    std::vector<ZRow> rows;
    rows.reserve(m.size());
    for (const auto& r : m) rows.push_back(clear_denominators(r));
    return rank(std::move(rows));
}

/// Primitive-integer normalization of a rational vector: clear denominators,
/// strip content, make the first nonzero entry positive.
inline std::vector<Rat> primitive(const std::vector<Rat>& v) {
    ZRow z = clear_denominators(v);
    std::vector<Rat> out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = Rat(z[i]);
    return out;
}

/// Basis of the solution space of M x = 0 (M row-major). Each basis vector is
/// primitive-integer normalized; one vector per free column, in ascending
/// free-column order (deterministic).
inline std::vector<std::vector<Rat>> kernel(const std::vector<std::vector<Rat>>& m,
                                            size_t ncols) {
    std::vector<ZRow> rows;
    rows.reserve(m.size());
    for (const auto& r : m) {
        if (r.size() != ncols) throw std::invalid_argument("kernel: ragged matrix");
        rows.push_back(clear_denominators(r));
    }
    std::vector<int> piv = echelon(rows);
    std::vector<bool> is_pivot(ncols, false);
    for (int c : piv) is_pivot[size_t(c)] = true;

    std::vector<std::vector<Rat>> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> x(ncols, Rat(0));
        x[f] = Rat(1);
        for (size_t ri = rows.size(); ri-- > 0;) {
            size_t pc = size_t(piv[ri]);
            Rat s(0);
            for (size_t j = pc + 1; j < ncols; ++j)
                if (!x[j].is_zero() && rows[ri][j] != 0) s += Rat(rows[ri][j]) * x[j];
            x[pc] = -s / Rat(rows[ri][pc]);
        }
        basis.push_back(primitive(x));
    }
    return basis;
}

/// Solve A c = b for c, where A is m x k row-major and b has length m.
/// Returns std::nullopt when b is outside the column span. When solutions
/// form an affine space, returns the one with all free variables zero.
inline std::optional<std::vector<Rat>> solve(const std::vector<std::vector<Rat>>& a,
                                             const std::vector<Rat>& b) {
    size_t m = a.size();
    if (b.size() != m) throw std::invalid_argument("solve: size mismatch");
    size_t k = m ? a[0].size() : 0;
    std::vector<ZRow> rows;
    rows.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        std::vector<Rat> aug = a[i];
        aug.push_back(b[i]);
        rows.push_back(clear_denominators(aug));
    }
    std::vector<int> piv = echelon(rows);
    // Inconsistent iff some pivot lands in the augmented column.
    for (size_t ri = 0; ri < piv.size(); ++ri)
        if (size_t(piv[ri]) == k) return std::nullopt;
    std::vector<Rat> c(k, Rat(0));
    for (size_t ri = rows.size(); ri-- > 0;) {
        size_t pc = size_t(piv[ri]);
        Rat s = Rat(rows[ri][k]);
        for (size_t j = pc + 1; j < k; ++j)
            if (!c[j].is_zero() && rows[ri][j] != 0) s -= Rat(rows[ri][j]) * c[j];
        c[pc] = s / Rat(rows[ri][pc]);
    }
    return c;
}

} // namespace linalg

/// Canonical coordinatization of a family of polynomials: the union of their
/// monomials in descending canonical order, plus per-polynomial coordinate
/// vectors. This is the bridge between polynomial identities and exact linear
/// algebra.
class MonoBasis {
public:
    explicit MonoBasis(const VarTable& tab) : tab_(&tab) {}

    void collect(const Poly& p) {
        for (const auto& t : p.terms())
            if (!index_.count(t.m)) {
                index_.emplace(t.m, 0);
                monos_.push_back(t.m);
            }
    }

    /// Freeze the basis: sort descending, assign indices.
    void freeze() {
        std::sort(monos_.begin(), monos_.end(), [](const Mono& x, const Mono& y) { return y < x; });
        for (size_t i = 0; i < monos_.size(); ++i) index_[monos_[i]] = int(i);
        frozen_ = true;
    }

    size_t dim() const { return monos_.size(); }
    const std::vector<Mono>& monos() const { return monos_; }

    std::vector<Rat> coords(const Poly& p) const {
        if (!frozen_) throw std::logic_error("MonoBasis: not frozen");
        std::vector<Rat> v(monos_.size(), Rat(0));
        for (const auto& t : p.terms()) {
            auto it = index_.find(t.m);
            if (it == index_.end())
                throw std::invalid_argument("MonoBasis: polynomial sticks out of basis");
            v[size_t(it->second)] = Rat(t.num, p.common_den());
        }
        return v;
    }

    /// Rebuild a polynomial from coordinates (inverse of coords).
    Poly from_coords(const std::vector<Rat>& v) const {
        PolyBuilder b(*tab_);
        for (size_t i = 0; i < v.size() && i < monos_.size(); ++i)
            if (!v[i].is_zero()) b.add_rat(monos_[i], v[i]);
        return b.build();
    }

private:
    const VarTable* tab_;
    std::vector<Mono> monos_;
    std::map<Mono, int, std::less<Mono>> index_;
    bool frozen_ = false;
};

/// Decide whether `target` lies in the span of `gens` scaled by arbitrary
/// monomial multipliers of complementary weighted degree — i.e. membership of
/// a homogeneous polynomial in the degree-d slice of the ideal/module spanned
/// by homogeneous generators, where d = wdeg(target). Generators of degree
/// exactly d contribute themselves; lower-degree generators contribute all
/// monomial multiples m*g with wdeg(m) = d - wdeg(g). Returns the coefficient
/// list aligned with the produced column descriptions when solvable.
struct GradedMembership {
    bool member = false;
    /// Columns actually used: (generator index, multiplier monomial, coefficient).
    struct Part {
        int gen;
        Mono multiplier;
        Rat coef;
    };
    std::vector<Part> combination;
};

/// All monomials of the given weighted degree over a table whose variables all
/// have positive weight (ascending canonical order by construction, then
/// sorted descending for determinism).
inline std::vector<Mono> monomials_of_weight(const VarTable& tab, int d) {
    std::vector<Mono> out;
    Mono cur = Mono::one();
    // Depth-first over variables; weights must be positive.
    std::function<void(int, int)> rec = [&](int v, int remaining) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (v >= tab.arity()) return;
        int w = tab.weight(v);
        if (w <= 0) throw std::invalid_argument("monomials_of_weight: nonpositive weight");
        rec(v + 1, remaining);
        if (w <= remaining) {
            cur.set_exp(tab, v, cur.exp(v) + 1);
            rec(v, remaining - w);
            cur.set_exp(tab, v, cur.exp(v) - 1);
        }
    };
    rec(0, d);
    std::sort(out.begin(), out.end(), [](const Mono& x, const Mono& y) { return y < x; });
    return out;
}

inline GradedMembership graded_membership(const Poly& target, const std::vector<Poly>& gens) {
    GradedMembership res;
    int d = 0;
    if (!target.is_homogeneous(&d))
        throw std::invalid_argument("graded_membership: target not homogeneous");
    if (target.is_zero()) {
        res.member = true;
        return res;
    }
    const VarTable& tab = target.table();

    // Assemble columns: products m * g with matching degree.
    std::vector<Poly> cols;
    std::vector<GradedMembership::Part> meta;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const Poly& g = gens[gi];
        if (g.is_zero()) continue;
        int dg = 0;
        if (!g.is_homogeneous(&dg))
            throw std::invalid_argument("graded_membership: generator not homogeneous");
        if (dg > d) continue;
        for (const Mono& m : monomials_of_weight(tab, d - dg)) {
            Poly col = g * Poly::monomial(tab, m, Rat(1));
            if (col.is_zero()) continue;
            cols.push_back(col);
            meta.push_back({int(gi), m, Rat(0)});
        }
    }

    MonoBasis basis(tab);
    basis.collect(target);
    for (const auto& c : cols) basis.collect(c);
    basis.freeze();

    // Row-major system: rows indexed by monomials, columns by candidate
    // products; right-hand side = target.
    std::vector<std::vector<Rat>> a(basis.dim(), std::vector<Rat>(cols.size(), Rat(0)));
    for (size_t ci = 0; ci < cols.size(); ++ci) {
        std::vector<Rat> v = basis.coords(cols[ci]);
        for (size_t ri = 0; ri < basis.dim(); ++ri) a[ri][ci] = v[ri];
    }
    std::vector<Rat> b = basis.coords(target);
    auto sol = linalg::solve(a, b);
    if (!sol) return res;
    res.member = true;
    for (size_t ci = 0; ci < cols.size(); ++ci)
        if (!(*sol)[ci].is_zero()) {
            meta[ci].coef = (*sol)[ci];
            res.combination.push_back(meta[ci]);
        }
    return res;
}

} // namespace twoblock

#pragma once

#include "twoblock/liealg.hpp"
#include "twoblock/polynomial.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoblock {

using PolyMat = std::vector<std::vector<Poly>>;

/// Generic element of the subalgebra as a matrix over the coordinate
/// functions x_a(p) = tr(rho(p) rho(b_a)). Those coordinates expand a point
/// on the trace-dual basis, so X = sum_a x_a rho(b_a)^dual with the dual
/// basis obtained by inverting the exact trace Gram matrix. (Expanding on
/// the basis itself would break equivariance whenever the basis is not
/// trace-orthonormal, and the characteristic coefficients would stop being
/// Casimirs.)
inline PolyMat coordinate_matrix(const Realization& r) {
    const VarTable& tab = r.coordinate_table();
    int N = r.gl.N();
    int d = r.dim();
    std::vector<LieElt> elts(size_t(d), LieElt{});
    for (int a = 0; a < d; ++a) elts[size_t(a)] = r.basis[size_t(a)].element();
    std::vector<std::vector<Rat>> G(size_t(d), std::vector<Rat>(size_t(d), Rat(0)));
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            Rat t = lie_trace_pair(r.gl, elts[size_t(a)], elts[size_t(b)]);
            G[size_t(a)][size_t(b)] = t;
            G[size_t(b)][size_t(a)] = t;
        }
    PolyMat X(size_t(N), std::vector<Poly>(size_t(N), Poly::zero(tab)));
    std::vector<PolyBuilder> acc;
    acc.reserve(size_t(N) * size_t(N));
    for (int i = 0; i < N * N; ++i) acc.emplace_back(tab);
    for (int a = 0; a < d; ++a) {
        std::vector<Rat> ea(size_t(d), Rat(0));
        ea[size_t(a)] = Rat(1);
        auto c = linalg::solve(G, ea);
        if (!c)
            throw std::logic_error("coordinate_matrix: trace form degenerate on basis");
        Poly xa = Poly::variable(tab, a);
        for (int b = 0; b < d; ++b) {
            if ((*c)[size_t(b)].is_zero()) continue;
            for (const auto& [idx, coef] : elts[size_t(b)])
                acc[size_t(idx)].add_poly(xa, (*c)[size_t(b)] * coef);
        }
    }
    for (int u = 0; u < N; ++u)
        for (int v = 0; v < N; ++v) X[size_t(u)][size_t(v)] = acc[size_t(u) * size_t(N) + size_t(v)].build();
    return X;
}

/// Characteristic coefficients of a square polynomial matrix by the
/// Faddeev-LeVerrier recursion: det(t I - X) = t^N + sum_i q_i t^(N-i).
/// Exact at every step (the division by k is exact over the rationals and
/// stays exact in the common-denominator representation). `upto` truncates
/// the recursion after the first `upto` coefficients (all N when negative);
/// the recursion delivers q_1..q_k after k rounds, so low coefficients of a
/// large matrix never pay for the high ones.
inline std::vector<Poly> char_poly_coeffs(const PolyMat& X, int upto = -1) {
    size_t N = X.size();
    if (!N || X[0].size() != N)
        throw std::invalid_argument("char_poly_coeffs: matrix must be square and nonempty");
    size_t stop = (upto < 0 || size_t(upto) > N) ? N : size_t(upto);
    const VarTable& tab = X[0][0].table();
    auto trace = [&](const PolyMat& M) {
        Poly t = Poly::zero(tab);
        for (size_t i = 0; i < N; ++i) t = t + M[i][i];
        return t;
    };
    std::vector<Poly> q;
    PolyMat M = X;
    Poly c = -trace(M);
    q.push_back(c);
    for (size_t k = 2; k <= stop; ++k) {
        // M <- X (M + c I)
        PolyMat Mc = M;
        for (size_t i = 0; i < N; ++i) Mc[i][i] = Mc[i][i] + c;
        PolyMat next(N, std::vector<Poly>(N, Poly::zero(tab)));
        for (size_t i = 0; i < N; ++i)
            for (size_t j = 0; j < N; ++j) {
                PolyBuilder b(tab);
                for (size_t l = 0; l < N; ++l) {
                    if (X[i][l].is_zero() || Mc[l][j].is_zero()) continue;
                    b.add_poly(X[i][l] * Mc[l][j]);
                }
                next[i][j] = b.build();
            }
        M = std::move(next);
        c = (-trace(M)).scaled(Rat(1, long(k)));
        q.push_back(c);
    }
    return q;
}

/// Pfaffian of an antisymmetric polynomial matrix by recursive perfect-
/// matching expansion ((N-1)!! products). Throws unless Y^T = -Y exactly.
inline Poly pfaffian_of(const PolyMat& Y) {
    size_t N = Y.size();
    if (N % 2) throw std::invalid_argument("pfaffian_of: odd size");
    const VarTable& tab = Y[0][0].table();
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j)
            if (Y[i][j] != -Y[j][i])
                throw std::invalid_argument("pfaffian_of: matrix not antisymmetric");
    // Recursive expansion over the lowest live row.
    std::vector<int> live(N, 1);
    std::function<Poly()> rec = [&]() -> Poly {
        int i0 = -1;
        for (size_t i = 0; i < N; ++i)
            if (live[i]) {
                i0 = int(i);
                break;
            }
        if (i0 < 0) return Poly::constant(tab, Rat(1));
        live[size_t(i0)] = 0;
        PolyBuilder acc(tab);
        int pos = 0;
        for (size_t j = size_t(i0) + 1; j < N; ++j) {
            if (!live[j]) continue;
            if (!Y[size_t(i0)][j].is_zero()) {
                live[j] = 0;
                Poly sub = rec();
                live[j] = 1;
                Poly term = Y[size_t(i0)][j] * sub;
                acc.add_poly(term, Rat(pos % 2 ? -1 : 1));
            }
            ++pos;
        }
        live[size_t(i0)] = 1;
        return acc.build();
    };
    return rec();
}

/// Result of the Pfaffian construction: the normalized polynomial plus the
/// scalar relating its square to the top characteristic coefficient.
struct PfaffianData {
    Poly pf;          ///< lead coefficient normalized positive
    Rat lead_sign;    ///< scalar the raw expansion was multiplied by (+-1)
};

/// Pfaffian of the orthogonal realization: Pf(J X) in the subalgebra's
/// coordinates, lead-normalized.
inline PfaffianData pfaffian(const Realization& r) {
    if (r.kind != Kind::So)
        throw std::invalid_argument("pfaffian: defined for orthogonal realizations only");
    const VarTable& tab = r.coordinate_table();
    int N = r.gl.N();
    PolyMat X = coordinate_matrix(r);
    PolyMat Y(size_t(N), std::vector<Poly>(size_t(N), Poly::zero(tab)));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            PolyBuilder b(tab);
            for (int l = 0; l < N; ++l)
                if (!r.J[size_t(i)][size_t(l)].is_zero() && !X[size_t(l)][size_t(j)].is_zero())
                    b.add_poly(X[size_t(l)][size_t(j)], r.J[size_t(i)][size_t(l)]);
            Y[size_t(i)][size_t(j)] = b.build();
        }
    Poly pf = pfaffian_of(Y);
    PfaffianData out{pf, Rat(1)};
    if (!pf.is_zero() && pf.lead_coeff().sign() < 0) {
        out.pf = -pf;
        out.lead_sign = Rat(-1);
    }
    return out;
}

/// Precomputed bracket engine for the coordinate Lie-Poisson structure:
/// {x_a, x_b} = sum_d sc(a,b)_d x_d extended as a biderivation. The flattened
/// integer table plus a presence bitmap keep the inner loop cheap.
class PoissonStructure {
public:
    using Row = std::vector<std::pair<int, mpz_class>>;

    explicit PoissonStructure(const Realization& r) : r_(&r), tab_(&r.coordinate_table()) {
        int d = r.dim();
        dim_ = d;
        present_.assign(size_t(d) * size_t(d), 0);
        rows_.assign(size_t(d) * size_t(d), {});
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const auto& row = r.sc(a, b);
                if (row.empty()) continue;
                auto& out = rows_[size_t(a) * size_t(d) + size_t(b)];
                for (const auto& [idx, c] : row) {
                    if (c.den() != 1)
                        throw std::logic_error("PoissonStructure: non-integer structure constant");
                    out.emplace_back(idx, c.num());
                }
                present_[size_t(a) * size_t(d) + size_t(b)] = 1;
            }
    }

    /// Engine over an arbitrary table with explicit integer bracket rows
    /// ({x_a, x_b} = sum_d rows[a*dim+b] x_d); used for restricted tables.
    PoissonStructure(const VarTable& tab, std::vector<Row> rows)
        : r_(nullptr), tab_(&tab), dim_(tab.arity()), rows_(std::move(rows)) {
        if (rows_.size() != size_t(dim_) * size_t(dim_))
            throw std::invalid_argument("PoissonStructure: row table has wrong size");
        present_.assign(rows_.size(), 0);
        for (size_t i = 0; i < rows_.size(); ++i) present_[i] = rows_[i].empty() ? 0 : 1;
    }

    const VarTable& table() const { return *tab_; }
    const Realization& realization() const {
        if (!r_) throw std::logic_error("PoissonStructure: no realization attached");
        return *r_;
    }

    /// {F, G} for polynomials over the coordinate table.
    Poly bracket(const Poly& F, const Poly& G) const {
        if (&F.table() != tab_ || &G.table() != tab_)
            throw std::invalid_argument("PoissonStructure: wrong table");
        PolyBuilder acc(*tab_);
        acc.align_den(F.common_den() * G.common_den());
        acc.reserve(F.size() + G.size());
        auto supF = supports(F);
        auto supG = supports(G);
        for (size_t ti = 0; ti < F.terms().size(); ++ti) {
            const auto& tF = F.terms()[ti];
            for (size_t tj = 0; tj < G.terms().size(); ++tj) {
                const auto& tG = G.terms()[tj];
                mpz_class cc = tF.num * tG.num;
                Mono base = tF.m.mul(tG.m);
                for (auto [a, ea] : supF[ti])
                    for (auto [b, eb] : supG[tj]) {
                        if (!present_[size_t(a) * size_t(dim_) + size_t(b)]) continue;
                        const auto& row = rows_[size_t(a) * size_t(dim_) + size_t(b)];
                        Mono reduced = base;
                        reduced.set_exp(*tab_, a, reduced.exp(a) - 1);
                        reduced.set_exp(*tab_, b, reduced.exp(b) - 1);
                        mpz_class w = cc * ea * eb;
                        for (const auto& [d2, c] : row) {
                            Mono out = reduced;
                            out.set_exp(*tab_, d2, out.exp(d2) + 1);
                            acc.add_raw(out, w * c);
                        }
                    }
            }
        }
        return acc.build();
    }

private:
    static std::vector<std::vector<std::pair<int, int>>> supports(const Poly& p) {
        std::vector<std::vector<std::pair<int, int>>> out(p.terms().size());
        int arity = p.table().arity();
        for (size_t i = 0; i < p.terms().size(); ++i) {
            const Mono& m = p.terms()[i].m;
            for (int v = 0; v < arity; ++v)
                if (int e = m.exp(v)) out[i].emplace_back(v, e);
        }
        return out;
    }

    const Realization* r_;
    const VarTable* tab_;
    int dim_ = 0;
    std::vector<uint8_t> present_;
    std::vector<std::vector<std::pair<int, mpz_class>>> rows_;
};

/// Outcome of a Casimir check: success, or the first coordinate whose bracket
/// with the candidate fails to vanish, with the residual.
struct CasimirWitness {
    bool casimir = true;
    int failing_coordinate = -1;
    Poly residual;
};

inline CasimirWitness casimir_check(const PoissonStructure& ps, const Poly& F) {
    CasimirWitness w;
    const VarTable& tab = ps.table();
    for (int a = 0; a < tab.arity(); ++a) {
        Poly xa = Poly::variable(tab, a);
        Poly br = ps.bracket(F, xa);
        if (!br.is_zero()) {
            w.casimir = false;
            w.failing_coordinate = a;
            w.residual = br;
            return w;
        }
    }
    return w;
}

} // namespace twoblock

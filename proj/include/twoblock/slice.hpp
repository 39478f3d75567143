#pragma once

#include "twoblock/invariants.hpp"
#include "twoblock/liealg.hpp"
#include "twoblock/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoblock {

/// The transverse-slice model of the fixed subalgebra: the split into the
/// nonnegative-degree part p and the negative part n, the character chi on n,
/// an exact basis of the lowering-operator kernel with fresh slice variables,
/// and the substitution data for restricting polynomials to the slice.
///
/// Two polynomial homes are kept: functions on the dual of p (table `p_tab`,
/// where the reduced bracket lives) and polynomials in the slice variables
/// (table `slice_tab`, where dimension and membership checks are cheapest),
/// with restriction/transport mapping the first onto the second.
class SliceContext {
public:
    explicit SliceContext(const Realization& r) : r_(&r) {
        build_split();
        build_slice_basis();
        build_tables();
        build_restriction();
        build_bracket_rows();
        build_twisted_rows();
    }

    const Realization& realization() const { return *r_; }
    const VarTable& p_table() const { return p_tab_; }
    const VarTable& slice_table() const { return slice_tab_; }

    int p_dim() const { return int(p_idx_.size()); }
    int n_dim() const { return int(n_idx_.size()); }
    int slice_dim() const { return int(slice_elts_.size()); }

    /// Realization basis index of the a-th p-coordinate.
    int p_basis_index(int a) const { return p_idx_[size_t(a)]; }
    /// Realization basis index of the m-th n-coordinate.
    int n_basis_index(int m) const { return n_idx_[size_t(m)]; }
    /// chi value of the m-th n-coordinate: the trace pairing of e against it.
    const Rat& chi(int m) const { return chi_[size_t(m)]; }
    /// The k-th slice basis element of the lowering kernel.
    const LieElt& slice_element(int k) const { return slice_elts_[size_t(k)]; }

    /// Substitution homomorphism killing the n-coordinates at chi: the image
    /// of a polynomial on the full dual under x_m -> chi(x_m) for m in n,
    /// expressed over the p-table.
    Poly project_to_p(const Poly& F) const {
        require_table(F, r_->coordinate_table(), "project_to_p");
        return F.substitute(p_tab_, full_images_ptrs_);
    }

    /// Inclusion S(p) -> S(g): renames p-coordinates into the full table.
    Poly lift_to_full(const Poly& F) const {
        require_table(F, p_tab_, "lift_to_full");
        return F.substitute(r_->coordinate_table(), lift_images_ptrs_);
    }

    /// Result of a twisted-invariance test: the first n-element whose twisted
    /// action fails to kill F, with the residual polynomial.
    struct TwistWitness {
        bool invariant = true;
        int failing_n = -1;  ///< realization basis index of the witness
        Poly residual;
    };

    /// The twisted action of the m-th n-coordinate on S(p): the chi-shifted
    /// projection of the coadjoint action, computed over the p-table.
    Poly twisted_action(int m, const Poly& F) const {
        require_table(F, p_tab_, "twisted_action");
        PolyBuilder acc(p_tab_);
        acc.align_den(F.common_den());
        for (const auto& t : F.terms()) {
            for (int a = 0; a < p_dim(); ++a) {
                int e = t.m.exp(a);
                if (!e) continue;
                const TwRow& row = tw_rows_[size_t(m) * size_t(p_dim()) + size_t(a)];
                if (row.lin.empty() && row.cst == 0) continue;
                Mono reduced = t.m;
                reduced.set_exp(p_tab_, a, e - 1);
                mpz_class w = t.num * e;
                if (row.cst != 0) acc.add(reduced, w * row.cst, F.common_den() * row.cst_den);
                for (const auto& [d, c] : row.lin) {
                    Mono out = reduced;
                    out.set_exp(p_tab_, d, out.exp(d) + 1);
                    acc.add(out, w * c, F.common_den());
                }
            }
        }
        return acc.build();
    }

    /// Pass iff every n-basis twisted action kills F.
    TwistWitness twisted_invariance_check(const Poly& F) const {
        TwistWitness w;
        for (int m = 0; m < n_dim(); ++m) {
            Poly res = twisted_action(m, F);
            if (!res.is_zero()) {
                w.invariant = false;
                w.failing_n = n_idx_[size_t(m)];
                w.residual = res;
                return w;
            }
        }
        return w;
    }

    /// Reduced bracket on S(p). The nonnegative part is a subalgebra, so the
    /// coordinate rows close on p-coordinates exactly (asserted at build) and
    /// the projection after the ambient bracket is the identity.
    Poly slice_bracket(const Poly& F, const Poly& G) const { return p_poisson_->bracket(F, G); }

    /// Bracket with the twisted-invariance precondition enforced.
    Poly slice_bracket_checked(const Poly& F, const Poly& G) const {
        if (!twisted_invariance_check(F).invariant || !twisted_invariance_check(G).invariant)
            throw std::invalid_argument("slice_bracket: inputs must be twisted invariants");
        return slice_bracket(F, G);
    }

    const PoissonStructure& p_poisson() const { return *p_poisson_; }

    /// Restriction of a polynomial on the full dual to the slice: every
    /// coordinate becomes its trace pairing against e + sum_k z_k f_k.
    Poly restrict_to_slice(const Poly& F) const {
        require_table(F, r_->coordinate_table(), "restrict_to_slice");
        return F.substitute(slice_tab_, restrict_full_ptrs_);
    }

    /// Transport of a twisted invariant to slice coordinates (restriction of
    /// functions along the inclusion of the slice into e + the p-part's dual).
    Poly transport(const Poly& F) const {
        require_table(F, p_tab_, "transport");
        return F.substitute(slice_tab_, restrict_p_ptrs_);
    }

    /// Generic slice element rho(e) + sum_k z_k rho(f_k) as a matrix over the
    /// slice table; characteristic coefficients of this matrix are the
    /// restricted invariants.
    PolyMat slice_matrix() const {
        int N = r_->gl.N();
        PolyMat X(size_t(N), std::vector<Poly>(size_t(N), Poly::zero(slice_tab_)));
        std::vector<PolyBuilder> acc;
        acc.reserve(size_t(N) * size_t(N));
        for (int i = 0; i < N * N; ++i) acc.emplace_back(slice_tab_);
        for (const auto& [idx, c] : r_->e) acc[size_t(idx)].add_rat(Mono(), c);
        for (int k = 0; k < slice_dim(); ++k) {
            Poly zk = Poly::variable(slice_tab_, k);
            for (const auto& [idx, c] : slice_elts_[size_t(k)]) acc[size_t(idx)].add_poly(zk, c);
        }
        for (int u = 0; u < N; ++u)
            for (int v = 0; v < N; ++v)
                X[size_t(u)][size_t(v)] = acc[size_t(u) * size_t(N) + size_t(v)].build();
        return X;
    }

    /// Exact basis of the twisted invariants of one Kazhdan degree: the kernel
    /// of the stacked twisted actions on the monomial space of that weight.
    std::vector<Poly> twisted_invariant_space(int degree) const {
        auto monos = monomials_of_weight(p_tab_, degree);
        if (monos.empty()) return {};
        // Column j = coordinates of the twisted actions of mono j, stacked
        // over all n-elements; one shared output basis keeps columns aligned.
        std::vector<Poly> acted;
        acted.reserve(monos.size() * size_t(n_dim()));
        for (const auto& m : monos) {
            Poly mp = Poly::monomial(p_tab_, m, Rat(1));
            for (int i = 0; i < n_dim(); ++i) acted.push_back(twisted_action(i, mp));
        }
        MonoBasis basis(p_tab_);
        for (const auto& p : acted) basis.collect(p);
        basis.freeze();
        size_t rows_per = basis.dim() * size_t(n_dim());
        std::vector<std::vector<Rat>> mat(rows_per, std::vector<Rat>(monos.size(), Rat(0)));
        for (size_t j = 0; j < monos.size(); ++j)
            for (int m = 0; m < n_dim(); ++m) {
                auto coords = basis.coords(acted[j * size_t(n_dim()) + size_t(m)]);
                for (size_t i = 0; i < coords.size(); ++i)
                    mat[size_t(m) * basis.dim() + i][j] = coords[i];
            }
        auto ker = linalg::kernel(mat, monos.size());
        std::vector<Poly> out;
        out.reserve(ker.size());
        for (const auto& v : ker) {
            PolyBuilder b(p_tab_);
            for (size_t j = 0; j < monos.size(); ++j)
                if (!v[j].is_zero()) b.add_rat(monos[j], v[j]);
            out.push_back(b.build());
        }
        return out;
    }

    /// Dimension audit of the slice against the nilpotent members: both
    /// centralizer dimensions agree and the common fiber dimension is their
    /// excess over the rank.
    struct FiberAudit {
        int dim_slice;       ///< = centralizer dimension of f
        int centralizer_e;   ///< independent computation at e
        int rank;            ///< rank of the fixed subalgebra
        int fiber_dim;       ///< dim slice - rank
        bool consistent;     ///< centralizer dims at e and f agree
    };

    FiberAudit fiber_audit() const {
        FiberAudit a;
        a.dim_slice = slice_dim();
        a.centralizer_e = r_->centralizer_dim(r_->e);
        a.rank = r_->gl.N() / 2;
        a.fiber_dim = a.dim_slice - a.rank;
        a.consistent = (a.dim_slice == a.centralizer_e);
        return a;
    }

private:
    static void require_table(const Poly& F, const VarTable& t, const char* who) {
        if (&F.table() != &t) throw std::invalid_argument(std::string(who) + ": wrong table");
    }

    void build_split() {
        p_idx_ = r_->p_indices();
        n_idx_ = r_->n_indices();
        full_to_p_.assign(size_t(r_->dim()), -1);
        for (size_t a = 0; a < p_idx_.size(); ++a) full_to_p_[size_t(p_idx_[a])] = int(a);
        chi_.reserve(n_idx_.size());
        for (int m : n_idx_) {
            const FixedBasisElt& b = r_->basis[size_t(m)];
            Rat c = lie_trace_pair(r_->gl, r_->e, b.element());
            if (b.deg != -2 && !c.is_zero())
                throw std::logic_error("SliceContext: chi supported off degree -2");
            chi_.push_back(c);
        }
    }

    void build_slice_basis() {
        // Kernel of the lowering operator, one (degree, reflection-sign)
        // block at a time so each slice element is graded on both counts.
        std::map<std::pair<int, int>, std::vector<int>> blocks;
        for (int a = 0; a < r_->dim(); ++a) {
            const FixedBasisElt& b = r_->basis[size_t(a)];
            // Key by (Kazhdan weight of the coordinate, reflection sign with
            // +1 first) so low-weight slice variables come first.
            blocks[{2 - b.deg, -b.gamma}].push_back(a);
        }
        for (const auto& [key, idxs] : blocks) {
            int deg = 2 - key.first;
            // [f, b_a] lands in degree deg - 2; expand rows over that space.
            std::vector<int> target;
            for (int d = 0; d < r_->dim(); ++d)
                if (r_->basis[size_t(d)].deg == deg - 2) target.push_back(d);
            std::vector<int> tpos(size_t(r_->dim()), -1);
            for (size_t i = 0; i < target.size(); ++i) tpos[size_t(target[i])] = int(i);
            std::vector<std::vector<Rat>> mat(target.size(),
                                              std::vector<Rat>(idxs.size(), Rat(0)));
            for (size_t j = 0; j < idxs.size(); ++j) {
                LieElt br = lie_bracket(r_->gl, r_->f, r_->basis[size_t(idxs[j])].element());
                auto coords = r_->resolve(br);
                for (const auto& [d, c] : coords) {
                    if (tpos[size_t(d)] < 0)
                        throw std::logic_error("SliceContext: lowering action off-grade");
                    mat[size_t(tpos[size_t(d)])][j] = c;
                }
            }
            for (const auto& v : linalg::kernel(mat, idxs.size())) {
                LieElt elt;
                for (size_t j = 0; j < idxs.size(); ++j)
                    if (!v[j].is_zero())
                        elt = lie_add(elt, r_->basis[size_t(idxs[j])].element(), v[j]);
                slice_elts_.push_back(elt);
                slice_degs_.push_back(deg);
                slice_gammas_.push_back(-key.second);
            }
        }
        if (int(slice_elts_.size()) != r_->centralizer_dim(r_->f))
            throw std::logic_error("SliceContext: kernel dimension mismatch");
        for (int d : slice_degs_)
            if (2 - d < 2) throw std::logic_error("SliceContext: slice weight below 2");
    }

    void build_tables() {
        const VarTable& full = r_->coordinate_table();
        for (int a : p_idx_)
            p_tab_.add(full.name(a), full.weight(a), full.gamma_sign(a));
        for (int k = 0; k < int(slice_elts_.size()); ++k)
            slice_tab_.add("z" + std::to_string(k), 2 - slice_degs_[size_t(k)],
                           slice_gammas_[size_t(k)]);
    }

    void build_restriction() {
        // Full-table images under projection to p and under slice restriction.
        for (int a = 0; a < r_->dim(); ++a) {
            int p = full_to_p_[size_t(a)];
            if (p >= 0) {
                full_images_.push_back(Poly::variable(p_tab_, p));
            } else {
                int m = -1;
                for (size_t i = 0; i < n_idx_.size(); ++i)
                    if (n_idx_[i] == a) m = int(i);
                full_images_.push_back(Poly::constant(p_tab_, chi_[size_t(m)]));
            }
            const FixedBasisElt& b = r_->basis[size_t(a)];
            PolyBuilder img(slice_tab_);
            img.add_rat(Mono(), lie_trace_pair(r_->gl, r_->e, b.element()));
            for (int k = 0; k < slice_dim(); ++k) {
                Rat t = lie_trace_pair(r_->gl, slice_elts_[size_t(k)], b.element());
                if (!t.is_zero()) img.add_poly(Poly::variable(slice_tab_, k), t);
            }
            restrict_full_.push_back(img.build());
        }
        for (int a : p_idx_) restrict_p_.push_back(restrict_full_[size_t(a)]);
        for (int a = 0; a < int(p_idx_.size()); ++a)
            lift_images_.push_back(Poly::variable(r_->coordinate_table(), p_idx_[size_t(a)]));
        for (const Poly& p : full_images_) full_images_ptrs_.push_back(&p);
        for (const Poly& p : restrict_full_) restrict_full_ptrs_.push_back(&p);
        for (const Poly& p : restrict_p_) restrict_p_ptrs_.push_back(&p);
        for (const Poly& p : lift_images_) lift_images_ptrs_.push_back(&p);
    }

    void build_bracket_rows() {
        int d = p_dim();
        std::vector<PoissonStructure::Row> rows(size_t(d) * size_t(d));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                for (const auto& [idx, c] : r_->sc(p_idx_[size_t(a)], p_idx_[size_t(b)])) {
                    if (full_to_p_[size_t(idx)] < 0)
                        throw std::logic_error("SliceContext: p-part bracket not closed");
                    if (c.den() != 1)
                        throw std::logic_error("SliceContext: non-integer structure constant");
                    rows[size_t(a) * size_t(d) + size_t(b)].emplace_back(
                        full_to_p_[size_t(idx)], c.num());
                }
            }
        p_poisson_ = std::make_unique<PoissonStructure>(p_tab_, std::move(rows));
    }

    void build_twisted_rows() {
        tw_rows_.assign(size_t(n_dim()) * size_t(p_dim()), {});
        for (int m = 0; m < n_dim(); ++m)
            for (int a = 0; a < p_dim(); ++a) {
                TwRow& row = tw_rows_[size_t(m) * size_t(p_dim()) + size_t(a)];
                Rat cst(0);
                for (const auto& [idx, c] : r_->sc(n_idx_[size_t(m)], p_idx_[size_t(a)])) {
                    int p = full_to_p_[size_t(idx)];
                    if (p >= 0) {
                        if (c.den() != 1)
                            throw std::logic_error("SliceContext: non-integer structure constant");
                        row.lin.emplace_back(p, c.num());
                    } else {
                        int mm = -1;
                        for (size_t i = 0; i < n_idx_.size(); ++i)
                            if (n_idx_[i] == idx) mm = int(i);
                        cst = cst + c * chi_[size_t(mm)];
                    }
                }
                row.cst = cst.num();
                row.cst_den = cst.den();
            }
    }

    struct TwRow {
        std::vector<std::pair<int, mpz_class>> lin;
        mpz_class cst = 0;
        mpz_class cst_den = 1;
    };

    const Realization* r_;
    VarTable p_tab_, slice_tab_;
    std::vector<int> p_idx_, n_idx_, full_to_p_;
    std::vector<Rat> chi_;
    std::vector<LieElt> slice_elts_;
    std::vector<int> slice_degs_, slice_gammas_;
    std::vector<Poly> full_images_, restrict_full_, restrict_p_, lift_images_;
    std::vector<const Poly*> full_images_ptrs_, restrict_full_ptrs_, restrict_p_ptrs_,
        lift_images_ptrs_;
    std::unique_ptr<PoissonStructure> p_poisson_;
    std::vector<TwRow> tw_rows_;
};

/// Restricted invariants: characteristic coefficients of the generic slice
/// element, exact over the slice table.
inline std::vector<Poly> restricted_invariants(const SliceContext& ctx, int upto = -1) {
    return char_poly_coeffs(ctx.slice_matrix(), upto);
}

} // namespace twoblock

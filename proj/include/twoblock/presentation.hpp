#pragma once

/// Generator tables and relation verification for the two-block slice.
///
/// The slice coordinate ring carries a distinguished family of Poisson
/// generators produced by the t-element engine: two diagonal families
/// eta_1^{(2r)}, eta_2^{(2r)} (Kazhdan degree 4r) and one cross family
/// theta^{(r)} (degree 2r, defined for r > s12). They satisfy a closed set
/// of bracket relations, uniform in the partition:
///
///   R1: {eta_i^{(2r)}, eta_j^{(2s)}} = 0
///   R2: {eta_i^{(2r)}, theta^{(s)}} = +-sum_{t<r} eta_i^{(2t)} theta^{(2r+s-1-2t)}
///       (+ for i = 1, - for i = 2, with eta_i^{(0)} = 1)
///   R3: {theta^{(r)}, theta^{(s)}} = 1/2 sum_{t=r}^{s-1} theta^{(t)} theta^{(r+s-1-t)}
///       + (-1)^{s12} pi_{r,s} sum_t eta_2^{(r+s-1-2t)} etatilde_1^{(2t)}   (r < s)
///       where pi_{r,s} = (-1)^r - (-1)^s
///   R4: eta_1^{(2r)} = 0 once 2r exceeds the first part
///   R5: sum_t eta_1^{(2t)} theta^{(l1-2t+s12+1)} = 0   (symplectic only)
///
/// The realized brackets agree with these relations up to one global scalar
/// (the normalization of the reduced Poisson structure), fixed once per
/// algebra by calibrate() and shared by every relation instance.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "invariants.hpp"
#include "slice.hpp"
#include "telement.hpp"

namespace twoblock {

/// The rank-style parameter n used by the uniform formulas: half the ambient
/// size for the orthogonal realization, half plus one for the symplectic one.
/// In both cases the canonical central element sits in Kazhdan degree 2n and
/// the default relation sweep is bounded by 4n.
inline int rank_parameter(const Realization& r) {
    return r.kind == Kind::So ? r.pp.N() / 2 : r.pp.N() / 2 + 1;
}

/// Realized generator table for one algebra: every generator image needed by
/// the relation instances of Kazhdan degree <= degree_bound.
struct GeneratorTable {
    const SliceContext* ctx = nullptr;
    int n_param = 0;       ///< rank parameter (see rank_parameter)
    int s12 = 0;           ///< half the part difference
    int lambda1 = 0;       ///< smaller part
    int degree_bound = 0;  ///< Kazhdan bound on relation instances
    int max_super = 0;     ///< table covers superscripts <= this (= degree_bound/2)
    int tau_checked_cap = 0;  ///< parabolic-level involution checks ran up to here

    Poly one;                      ///< the constant 1 in the slice coordinates
    std::vector<Poly> eta1, eta2;  ///< eta_i^{(2r)} at index r (index 0 = 1)
    std::vector<Poly> theta_;      ///< theta^{(r)} at index r (r <= s12 unused)
    std::vector<Poly> eta1_tilde;  ///< inverse-series partners of eta1
    std::vector<int> cross_signs;  ///< measured pairing sign per theta superscript

    const Poly& eta(int i, int r) const {
        const std::vector<Poly>& v = i == 1 ? eta1 : eta2;
        if (i < 1 || i > 2 || r < 0 || r >= int(v.size()))
            throw std::out_of_range("GeneratorTable: eta superscript out of range");
        return v[size_t(r)];
    }
    const Poly& theta(int r) const {
        if (r <= s12 || r >= int(theta_.size()))
            throw std::out_of_range("GeneratorTable: theta superscript out of range");
        return theta_[size_t(r)];
    }
    const Poly& etat1(int r) const {
        if (r < 0 || r >= int(eta1_tilde.size()))
            throw std::out_of_range("GeneratorTable: tilde superscript out of range");
        return eta1_tilde[size_t(r)];
    }
};

/// Build the generator table, verifying on the way that every entry is a
/// twisted invariant, that the two cross images pair up with the parity sign
/// (-1)^(r+s12), and (up to the cap) that the defining combinations are fixed
/// by the involution at the parabolic level.
inline GeneratorTable build_generator_table(const SliceContext& ctx, int degree_bound = -1,
                                            int tau_check_cap = 8) {
    const Realization& r = ctx.realization();
    if (r.block_swapped)
        throw std::invalid_argument(
            "build_generator_table: the block-swapped realization has no in-block involution");

    GeneratorTable g;
    g.ctx = &ctx;
    g.n_param = rank_parameter(r);
    g.s12 = r.pp.s12();
    g.lambda1 = r.pp.part(1);
    g.degree_bound = degree_bound < 0 ? 4 * g.n_param : degree_bound;
    if (g.degree_bound < 2 * g.n_param)
        throw std::invalid_argument("build_generator_table: degree bound below 2n");
    g.max_super = g.degree_bound / 2;
    g.tau_checked_cap = tau_check_cap;
    g.one = Poly::constant(ctx.p_table(), Rat(1));

    TElementEngine eng(ctx);
    auto require_invariant = [&](const Poly& p, const std::string& who) {
        auto w = ctx.twisted_invariance_check(p);
        if (!w.invariant)
            throw std::logic_error("build_generator_table: " + who +
                                   " is not a twisted invariant");
    };
    auto require_tau_fixed = [&](const Poly& pb, const std::string& who) {
        if (eng.tau(pb) != pb)
            throw std::logic_error("build_generator_table: " + who +
                                   " is not fixed by the involution");
    };

    g.eta1.push_back(g.one);
    g.eta2.push_back(g.one);
    for (int rr = 1; 2 * rr <= g.max_super; ++rr) {
        for (int i : {1, 2}) {
            Poly img = eng.image(i, i, i - 1, 2 * rr);
            require_invariant(img, "eta_" + std::to_string(i) + "^(" + std::to_string(2 * rr) +
                                       ")");
            if (2 * rr <= tau_check_cap)
                require_tau_fixed(eng.pbar(i, i, i - 1, 2 * rr),
                                  "the diagonal element of order " + std::to_string(2 * rr));
            (i == 1 ? g.eta1 : g.eta2).push_back(img);
        }
    }

    g.theta_.assign(size_t(g.max_super) + 1, Poly::zero(ctx.p_table()));
    g.cross_signs.assign(size_t(g.max_super) + 1, 0);
    for (int rr = g.s12 + 1; rr <= g.max_super; ++rr) {
        Poly t1 = eng.image(1, 2, 1, rr);
        Poly t2 = eng.image(2, 1, 1, rr);
        int expect = ((rr + g.s12) % 2 == 0) ? +1 : -1;
        if (t1.is_zero() || t2 != t1.scaled(Rat(expect)))
            throw std::logic_error(
                "build_generator_table: cross images do not pair with the parity sign at r = " +
                std::to_string(rr));
        g.cross_signs[size_t(rr)] = expect;
        Poly th = t1 + t2.scaled(Rat(expect));
        require_invariant(th, "theta^(" + std::to_string(rr) + ")");
        if (rr <= tau_check_cap) {
            Poly comb = eng.pbar(1, 2, 1, rr) + eng.pbar(2, 1, 1, rr).scaled(Rat(expect));
            require_tau_fixed(comb, "the cross combination of order " + std::to_string(rr));
        }
        g.theta_[size_t(rr)] = th;
    }

    // Inverse series: sum_{t=0}^r eta_1^{(2t)} etatilde_1^{(2r-2t)} = 0 for r >= 1.
    g.eta1_tilde.push_back(g.one);
    for (int rr = 1; 2 * rr <= g.max_super; ++rr) {
        Poly acc = Poly::zero(ctx.p_table());
        for (int t = 1; t <= rr; ++t)
            acc = acc + g.eta(1, t) * g.etat1(rr - t);
        g.eta1_tilde.push_back(acc.scaled(Rat(-1)));
    }
    return g;
}

/// Result of checking one relation instance. The residual is the difference
/// between the realized left side and the calibrated right side; pass means
/// it vanished identically.
struct RelationResult {
    std::string relation_id;
    std::vector<int> indices;
    bool pass = false;
    Poly residual;
};

/// Fix the global bracket normalization: slice_bracket(eta_1^{(2)},
/// theta^{(s)}) must equal c * theta^{(s+1)} for one scalar c shared by all
/// probe superscripts. Returns c (never zero).
inline Rat calibrate(const GeneratorTable& g) {
    const SliceContext& ctx = *g.ctx;
    bool have = false;
    Rat c;
    int probes = 0;
    for (int s = g.s12 + 1; s < g.max_super && probes < 4; ++s, ++probes) {
        Poly lhs = ctx.slice_bracket(g.eta(1, 1), g.theta(s));
        const Poly& rhs = g.theta(s + 1);
        if (rhs.is_zero()) throw std::logic_error("calibrate: degenerate probe target");
        if (lhs.is_zero() || lhs.lead_mono() != rhs.lead_mono())
            throw std::logic_error("calibrate: probe bracket misses the expected target");
        Rat cand = lhs.lead_coeff() / rhs.lead_coeff();
        if (lhs != rhs.scaled(cand))
            throw std::logic_error("calibrate: probe bracket is not proportional to the target");
        if (have && cand != c)
            throw std::logic_error("calibrate: probes disagree on the scalar");
        c = cand;
        have = true;
    }
    if (!have || c.is_zero()) throw std::logic_error("calibrate: no usable probe");
    return c;
}

namespace detail {

inline RelationResult make_result(std::string id, std::vector<int> idx, Poly residual) {
    RelationResult rr;
    rr.relation_id = std::move(id);
    rr.indices = std::move(idx);
    rr.pass = residual.is_zero();
    rr.residual = std::move(residual);
    return rr;
}

} // namespace detail

/// Verify every relation instance whose output Kazhdan degree fits under the
/// table's bound, against the calibrated normalization c. Results come back
/// sorted by (relation id, indices).
inline std::vector<RelationResult> verify_relations(const GeneratorTable& g, const Rat& c) {
    const SliceContext& ctx = *g.ctx;
    const Realization& r = ctx.realization();
    int B = g.degree_bound, H = g.max_super;
    std::vector<RelationResult> out;

    // R1: diagonal families commute. Output degree 4r + 4s - 2.
    for (int i = 1; i <= 2; ++i)
        for (int j = i; j <= 2; ++j)
            for (int rr = 1; 2 * rr <= H; ++rr)
                for (int s = (i == j ? rr + 1 : 1); 2 * s <= H; ++s) {
                    if (4 * rr + 4 * s - 2 > B) continue;
                    Poly lhs = ctx.slice_bracket(g.eta(i, rr), g.eta(j, s));
                    out.push_back(detail::make_result("R1", {i, rr, j, s}, std::move(lhs)));
                }

    // R2: diagonal against cross. Output degree 4r + 2s - 2.
    for (int i = 1; i <= 2; ++i)
        for (int rr = 1; 2 * rr <= H; ++rr)
            for (int s = g.s12 + 1; s <= H; ++s) {
                if (4 * rr + 2 * s - 2 > B) continue;
                Poly lhs = ctx.slice_bracket(g.eta(i, rr), g.theta(s));
                Poly rhs = Poly::zero(ctx.p_table());
                for (int t = 0; t < rr; ++t)
                    rhs = rhs + g.eta(i, t) * g.theta(2 * rr + s - 1 - 2 * t);
                if (i == 2) rhs = rhs.scaled(Rat(-1));
                out.push_back(
                    detail::make_result("R2", {i, rr, s}, lhs - rhs.scaled(c)));
            }

    // R3: cross against cross, r < s. Output degree 2r + 2s - 2.
    for (int rr = g.s12 + 1; rr <= H; ++rr)
        for (int s = rr + 1; s <= H; ++s) {
            if (2 * rr + 2 * s - 2 > B) continue;
            Poly lhs = ctx.slice_bracket(g.theta(rr), g.theta(s));
            Poly rhs = Poly::zero(ctx.p_table());
            for (int t = rr; t < s; ++t) rhs = rhs + g.theta(t) * g.theta(rr + s - 1 - t);
            rhs = rhs.scaled(Rat(1, 2));
            int pi = ((rr % 2 == 0) ? 1 : -1) - ((s % 2 == 0) ? 1 : -1);
            if (pi != 0) {
                Poly extra = Poly::zero(ctx.p_table());
                for (int t = 0; 2 * t <= rr + s - 1; ++t) {
                    int m = rr + s - 1 - 2 * t;  // even because r + s is odd here
                    extra = extra + g.eta(2, m / 2) * g.etat1(t);
                }
                int sg = (g.s12 % 2 == 0) ? 1 : -1;
                rhs = rhs + extra.scaled(Rat(sg * pi));
            }
            out.push_back(detail::make_result("R3", {rr, s}, lhs - rhs.scaled(c)));
        }

    // R4: the first diagonal family truncates at the first part.
    for (int rr = 1; 2 * rr <= H; ++rr) {
        if (2 * rr <= g.lambda1 || 4 * rr > B) continue;
        out.push_back(detail::make_result("R4", {rr}, g.eta(1, rr)));
    }

    // R5: the symplectic boundary identity (degree 2n, always under the bound).
    if (r.kind == Kind::Sp) {
        Poly acc = Poly::zero(ctx.p_table());
        for (int t = 0; 2 * t <= g.lambda1; ++t)
            acc = acc + g.eta(1, t) * g.theta(g.lambda1 - 2 * t + g.s12 + 1);
        out.push_back(detail::make_result("R5", {}, std::move(acc)));
    }

    std::sort(out.begin(), out.end(), [](const RelationResult& a, const RelationResult& b) {
        if (a.relation_id != b.relation_id) return a.relation_id < b.relation_id;
        return a.indices < b.indices;
    });
    return out;
}

/// The canonical central element of the orthogonal slice, in generator form:
/// z = sum_t eta_1^{(2t)} theta^{(n-2t)}, Kazhdan degree 2n.
inline Poly central_element(const GeneratorTable& g) {
    if (g.ctx->realization().kind != Kind::So)
        throw std::invalid_argument("central_element: defined on the orthogonal side");
    Poly acc = Poly::zero(g.ctx->p_table());
    for (int t = 0; 2 * t <= g.lambda1 - 1; ++t)
        acc = acc + g.eta(1, t) * g.theta(g.n_param - 2 * t);
    return acc;
}

/// One bracket of the centrality sweep that failed, if any.
struct CentralityReport {
    bool central = false;
    std::string failing;  ///< label of the first generator with nonzero bracket
    Poly residual;
};

/// Check that F Poisson-commutes with every table generator whose bracket with
/// F stays under the degree bound. Generators generate, so this certifies
/// centrality of F in the bounded window.
inline CentralityReport centrality_check(const GeneratorTable& g, const Poly& F) {
    const SliceContext& ctx = *g.ctx;
    CentralityReport rep;
    int fd = F.is_zero() ? 0 : F.wdeg();
    auto probe = [&](const Poly& gen, const std::string& label) {
        if (!rep.failing.empty()) return;
        if (gen.is_zero()) return;
        if (fd + gen.wdeg() - 2 > g.degree_bound) return;
        Poly b = ctx.slice_bracket(F, gen);
        if (!b.is_zero()) {
            rep.failing = label;
            rep.residual = std::move(b);
        }
    };
    for (int i : {1, 2})
        for (int rr = 1; 2 * rr <= g.max_super; ++rr)
            probe(g.eta(i, rr), "eta_" + std::to_string(i) + "^(" + std::to_string(2 * rr) + ")");
    for (int rr = g.s12 + 1; rr <= g.max_super; ++rr)
        probe(g.theta(rr), "theta^(" + std::to_string(rr) + ")");
    rep.central = rep.failing.empty();
    return rep;
}

/// Reflection-parity bookkeeping for the table and the derived elements.
struct ParityReport {
    bool eta_fixed = false;       ///< both diagonal families are even
    bool theta_negated = false;   ///< the cross family is odd
    bool z_negated = true;        ///< the central element is odd (orthogonal only)
    bool ok() const { return eta_fixed && theta_negated && z_negated; }
};

inline ParityReport parity_check(const GeneratorTable& g) {
    ParityReport rep;
    rep.eta_fixed = true;
    rep.theta_negated = true;
    for (int i : {1, 2})
        for (int rr = 1; 2 * rr <= g.max_super; ++rr)
            if (g.eta(i, rr).apply_gamma() != g.eta(i, rr)) rep.eta_fixed = false;
    for (int rr = g.s12 + 1; rr <= g.max_super; ++rr)
        if (g.theta(rr).apply_gamma() != g.theta(rr).scaled(Rat(-1))) rep.theta_negated = false;
    if (g.ctx->realization().kind == Kind::So) {
        Poly z = central_element(g);
        rep.z_negated = z.apply_gamma() == z.scaled(Rat(-1));
    }
    return rep;
}

/// Identification of the central element with the restricted Pfaffian.
struct PfaffianIdentification {
    bool member = false;       ///< z restricted to the slice is a multiple of pf|
    Rat scalar;                ///< the multiple (nonzero on success)
    int odd_dim = -1;          ///< dimension of the sign-reversed invariant span in degree 2n
    bool odd_line_unique = false;
    bool pf_odd = false;       ///< the restricted Pfaffian itself is sign-reversed
    bool evens_fixed = false;  ///< restricted even coefficients are reflection-fixed
};

/// Enumerate all power products of the given generators with total weighted
/// degree exactly d.
inline void weighted_products(const std::vector<Poly>& gens, size_t from, int d,
                              const Poly& acc, std::vector<Poly>& out) {
    if (d == 0) {
        out.push_back(acc);
        return;
    }
    for (size_t k = from; k < gens.size(); ++k) {
        int w = gens[k].wdeg();
        if (w <= d) weighted_products(gens, k, d - w, acc * gens[k], out);
    }
}

inline PfaffianIdentification identify_pfaffian(const GeneratorTable& g) {
    const SliceContext& ctx = *g.ctx;
    const Realization& r = ctx.realization();
    if (r.kind != Kind::So)
        throw std::invalid_argument("identify_pfaffian: defined on the orthogonal side");
    PfaffianIdentification out;

    Poly pf_s = ctx.restrict_to_slice(pfaffian(r).pf);
    Poly z_s = ctx.transport(central_element(g));
    GradedMembership gm = graded_membership(z_s, {pf_s});
    out.member = gm.member;
    if (gm.member)
        for (const auto& part : gm.combination)
            if (part.gen == 0 && part.multiplier.is_one()) out.scalar = part.coef;
    if (out.scalar.is_zero()) out.member = false;

    // The invariant span in degree 2n: power products of the restricted even
    // coefficients (weights 4i <= 2n) and the restricted Pfaffian (weight 2n).
    std::vector<Poly> gens;
    std::vector<Poly> qs = restricted_invariants(ctx, g.n_param);
    out.evens_fixed = true;
    for (size_t m = 1; m <= qs.size(); ++m) {
        const Poly& q = qs[m - 1];
        if (q.is_zero()) continue;
        if (q.apply_gamma() != q) out.evens_fixed = false;
        gens.push_back(q);
    }
    out.pf_odd = pf_s.apply_gamma() == pf_s.scaled(Rat(-1));
    gens.push_back(pf_s);

    std::vector<Poly> prods;
    weighted_products(gens, 0, 2 * g.n_param, Poly::constant(ctx.slice_table(), Rat(1)), prods);
    MonoBasis basis(ctx.slice_table());
    std::vector<Poly> odd;
    for (const Poly& p : prods) {
        if (p.is_zero()) continue;
        if (p.apply_gamma() == p.scaled(Rat(-1))) odd.push_back(p);
        basis.collect(p);
    }
    basis.freeze();
    std::vector<std::vector<Rat>> rows;
    for (const Poly& p : odd) rows.push_back(basis.coords(p));
    out.odd_dim = rows.empty() ? 0 : linalg::rank_q(rows);
    out.odd_line_unique = out.odd_dim == 1;
    return out;
}

}  // namespace twoblock

#pragma once

/// Check drivers. Each suite builds the algebra(s) it needs, runs the
/// library-level verifications, and emits one certificate per check
/// instance, in dependency order: construction first (realize), then the
/// checks that consume the generator table (presentation, casimir,
/// pfaffian), then the cross-algebra checks (iso, psi, dims). Expensive
/// generator tables can be served from an on-disk cache; a hit is recorded
/// on the certificate that consumed it.

#include <memory>
#include <string>
#include <vector>

#include "cache.hpp"
#include "certificate.hpp"
#include "iso.hpp"
#include "presentation.hpp"

namespace twoblock {

struct CheckOptions {
    int bound = -1;         ///< relation/kernel degree bound; -1 means 4n
    std::string cache_dir;  ///< empty disables the cache
};

/// One algebra, fully constructed: realization, slice coordinates, and
/// (once ensure_table has run) the generator table with its calibration
/// scalar. Non-copyable because the slice context and table point back into
/// the realization.
struct AlgebraBundle {
    Realization real;
    SliceContext ctx;
    std::optional<GeneratorTable> table;
    bool table_cached = false;
    std::string corrupt_entry;  ///< path of a replaced corrupt cache file, if any
    Rat calibration;
    long long table_ms = 0;

    AlgebraBundle(Kind k, int l1, int l2)
        : real(k == Kind::So ? build_so_realization(l1, l2) : build_sp_realization(l1, l2)),
          ctx(real) {}
    AlgebraBundle(const AlgebraBundle&) = delete;
    AlgebraBundle& operator=(const AlgebraBundle&) = delete;

    int effective_bound(int bound) const {
        return bound > 0 ? bound : 4 * rank_parameter(real);
    }

    void ensure_table(const CheckOptions& opt) {
        if (table) return;
        if (opt.bound > 0 && opt.bound < 2 * rank_parameter(real))
            throw std::invalid_argument(
                "bound must be at least twice the rank parameter (" +
                std::to_string(2 * rank_parameter(real)) + ")");
        Stopwatch sw;
        int b = effective_bound(opt.bound);
        if (!opt.cache_dir.empty()) {
            GentabCacheResult res = load_generator_table(ctx, opt.cache_dir, b);
            corrupt_entry = res.corrupt_path;
            if (res.hit()) {
                table = std::move(res.table);
                table_cached = true;
            }
        }
        if (!table) {
            table = build_generator_table(ctx, b);
            if (!opt.cache_dir.empty()) save_generator_table(*table, opt.cache_dir);
        }
        calibration = calibrate(*table);
        table_ms = sw.ms();
    }
};

inline std::string partition_string(const Realization& r) {
    return std::to_string(r.pp.part(1)) + "," + std::to_string(r.pp.part(2));
}

inline ordered_json single_params(const Realization& r) {
    ordered_json p;
    p["kind"] = kind_name(r.kind);
    p["partition"] = partition_string(r);
    return p;
}

inline ordered_json pair_params(const AlgebraBundle& so, const AlgebraBundle& sp, int bound) {
    ordered_json p;
    p["so"] = partition_string(so.real);
    p["sp"] = partition_string(sp.real);
    p["bound"] = bound;
    return p;
}

/// Construction check: the realization was built (every structural
/// invariant is enforced by throwing during construction), and the slice
/// model's dimension bookkeeping is consistent.
inline Certificate realize_certificate(AlgebraBundle& ab, long long build_ms) {
    Certificate c;
    c.check_id = "realize";
    c.parameters = single_params(ab.real);
    auto audit = ab.ctx.fiber_audit();
    c.witnesses["dim"] = ab.real.dim();
    c.witnesses["centralizer_dim"] = audit.centralizer_e;
    c.witnesses["rank"] = audit.rank;
    c.witnesses["slice_dim"] = audit.dim_slice;
    c.witnesses["component_dim"] = audit.fiber_dim;
    c.witnesses["consistent"] = audit.consistent;
    c.set_status(audit.consistent);
    c.wall_time_ms = build_ms;
    return c;
}

/// Presentation check: calibration certificate followed by one certificate
/// per relation instance under the degree bound.
inline void presentation_certificates(AlgebraBundle& ab, const CheckOptions& opt,
                                      std::vector<Certificate>& out) {
    ab.ensure_table(opt);
    const GeneratorTable& g = *ab.table;

    Certificate cal;
    cal.check_id = "presentation.calibration";
    cal.parameters = single_params(ab.real);
    cal.parameters["bound"] = g.degree_bound;
    cal.witnesses["calibration"] = ab.calibration.str();
    cal.witnesses["cached"] = ab.table_cached;
    cal.set_status(!ab.calibration.is_zero());
    cal.wall_time_ms = ab.table_ms;
    out.push_back(cal);

    Stopwatch sw;
    std::vector<RelationResult> rels = verify_relations(g, ab.calibration);
    for (const RelationResult& rr : rels) {
        Certificate c;
        c.check_id = "presentation." + rr.relation_id;
        c.parameters = single_params(ab.real);
        c.parameters["indices"] = rr.indices;
        c.set_status(rr.pass);
        if (!rr.pass) c.residuals.push_back(rr.residual.str());
        out.push_back(c);
    }
    if (!out.empty()) out.back().wall_time_ms = sw.ms();
}

/// Central-element check (orthogonal side): z commutes with every bounded
/// generator, has the expected degree, is reflection-negated, and the
/// low-order bracket identity holds with the calibration scalar.
inline Certificate casimir_certificate(AlgebraBundle& ab, const CheckOptions& opt) {
    Certificate c;
    c.check_id = "casimir.z";
    c.parameters = single_params(ab.real);
    if (ab.real.kind != Kind::So) {
        c.status = "skip";
        c.witnesses["note"] = "central element is defined on the orthogonal side";
        return c;
    }
    Stopwatch sw;
    ab.ensure_table(opt);
    const GeneratorTable& g = *ab.table;
    Poly z = central_element(g);
    CentralityReport rep = centrality_check(g, z);
    bool gamma_ok = z.apply_gamma() == z.scaled(Rat(-1));

    int identities = 0;
    bool identities_ok = true;
    for (int s = g.s12 + 1; s + 1 <= g.max_super; ++s) {
        Poly lhs = ab.ctx.slice_bracket(g.eta(1, 1), g.theta(s));
        Poly rhs = g.theta(s + 1).scaled(ab.calibration);
        ++identities;
        if (lhs != rhs) {
            identities_ok = false;
            c.residuals.push_back((lhs + rhs.scaled(Rat(-1))).str());
            break;
        }
    }

    c.witnesses["degree"] = z.wdeg();
    c.witnesses["central"] = rep.central;
    c.witnesses["gamma_negated"] = gamma_ok;
    c.witnesses["bracket_identities"] = identities;
    c.witnesses["calibration"] = ab.calibration.str();
    c.witnesses["cached"] = ab.table_cached;
    if (!rep.central) {
        c.witnesses["failing_generator"] = rep.failing;
        c.residuals.push_back(rep.residual.str());
    }
    c.set_status(rep.central && gamma_ok && identities_ok && z.wdeg() == 2 * g.n_param);
    c.wall_time_ms = sw.ms();
    return c;
}

/// Pfaffian check (orthogonal side): z restricted to the slice is an exact
/// scalar multiple of the restricted Pfaffian, the sign-reversed invariant
/// line in that degree is unique, and the reflection parities of the whole
/// generator family come out as promised.
inline Certificate pfaffian_certificate(AlgebraBundle& ab, const CheckOptions& opt) {
    Certificate c;
    c.check_id = "pfaffian.identification";
    c.parameters = single_params(ab.real);
    if (ab.real.kind != Kind::So) {
        c.status = "skip";
        c.witnesses["note"] = "the Pfaffian is defined on the orthogonal side";
        return c;
    }
    Stopwatch sw;
    ab.ensure_table(opt);
    const GeneratorTable& g = *ab.table;
    PfaffianIdentification pid = identify_pfaffian(g);
    ParityReport par = parity_check(g);

    c.witnesses["scalar"] = pid.scalar.str();
    c.witnesses["odd_space_dim"] = pid.odd_dim;
    c.witnesses["odd_line_unique"] = pid.odd_line_unique;
    c.witnesses["pf_negated"] = pid.pf_odd;
    c.witnesses["invariants_fixed"] = pid.evens_fixed;
    c.witnesses["eta_fixed"] = par.eta_fixed;
    c.witnesses["theta_negated"] = par.theta_negated;
    c.witnesses["z_negated"] = par.z_negated;
    c.witnesses["cached"] = ab.table_cached;
    c.set_status(pid.member && !pid.scalar.is_zero() && pid.odd_line_unique && pid.pf_odd &&
                 pid.evens_fixed && par.ok());
    c.wall_time_ms = sw.ms();
    return c;
}

/// Restricted invariant generators: the even characteristic coefficients
/// (the odd ones vanish on the slice and are required to).
inline std::vector<Poly> even_invariants(const SliceContext& ctx, int upto) {
    std::vector<Poly> qs = restricted_invariants(ctx, upto);
    std::vector<Poly> out;
    for (size_t i = 0; i < qs.size(); ++i) {
        if (i % 2 == 0) {
            if (!qs[i].is_zero())
                throw std::logic_error("even_invariants: odd coefficient survives restriction");
            continue;
        }
        out.push_back(qs[i]);
    }
    return out;
}

/// Isomorphism chain: free generator sets on both sides, the coordinate
/// morphism with its bracket audit, the degreewise kernel/surjectivity
/// check, and the induced identification of nilpotent quotients.
inline void iso_certificates(AlgebraBundle& so, AlgebraBundle& sp, const CheckOptions& opt,
                             bool with_kernel, bool with_nilpotent, bool with_psi,
                             std::vector<Certificate>& out) {
    so.ensure_table(opt);
    sp.ensure_table(opt);
    int bound = so.effective_bound(opt.bound);

    Stopwatch sw_gen;
    FreeGeneratorSet so_gens = free_generator_set(*so.table);
    FreeGeneratorSet sp_gens = free_generator_set(*sp.table);
    for (AlgebraBundle* ab : {&so, &sp}) {
        const FreeGeneratorSet& fg = ab == &so ? so_gens : sp_gens;
        Certificate c;
        c.check_id = "iso.generators";
        c.parameters = single_params(ab->real);
        c.witnesses["count"] = fg.size();
        c.witnesses["matches_slice_dim"] = fg.cardinality_ok;
        c.witnesses["linearly_independent"] = fg.linear_rank_ok;
        c.witnesses["degrees_match"] = fg.degree_multiset_ok;
        c.witnesses["cached"] = ab->table_cached;
        c.set_status(fg.ok());
        out.push_back(c);
    }
    out.back().wall_time_ms = sw_gen.ms() + so.table_ms + sp.table_ms;

    Stopwatch sw_phi;
    SliceMorphism phi = build_phi(so_gens, *sp.table);
    PhiGeneratorAudit aud = phi_generator_audit(phi, so_gens, *sp.table, so.calibration,
                                                sp.calibration);
    {
        Certificate c;
        c.check_id = "iso.phi";
        c.parameters = pair_params(so, sp, bound);
        c.witnesses["graded"] = phi.graded;
        c.witnesses["generators_correspond"] = aud.symbols_match;
        c.witnesses["brackets_correspond"] = aud.brackets_match;
        c.witnesses["bracket_ratio"] = aud.ratio.str();
        c.witnesses["symbols_checked"] = aud.symbols_checked;
        c.witnesses["bracket_pairs_checked"] = aud.bracket_pairs_checked;
        c.set_status(phi.graded && aud.pass());
        c.wall_time_ms = sw_phi.ms();
        out.push_back(c);
    }

    if (with_kernel) {
        Stopwatch sw;
        Poly z_slice = so.ctx.transport(central_element(*so.table));
        KernelCheckResult kc = kernel_check(phi, z_slice, bound);
        Certificate c;
        c.check_id = "iso.kernel";
        c.parameters = pair_params(so, sp, bound);
        c.witnesses["z_maps_to_zero"] = kc.phi_z_zero;
        ordered_json rows = ordered_json::array();
        for (const auto& row : kc.rows) {
            ordered_json r;
            r["degree"] = row.degree;
            r["source_dim"] = row.source_dim;
            r["target_dim"] = row.target_dim;
            r["image_rank"] = row.image_rank;
            r["kernel_dim"] = row.kernel_dim;
            r["z_ideal_dim"] = row.z_ideal_dim;
            rows.push_back(r);
        }
        c.witnesses["degrees"] = rows;
        c.set_status(kc.pass);
        c.wall_time_ms = sw.ms();
        out.push_back(c);
    }

    std::vector<Poly> so_q, sp_q;
    Poly pf_slice;
    if (with_nilpotent || with_psi) {
        int upto = 2 * so.table->n_param - 2;
        so_q = even_invariants(so.ctx, upto);
        sp_q = even_invariants(sp.ctx, upto);
        pf_slice = so.ctx.restrict_to_slice(pfaffian(so.real).pf);
    }

    if (with_nilpotent) {
        Stopwatch sw;
        std::vector<Poly> so_inv = so_q;
        so_inv.push_back(pf_slice);
        NilpotentIsoResult ni = nilpotent_iso_check(phi, so_inv, sp_q, bound);
        Certificate c;
        c.check_id = "iso.nilpotent";
        c.parameters = pair_params(so, sp, bound);
        c.witnesses["generators_mapped"] = ni.generators_mapped;
        c.witnesses["source_component_dim"] = ni.source_component_dim;
        c.witnesses["target_component_dim"] = ni.target_component_dim;
        ordered_json rows = ordered_json::array();
        for (const auto& row : ni.rows) {
            ordered_json r;
            r["degree"] = row.degree;
            r["source_quotient_dim"] = row.source_quotient_dim;
            r["target_quotient_dim"] = row.target_quotient_dim;
            r["surjective"] = row.induced_surjective;
            rows.push_back(r);
        }
        c.witnesses["degrees"] = rows;
        c.set_status(ni.pass);
        c.wall_time_ms = sw.ms();
        out.push_back(c);
    }

    if (with_psi) {
        Stopwatch sw;
        PsiCheckResult pc = psi_check(phi, so_q, pf_slice, sp_q, bound);
        Certificate c;
        c.check_id = "iso.psi";
        c.parameters = pair_params(so, sp, bound);
        c.witnesses["odd_generator_killed"] = pc.odd_generator_killed;
        ordered_json rows = ordered_json::array();
        for (const auto& row : pc.rows) {
            ordered_json r;
            r["degree"] = row.degree;
            r["products"] = row.source_products;
            r["source_rank"] = row.source_rank;
            r["image_rank"] = row.image_rank;
            r["target_rank"] = row.target_rank;
            r["free_of_odd"] = row.odd_free_products;
            r["spans_target"] = row.spans_target;
            rows.push_back(r);
        }
        c.witnesses["degrees"] = rows;
        c.set_status(pc.pass);
        c.wall_time_ms = sw.ms();
        out.push_back(c);
    }
}

/// Component-dimension comparison for a partnered pair via the slice fiber.
inline Certificate dims_pair_certificate(AlgebraBundle& so, AlgebraBundle& sp) {
    Stopwatch sw;
    Certificate c;
    c.check_id = "dims.pair";
    ordered_json p;
    p["so"] = partition_string(so.real);
    p["sp"] = partition_string(sp.real);
    c.parameters = p;
    auto a = so.ctx.fiber_audit();
    auto b = sp.ctx.fiber_audit();
    c.witnesses["so_component_dim"] = a.fiber_dim;
    c.witnesses["sp_component_dim"] = b.fiber_dim;
    c.witnesses["equal"] = (a.fiber_dim == b.fiber_dim);
    c.set_status(a.consistent && b.consistent && a.fiber_dim == b.fiber_dim);
    c.wall_time_ms = sw.ms();
    return c;
}

/// Equal-block comparison: centralizer dimensions on both sides of the
/// pairing give the same component dimension.
inline Certificate very_even_certificate(int n) {
    Stopwatch sw;
    VeryEvenDims v = very_even_dim_check(n);
    Certificate c;
    c.check_id = "dims.very_even";
    c.parameters["n"] = n;
    c.witnesses["so_centralizer"] = v.so_centralizer;
    c.witnesses["sp_centralizer"] = v.sp_centralizer;
    c.witnesses["so_component_dim"] = v.so_component_dim;
    c.witnesses["sp_component_dim"] = v.sp_component_dim;
    c.witnesses["common"] = v.so_component_dim;
    c.set_status(v.equal);
    c.wall_time_ms = sw.ms();
    return c;
}

/// Everything the command line needs to know about one invocation.
struct RunConfig {
    std::string suite;            ///< realize|presentation|casimir|pfaffian|iso|psi|dims|very-even|all
    Kind kind = Kind::So;         ///< single-algebra checks
    int l1 = 0, l2 = 0;
    int so_l1 = 0, so_l2 = 0;     ///< pair checks
    int sp_l1 = 0, sp_l2 = 0;
    int very_even_n = 0;
    CheckOptions opt;
};

inline bool suite_needs_pair(const std::string& s) {
    return s == "iso" || s == "psi";
}

/// Run one suite (or, for "all", every suite that applies to the given
/// configuration) in dependency order. Cache warnings are collected rather
/// than printed so the caller controls the stream.
inline std::vector<Certificate> run_suite(const RunConfig& cfg,
                                          std::vector<std::string>& warnings) {
    std::vector<Certificate> out;

    auto note_corruption = [&warnings](const AlgebraBundle& ab) {
        if (!ab.corrupt_entry.empty())
            warnings.push_back("cache: corrupt entry " + ab.corrupt_entry +
                               " ignored; recomputed and overwritten");
    };

    if (cfg.suite == "dims" || cfg.suite == "very-even") {
        if (cfg.very_even_n > 0) {
            out.push_back(very_even_certificate(cfg.very_even_n));
            return out;
        }
        Stopwatch sw_so;
        AlgebraBundle so(Kind::So, cfg.so_l1, cfg.so_l2);
        long long so_ms = sw_so.ms();
        Stopwatch sw_sp;
        AlgebraBundle sp(Kind::Sp, cfg.sp_l1, cfg.sp_l2);
        long long sp_ms = sw_sp.ms();
        out.push_back(realize_certificate(so, so_ms));
        out.push_back(realize_certificate(sp, sp_ms));
        out.push_back(dims_pair_certificate(so, sp));
        return out;
    }

    if (suite_needs_pair(cfg.suite) || cfg.suite == "all-pair") {
        Stopwatch sw_so;
        AlgebraBundle so(Kind::So, cfg.so_l1, cfg.so_l2);
        long long so_ms = sw_so.ms();
        Stopwatch sw_sp;
        AlgebraBundle sp(Kind::Sp, cfg.sp_l1, cfg.sp_l2);
        long long sp_ms = sw_sp.ms();
        out.push_back(realize_certificate(so, so_ms));
        out.push_back(realize_certificate(sp, sp_ms));
        bool kernel = cfg.suite != "psi";
        bool nilp = cfg.suite != "psi";
        bool psi = cfg.suite == "psi" || cfg.suite == "all-pair";
        iso_certificates(so, sp, cfg.opt, kernel, nilp, psi, out);
        if (cfg.suite == "all-pair") out.push_back(dims_pair_certificate(so, sp));
        note_corruption(so);
        note_corruption(sp);
        return out;
    }

    // Single-algebra chain in dependency order.
    Stopwatch sw_build;
    AlgebraBundle ab(cfg.kind, cfg.l1, cfg.l2);
    long long build_ms = sw_build.ms();
    out.push_back(realize_certificate(ab, build_ms));
    if (cfg.suite == "realize") return out;

    if (cfg.suite == "presentation" || cfg.suite == "all") {
        presentation_certificates(ab, cfg.opt, out);
    }
    if (cfg.suite == "casimir" || cfg.suite == "all") {
        out.push_back(casimir_certificate(ab, cfg.opt));
    }
    if (cfg.suite == "pfaffian" || cfg.suite == "all") {
        out.push_back(pfaffian_certificate(ab, cfg.opt));
    }
    note_corruption(ab);
    return out;
}

}  // namespace twoblock

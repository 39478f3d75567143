#pragma once

/// On-disk cache for the expensive objects, in the same canonical text the
/// polynomials print. Entries are keyed by (kind, partition, degree bound,
/// tool version) — the version sits in the file name, so a version bump
/// invalidates every old entry without any migration logic. Every entry
/// carries an FNV checksum; a corrupt or truncated file is reported to the
/// caller, who recomputes and overwrites.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "certificate.hpp"
#include "presentation.hpp"
#include "slice.hpp"
#include "version.hpp"

namespace twoblock {

/// Cache file path for a generator table. The key is fully spelled out in
/// the name so entries for different algebras, bounds, or tool versions
/// never collide.
inline std::filesystem::path gentab_cache_path(const std::filesystem::path& dir, Kind k, int l1,
                                               int l2, int degree_bound) {
    std::string name = "gentab_" + std::string(kind_name(k)) + "_" + std::to_string(l1) + "_" +
                       std::to_string(l2) + "_b" + std::to_string(degree_bound) + "_v" +
                       TOOL_VERSION + ".txt";
    return dir / name;
}

/// Serialize a generator table to canonical text. Polynomials use the same
/// one-line format Poly::str produces and Poly::parse reads back, so the
/// round-trip is byte-identical.
inline std::string generator_table_text(const GeneratorTable& g) {
    const Realization& r = g.ctx->realization();
    std::ostringstream out;
    out << "twoblock-gentab 1\n";
    out << "tool " << TOOL_VERSION << "\n";
    out << "kind " << kind_name(r.kind) << "\n";
    out << "partition " << r.pp.part(1) << " " << r.pp.part(2) << "\n";
    out << "n_param " << g.n_param << "\n";
    out << "s12 " << g.s12 << "\n";
    out << "lambda1 " << g.lambda1 << "\n";
    out << "degree_bound " << g.degree_bound << "\n";
    out << "max_super " << g.max_super << "\n";
    out << "tau_checked_cap " << g.tau_checked_cap << "\n";
    out << "cross_signs " << g.cross_signs.size();
    for (int s : g.cross_signs) out << " " << s;
    out << "\n";
    auto family = [&out](const char* tag, const std::vector<Poly>& v) {
        out << tag << " " << v.size() << "\n";
        for (const Poly& p : v) out << p.str() << "\n";
    };
    family("eta1", g.eta1);
    family("eta2", g.eta2);
    family("theta", g.theta_);
    family("eta1_tilde", g.eta1_tilde);
    std::string body = out.str();
    return body + "checksum " + hex64(fnv1a64(body)) + "\n";
}

inline void save_generator_table(const GeneratorTable& g, const std::filesystem::path& dir) {
    const Realization& r = g.ctx->realization();
    std::filesystem::create_directories(dir);
    std::filesystem::path path =
        gentab_cache_path(dir, r.kind, r.pp.part(1), r.pp.part(2), g.degree_bound);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << generator_table_text(g);
}

/// Outcome of a cache probe. `corrupt_path` is non-empty when an entry
/// existed but failed its checksum or structural validation; the caller is
/// expected to warn, recompute, and overwrite.
struct GentabCacheResult {
    std::optional<GeneratorTable> table;
    std::string corrupt_path;
    bool hit() const { return table.has_value(); }
};

/// Load a generator table for this slice context, if a valid entry exists.
/// The parsed polynomials live over ctx.p_table(), so the context must be
/// the one the caller will use the table with.
inline GentabCacheResult load_generator_table(const SliceContext& ctx,
                                              const std::filesystem::path& dir,
                                              int degree_bound) {
    const Realization& r = ctx.realization();
    GentabCacheResult res;
    std::filesystem::path path =
        gentab_cache_path(dir, r.kind, r.pp.part(1), r.pp.part(2), degree_bound);
    std::ifstream in(path, std::ios::binary);
    if (!in) return res;  // plain miss

    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    auto corrupt = [&]() {
        res.table.reset();
        res.corrupt_path = path.string();
        return res;
    };

    // Separate the checksum trailer and verify it against the body.
    size_t mark = text.rfind("checksum ");
    if (mark == std::string::npos || mark == 0 || text[mark - 1] != '\n') return corrupt();
    std::string body = text.substr(0, mark);
    std::string trailer = text.substr(mark);
    if (trailer != "checksum " + hex64(fnv1a64(body)) + "\n") return corrupt();

    std::istringstream ls(body);
    std::string line;
    auto next = [&](std::string& out_line) -> bool { return bool(std::getline(ls, out_line)); };
    auto expect_kv = [&](const std::string& key, std::string& value) -> bool {
        std::string l;
        if (!next(l)) return false;
        if (l.rfind(key + " ", 0) != 0) return false;
        value = l.substr(key.size() + 1);
        return true;
    };

    try {
        std::string v;
        if (!next(line) || line != "twoblock-gentab 1") return corrupt();
        if (!expect_kv("tool", v) || v != TOOL_VERSION) return corrupt();
        if (!expect_kv("kind", v) || v != kind_name(r.kind)) return corrupt();
        if (!expect_kv("partition", v)) return corrupt();
        {
            std::istringstream ps(v);
            int a = 0, b = 0;
            if (!(ps >> a >> b) || a != r.pp.part(1) || b != r.pp.part(2)) return corrupt();
        }
        GeneratorTable g;
        g.ctx = &ctx;
        auto read_int = [&](const char* key, int& slot) -> bool {
            std::string raw;
            if (!expect_kv(key, raw)) return false;
            slot = std::stoi(raw);
            return true;
        };
        if (!read_int("n_param", g.n_param)) return corrupt();
        if (!read_int("s12", g.s12)) return corrupt();
        if (!read_int("lambda1", g.lambda1)) return corrupt();
        if (!read_int("degree_bound", g.degree_bound)) return corrupt();
        if (!read_int("max_super", g.max_super)) return corrupt();
        if (!read_int("tau_checked_cap", g.tau_checked_cap)) return corrupt();
        if (g.degree_bound != degree_bound) return corrupt();

        if (!expect_kv("cross_signs", v)) return corrupt();
        {
            std::istringstream cs(v);
            size_t count = 0;
            if (!(cs >> count)) return corrupt();
            g.cross_signs.resize(count);
            for (size_t i = 0; i < count; ++i)
                if (!(cs >> g.cross_signs[i])) return corrupt();
        }

        auto read_family = [&](const char* tag, std::vector<Poly>& slot) -> bool {
            std::string raw;
            if (!expect_kv(tag, raw)) return false;
            size_t count = std::stoul(raw);
            slot.clear();
            slot.reserve(count);
            for (size_t i = 0; i < count; ++i) {
                std::string pl;
                if (!next(pl)) return false;
                slot.push_back(Poly::parse(ctx.p_table(), pl));
            }
            return true;
        };
        if (!read_family("eta1", g.eta1)) return corrupt();
        if (!read_family("eta2", g.eta2)) return corrupt();
        if (!read_family("theta", g.theta_)) return corrupt();
        if (!read_family("eta1_tilde", g.eta1_tilde)) return corrupt();
        if (next(line)) return corrupt();  // trailing junk

        // Structural sanity: family sizes must match the advertised table
        // shape, and every nonzero entry must be homogeneous of its nominal
        // weight (entries inside the vanishing window are zero polynomials).
        if (int(g.eta1.size()) != g.max_super / 2 + 1) return corrupt();
        if (int(g.eta2.size()) != g.max_super / 2 + 1) return corrupt();
        if (int(g.theta_.size()) != g.max_super + 1) return corrupt();
        if (int(g.eta1_tilde.size()) != g.max_super / 2 + 1) return corrupt();
        auto weight_ok = [](const Poly& p, int expect) {
            if (p.is_zero()) return true;
            int w = 0;
            return p.is_homogeneous(&w) && w == expect;
        };
        for (int t = 0; t <= g.max_super / 2; ++t) {
            int expect = t == 0 ? 0 : 4 * t;
            if (!weight_ok(g.eta1[size_t(t)], expect)) return corrupt();
            if (!weight_ok(g.eta2[size_t(t)], expect)) return corrupt();
            if (!weight_ok(g.eta1_tilde[size_t(t)], expect)) return corrupt();
        }
        for (int s = g.s12 + 1; s <= g.max_super; ++s)
            if (!weight_ok(g.theta_[size_t(s)], 2 * s)) return corrupt();

        g.one = Poly::constant(ctx.p_table(), Rat(1));
        res.table = std::move(g);
        return res;
    } catch (const std::exception&) {
        return corrupt();
    }
}

/// Canonical text form of a realization's structure-constant table: the
/// fixed basis (name, weight, sign of the involutive symmetry) followed by
/// every nonzero bracket as a sparse coefficient list. Two builds of the
/// same algebra produce byte-identical text.
inline std::string realization_text(const Realization& r) {
    std::ostringstream out;
    out << "twoblock-realization 1\n";
    out << "tool " << TOOL_VERSION << "\n";
    out << "kind " << kind_name(r.kind) << "\n";
    out << "partition " << r.pp.part(1) << " " << r.pp.part(2) << "\n";
    out << "dim " << r.dim() << "\n";
    out << "basis " << r.basis.size() << "\n";
    for (const auto& b : r.basis)
        out << b.name << " " << b.deg << " " << b.gamma << "\n";
    std::ostringstream sc_out;
    size_t nonzero = 0;
    for (size_t a = 0; a < r.basis.size(); ++a) {
        for (size_t b = 0; b < r.basis.size(); ++b) {
            const auto& row = r.sc(int(a), int(b));
            if (row.empty()) continue;
            ++nonzero;
            sc_out << a << " " << b;
            for (const auto& [idx, coef] : row) sc_out << " " << idx << ":" << coef.str();
            sc_out << "\n";
        }
    }
    out << "brackets " << nonzero << "\n" << sc_out.str();
    std::string body = out.str();
    return body + "checksum " + hex64(fnv1a64(body)) + "\n";
}

}  // namespace twoblock

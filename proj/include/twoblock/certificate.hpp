#pragma once

/// Verification certificates: the machine-readable product of every check.
/// A certificate records what was checked (check_id + parameters), the
/// outcome (pass/fail/skip), the promised witnesses (calibration scalars,
/// identification scalars, dimension tables), and — on failure — the exact
/// residual polynomials in canonical text. Streams are deterministic: two
/// runs with the same configuration differ at most in wall_time_ms.

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "version.hpp"

namespace twoblock {

using ordered_json = nlohmann::ordered_json;

/// 64-bit FNV-1a over a byte string; used for input hashes and cache
/// checksums (stability matters, cryptographic strength does not).
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

/// Wall-clock stopwatch for certificate timing fields.
class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

struct Certificate {
    std::string check_id;
    ordered_json parameters = ordered_json::object();
    std::string status = "pass";  ///< pass | fail | skip
    ordered_json witnesses = ordered_json::object();
    std::vector<std::string> residuals;  ///< canonical polynomial text, failures only
    long long wall_time_ms = 0;

    void set_status(bool ok) { status = ok ? "pass" : "fail"; }
};

/// Input hash: stable digest of the check identity and its parameters (not
/// of the outcome), so reruns of the same check are recognizably the same.
inline std::string certificate_input_hash(const Certificate& c) {
    return hex64(fnv1a64(c.check_id + "|" + c.parameters.dump() + "|" + TOOL_VERSION));
}

inline ordered_json certificate_json(const Certificate& c) {
    ordered_json j;
    j["check_id"] = c.check_id;
    j["parameters"] = c.parameters;
    j["status"] = c.status;
    j["witnesses"] = c.witnesses;
    j["residuals"] = c.residuals;
    j["wall_time_ms"] = c.wall_time_ms;
    j["tool_version"] = TOOL_VERSION;
    j["input_hash"] = certificate_input_hash(c);
    return j;
}

inline ordered_json certificate_stream_json(const std::vector<Certificate>& certs) {
    ordered_json arr = ordered_json::array();
    for (const Certificate& c : certs) arr.push_back(certificate_json(c));
    return arr;
}

/// Human-readable rendering: one status line per certificate with the same
/// fields the JSON carries, witnesses flattened to key=value.
inline std::string certificate_stream_text(const std::vector<Certificate>& certs) {
    std::string out;
    int pass = 0, fail = 0, skip = 0;
    for (const Certificate& c : certs) {
        (c.status == "pass" ? pass : c.status == "fail" ? fail : skip)++;
        out += c.status;
        out.append(c.status.size() >= 4 ? 2 : 2 + 4 - c.status.size(), ' ');
        out += c.check_id;
        std::string kv;
        for (auto it = c.parameters.begin(); it != c.parameters.end(); ++it)
            kv += (kv.empty() ? "" : " ") + it.key() + "=" + it.value().dump();
        for (auto it = c.witnesses.begin(); it != c.witnesses.end(); ++it)
            kv += (kv.empty() ? "" : " ") + it.key() + "=" + it.value().dump();
        if (!kv.empty()) out += "  [" + kv + "]";
        out += "  (" + std::to_string(c.wall_time_ms) + " ms)\n";
        for (const std::string& r : c.residuals) out += "      residual: " + r + "\n";
    }
    out += "total: " + std::to_string(certs.size()) + "  pass: " + std::to_string(pass) +
           "  fail: " + std::to_string(fail) + "  skip: " + std::to_string(skip) + "\n";
    return out;
}

/// Exit status as a pure function of certificate statuses: 0 when nothing
/// failed (skips are benign), 1 otherwise.
inline int certificate_exit_status(const std::vector<Certificate>& certs) {
    for (const Certificate& c : certs)
        if (c.status == "fail") return 1;
    return 0;
}

}  // namespace twoblock

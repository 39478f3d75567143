/// Command-line front end. Three verbs:
///
///   realize  — construct one algebra and certify the construction audit
///   check    — run one named check suite and emit its certificates
///   report   — run every suite that applies to the configuration
///
/// Certificates stream to stdout as a JSON array (or a readable table with
/// --format text); warnings go to stderr. Exit status: 0 when every
/// certificate passed, 1 when any failed, 2 on a usage error, 3 on an
/// internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twoblock/suites.hpp"
#include "twoblock/version.hpp"

namespace {

using namespace twoblock;

std::pair<int, int> parse_partition(const std::string& s) {
    size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("partition must be of the form 'a,b', got '" + s + "'");
    size_t used = 0;
    int a = std::stoi(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("bad partition entry in '" + s + "'");
    std::string rest = s.substr(comma + 1);
    int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("bad partition entry in '" + s + "'");
    if (a <= 0 || b <= 0) throw std::invalid_argument("partition entries must be positive");
    return {a, b};
}

Kind parse_kind(const std::string& s) {
    if (s == "so") return Kind::So;
    if (s == "sp") return Kind::Sp;
    throw std::invalid_argument("kind must be 'so' or 'sp', got '" + s + "'");
}

/// Flags shared by all verbs; validation happens once the verb is known.
struct CliFlags {
    std::string kind;
    std::string partition;
    std::vector<std::string> pair;  ///< two tokens "so:a,b" "sp:c,d"
    int very_even = 0;
    int bound = -1;
    std::string format = "json";
    std::string cache_dir;
    std::string config_file;
};

void add_common_flags(CLI::App* cmd, CliFlags& f) {
    cmd->add_option("--kind", f.kind, "algebra kind: so or sp");
    cmd->add_option("--partition", f.partition, "two-part partition, e.g. 3,3");
    cmd->add_option("--pair", f.pair,
                    "partnered pair as two tokens, e.g. --pair so:3,3 sp:2,2")
        ->expected(2);
    cmd->add_option("--very-even", f.very_even, "equal-block comparison for this even n");
    cmd->add_option("--bound", f.bound, "degree bound for relation and kernel checks");
    cmd->add_option("--format", f.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--cache-dir", f.cache_dir, "directory for the generator-table cache");
    cmd->add_option("--config", f.config_file,
                    "plain-text key=value configuration file (flags win on conflict)");
}

/// Apply a key=value configuration file. A key fills its flag only when the
/// flag was not given on the command line, so explicit flags always win.
/// Recognized keys mirror the long options; '#' starts a comment.
void apply_config_file(CLI::App* cmd, CliFlags& f) {
    std::ifstream in(f.config_file);
    if (!in) throw std::invalid_argument("cannot read config file '" + f.config_file + "'");
    auto given = [cmd](const char* opt) { return cmd->count(opt) > 0; };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key=value");
        auto strip = [](std::string s) {
            size_t x = s.find_first_not_of(" \t");
            if (x == std::string::npos) return std::string();
            size_t y = s.find_last_not_of(" \t");
            return s.substr(x, y - x + 1);
        };
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (key == "kind") {
            if (!given("--kind")) f.kind = val;
        } else if (key == "partition") {
            if (!given("--partition")) f.partition = val;
        } else if (key == "pair") {
            if (!given("--pair")) {
                f.pair.clear();
                std::istringstream ps(val);
                std::string tok;
                while (ps >> tok) f.pair.push_back(tok);
            }
        } else if (key == "very-even") {
            if (!given("--very-even")) f.very_even = std::stoi(val);
        } else if (key == "bound") {
            if (!given("--bound")) f.bound = std::stoi(val);
        } else if (key == "format") {
            if (!given("--format")) f.format = val;
        } else if (key == "cache-dir") {
            if (!given("--cache-dir")) f.cache_dir = val;
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (f.format != "json" && f.format != "text")
        throw std::invalid_argument("format must be json or text");
}

void fill_pair(const CliFlags& f, RunConfig& cfg) {
    bool got_so = false, got_sp = false;
    for (const std::string& tok : f.pair) {
        size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("pair token must be 'so:a,b' or 'sp:c,d', got '" + tok +
                                        "'");
        Kind k = parse_kind(tok.substr(0, colon));
        auto [a, b] = parse_partition(tok.substr(colon + 1));
        if (k == Kind::So) {
            cfg.so_l1 = a;
            cfg.so_l2 = b;
            got_so = true;
        } else {
            cfg.sp_l1 = a;
            cfg.sp_l2 = b;
            got_sp = true;
        }
    }
    if (!got_so || !got_sp)
        throw std::invalid_argument("--pair needs one so: token and one sp: token");
}

void fill_single(const CliFlags& f, RunConfig& cfg) {
    if (f.kind.empty() || f.partition.empty())
        throw std::invalid_argument("this check needs --kind and --partition");
    cfg.kind = parse_kind(f.kind);
    std::tie(cfg.l1, cfg.l2) = parse_partition(f.partition);
}

RunConfig make_config(const std::string& verb, const std::string& suite, const CliFlags& f) {
    RunConfig cfg;
    cfg.opt.bound = f.bound;
    cfg.opt.cache_dir = f.cache_dir;

    if (verb == "realize") {
        cfg.suite = "realize";
        fill_single(f, cfg);
        return cfg;
    }

    if (verb == "report") {
        if (f.very_even > 0) {
            cfg.suite = "very-even";
            cfg.very_even_n = f.very_even;
        } else if (!f.pair.empty()) {
            cfg.suite = "all-pair";
            fill_pair(f, cfg);
        } else {
            cfg.suite = "all";
            fill_single(f, cfg);
        }
        return cfg;
    }

    // verb == "check"
    static const std::vector<std::string> suites = {
        "realize", "presentation", "casimir", "pfaffian", "iso", "psi", "dims", "very-even"};
    if (std::find(suites.begin(), suites.end(), suite) == suites.end())
        throw std::invalid_argument("unknown check '" + suite +
                                    "' (expected one of realize, presentation, casimir, "
                                    "pfaffian, iso, psi, dims, very-even)");
    cfg.suite = suite;
    if (suite_needs_pair(suite)) {
        if (f.pair.empty()) throw std::invalid_argument("check " + suite + " needs --pair");
        fill_pair(f, cfg);
    } else if (suite == "very-even") {
        if (f.very_even <= 0) throw std::invalid_argument("check very-even needs --very-even N");
        cfg.very_even_n = f.very_even;
    } else if (suite == "dims") {
        if (f.very_even > 0)
            cfg.very_even_n = f.very_even;
        else if (!f.pair.empty())
            fill_pair(f, cfg);
        else
            throw std::invalid_argument("check dims needs --pair or --very-even N");
    } else {
        fill_single(f, cfg);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-block slice constructions with machine-checked certificates"};
    app.set_version_flag("--version", std::string(twoblock::TOOL_VERSION));
    app.require_subcommand(1);

    CliFlags flags;
    CLI::App* realize_cmd = app.add_subcommand("realize", "construct one algebra and certify it");
    add_common_flags(realize_cmd, flags);

    std::string suite;
    CLI::App* check_cmd = app.add_subcommand("check", "run one named check suite");
    check_cmd->add_option("suite", suite, "which checks to run")->required();
    add_common_flags(check_cmd, flags);

    CLI::App* report_cmd =
        app.add_subcommand("report", "run every applicable check for the configuration");
    add_common_flags(report_cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string verb = realize_cmd->parsed() ? "realize" : check_cmd->parsed() ? "check" : "report";
    CLI::App* active = realize_cmd->parsed() ? realize_cmd : check_cmd->parsed() ? check_cmd
                                                                                 : report_cmd;

    try {
        if (!flags.config_file.empty()) apply_config_file(active, flags);
        twoblock::RunConfig cfg = make_config(verb, suite, flags);
        std::vector<std::string> warnings;
        std::vector<twoblock::Certificate> certs = twoblock::run_suite(cfg, warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
        if (flags.format == "text")
            std::cout << twoblock::certificate_stream_text(certs);
        else
            std::cout << twoblock::certificate_stream_json(certs).dump(2) << "\n";
        return twoblock::certificate_exit_status(certs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "twoblock/cache.hpp"
#include "twoblock/certificate.hpp"
#include "twoblock/suites.hpp"

using namespace twoblock;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Drop the lines that are allowed to differ between runs (timing).
std::string strip_timing(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("wall_time_ms") == std::string::npos) out += line + "\n";
    return out;
}

#ifdef TB_CLI_PATH
struct CliResult {
    int exit_code = -1;
    std::string out, err;
};

CliResult run_cli(const std::string& args) {
    fs::path dir = fs::temp_directory_path() / "twoblock_cli_io";
    fs::create_directories(dir);
    fs::path out = dir / "out.txt", err = dir / "err.txt";
    std::string cmd = std::string(TB_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}
#endif

}  // namespace

TEST_CASE("certificate json carries the full schema in fixed order") {
    Certificate c;
    c.check_id = "demo.check";
    c.parameters["kind"] = "so";
    c.witnesses["value"] = 7;
    c.wall_time_ms = 123;
    ordered_json j = certificate_json(c);

    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    REQUIRE(keys == std::vector<std::string>{"check_id", "parameters", "status", "witnesses",
                                             "residuals", "wall_time_ms", "tool_version",
                                             "input_hash"});
    REQUIRE(j["status"] == "pass");
    REQUIRE(j["tool_version"] == TOOL_VERSION);

    // The input hash identifies the check instance, not its outcome.
    Certificate c2 = c;
    c2.status = "fail";
    c2.wall_time_ms = 9999;
    REQUIRE(certificate_json(c2)["input_hash"] == j["input_hash"]);
    Certificate c3 = c;
    c3.parameters["kind"] = "sp";
    REQUIRE(certificate_json(c3)["input_hash"] != j["input_hash"]);
}

TEST_CASE("fnv1a64 matches the reference vectors") {
    REQUIRE(fnv1a64("") == 0xcbf29ce484222325ull);
    REQUIRE(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    REQUIRE(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("exit status is a pure function of certificate statuses") {
    Certificate pass, fail, skip;
    fail.status = "fail";
    skip.status = "skip";
    REQUIRE(certificate_exit_status({}) == 0);
    REQUIRE(certificate_exit_status({pass, skip}) == 0);
    REQUIRE(certificate_exit_status({pass, fail, skip}) == 1);
}

TEST_CASE("generator table cache round-trips byte-identically") {
    fs::path dir = fs::temp_directory_path() / "twoblock_cache_test";
    fs::remove_all(dir);

    Realization r = build_so_realization(3, 3);
    SliceContext ctx(r);
    GeneratorTable g = build_generator_table(ctx);
    std::string text = generator_table_text(g);
    REQUIRE(text.rfind("twoblock-gentab 1\n", 0) == 0);

    save_generator_table(g, dir);
    fs::path entry = gentab_cache_path(dir, Kind::So, 3, 3, g.degree_bound);
    REQUIRE(fs::exists(entry));
    REQUIRE(entry.filename().string().find(TOOL_VERSION) != std::string::npos);
    REQUIRE(slurp(entry) == text);

    GentabCacheResult res = load_generator_table(ctx, dir, g.degree_bound);
    REQUIRE(res.hit());
    REQUIRE(res.corrupt_path.empty());
    REQUIRE(generator_table_text(*res.table) == text);

    // The reloaded table is usable: same calibration, same central element.
    REQUIRE(calibrate(*res.table) == calibrate(g));
    REQUIRE(central_element(*res.table) == central_element(g));

    // A different bound is a different key: clean miss, no corruption.
    GentabCacheResult other = load_generator_table(ctx, dir, g.degree_bound + 2);
    REQUIRE(!other.hit());
    REQUIRE(other.corrupt_path.empty());

    SECTION("a corrupt entry is detected, not trusted") {
        std::ofstream(entry, std::ios::binary | std::ios::app) << "junk\n";
        GentabCacheResult bad = load_generator_table(ctx, dir, g.degree_bound);
        REQUIRE(!bad.hit());
        REQUIRE(bad.corrupt_path == entry.string());
    }
    SECTION("a truncated entry is detected") {
        std::string cut = text.substr(0, text.size() / 2);
        std::ofstream(entry, std::ios::binary | std::ios::trunc) << cut;
        GentabCacheResult bad = load_generator_table(ctx, dir, g.degree_bound);
        REQUIRE(!bad.hit());
        REQUIRE(!bad.corrupt_path.empty());
    }
    SECTION("an interior edit fails the checksum even when the text parses") {
        std::string twisted = text;
        size_t pos = twisted.find("1/4");
        REQUIRE(pos != std::string::npos);
        twisted.replace(pos, 3, "3/4");
        std::ofstream(entry, std::ios::binary | std::ios::trunc) << twisted;
        GentabCacheResult bad = load_generator_table(ctx, dir, g.degree_bound);
        REQUIRE(!bad.hit());
        REQUIRE(!bad.corrupt_path.empty());
    }
}

TEST_CASE("realization structure-constant text is deterministic") {
    std::string a = realization_text(build_so_realization(3, 3));
    std::string b = realization_text(build_so_realization(3, 3));
    REQUIRE(a == b);
    REQUIRE(a.rfind("twoblock-realization 1\n", 0) == 0);
    REQUIRE(a.find("kind so") != std::string::npos);
    std::string c = realization_text(build_sp_realization(2, 2));
    REQUIRE(a != c);
}

TEST_CASE("presentation suite emits one certificate per relation instance") {
    RunConfig cfg;
    cfg.suite = "presentation";
    cfg.kind = Kind::So;
    cfg.l1 = 3;
    cfg.l2 = 3;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    REQUIRE(warnings.empty());
    // realize + calibration + 34 relation instances
    REQUIRE(certs.size() == 36);
    REQUIRE(certs[0].check_id == "realize");
    REQUIRE(certs[1].check_id == "presentation.calibration");
    REQUIRE(certs[1].witnesses["calibration"] == "1");
    for (const Certificate& c : certs) REQUIRE(c.status == "pass");
    REQUIRE(certificate_exit_status(certs) == 0);
}

TEST_CASE("casimir and pfaffian checks skip on the symplectic side") {
    RunConfig cfg;
    cfg.suite = "casimir";
    cfg.kind = Kind::Sp;
    cfg.l1 = 2;
    cfg.l2 = 2;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    REQUIRE(certs.size() == 2);
    REQUIRE(certs[1].status == "skip");
    REQUIRE(certificate_exit_status(certs) == 0);

    cfg.suite = "pfaffian";
    certs = run_suite(cfg, warnings);
    REQUIRE(certs.back().status == "skip");
}

TEST_CASE("casimir suite certifies centrality, degree, and parity") {
    RunConfig cfg;
    cfg.suite = "casimir";
    cfg.kind = Kind::So;
    cfg.l1 = 3;
    cfg.l2 = 3;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    REQUIRE(certs.size() == 2);
    const Certificate& z = certs[1];
    REQUIRE(z.check_id == "casimir.z");
    REQUIRE(z.status == "pass");
    REQUIRE(z.witnesses["degree"] == 6);
    REQUIRE(z.witnesses["central"] == true);
    REQUIRE(z.witnesses["gamma_negated"] == true);
    REQUIRE(z.witnesses["bracket_identities"].get<int>() >= 1);
}

TEST_CASE("pfaffian suite reports the identification scalar") {
    RunConfig cfg;
    cfg.suite = "pfaffian";
    cfg.kind = Kind::So;
    cfg.l1 = 3;
    cfg.l2 = 3;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    const Certificate& pf = certs.back();
    REQUIRE(pf.status == "pass");
    REQUIRE(pf.witnesses["scalar"] == "2");
    REQUIRE(pf.witnesses["odd_space_dim"] == 1);
    REQUIRE(pf.witnesses["eta_fixed"] == true);
    REQUIRE(pf.witnesses["theta_negated"] == true);
    REQUIRE(pf.witnesses["z_negated"] == true);
    REQUIRE(pf.witnesses["invariants_fixed"] == true);
    REQUIRE(pf.witnesses["pf_negated"] == true);
}

TEST_CASE("iso suite runs the full pair chain") {
    RunConfig cfg;
    cfg.suite = "iso";
    cfg.so_l1 = 3;
    cfg.so_l2 = 3;
    cfg.sp_l1 = 2;
    cfg.sp_l2 = 2;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    std::vector<std::string> ids;
    for (const Certificate& c : certs) {
        ids.push_back(c.check_id);
        REQUIRE(c.status == "pass");
    }
    REQUIRE(ids == std::vector<std::string>{"realize", "realize", "iso.generators",
                                            "iso.generators", "iso.phi", "iso.kernel",
                                            "iso.nilpotent"});
    REQUIRE(certs[4].witnesses["bracket_ratio"] == "1");
    REQUIRE(certs[6].witnesses["source_component_dim"] == 2);
}

TEST_CASE("dims suite covers pairs and the equal-block comparison") {
    RunConfig cfg;
    cfg.suite = "dims";
    cfg.very_even_n = 4;
    std::vector<std::string> warnings;
    std::vector<Certificate> certs = run_suite(cfg, warnings);
    REQUIRE(certs.size() == 1);
    REQUIRE(certs[0].check_id == "dims.very_even");
    REQUIRE(certs[0].witnesses["common"] == 4);
    REQUIRE(certs[0].status == "pass");

    cfg.very_even_n = 0;
    cfg.so_l1 = 3;
    cfg.so_l2 = 5;
    cfg.sp_l1 = 2;
    cfg.sp_l2 = 4;
    certs = run_suite(cfg, warnings);
    REQUIRE(certs.size() == 3);
    REQUIRE(certs.back().check_id == "dims.pair");
    REQUIRE(certs.back().witnesses["equal"] == true);
    REQUIRE(certs.back().status == "pass");
}

TEST_CASE("suites reuse cached tables and report the hit") {
    fs::path dir = fs::temp_directory_path() / "twoblock_suite_cache";
    fs::remove_all(dir);
    RunConfig cfg;
    cfg.suite = "casimir";
    cfg.kind = Kind::So;
    cfg.l1 = 3;
    cfg.l2 = 3;
    cfg.opt.cache_dir = dir.string();
    std::vector<std::string> warnings;
    std::vector<Certificate> first = run_suite(cfg, warnings);
    REQUIRE(first.back().witnesses["cached"] == false);
    REQUIRE(warnings.empty());
    std::vector<Certificate> second = run_suite(cfg, warnings);
    REQUIRE(second.back().witnesses["cached"] == true);
    REQUIRE(warnings.empty());
    REQUIRE(second.back().status == "pass");

    // Corrupt the entry: the next run warns, recomputes, and still passes.
    fs::path entry = gentab_cache_path(dir, Kind::So, 3, 3, 12);
    std::ofstream(entry, std::ios::binary | std::ios::app) << "tail rot\n";
    std::vector<Certificate> third = run_suite(cfg, warnings);
    REQUIRE(warnings.size() == 1);
    REQUIRE(warnings[0].find("corrupt") != std::string::npos);
    REQUIRE(third.back().witnesses["cached"] == false);
    REQUIRE(third.back().status == "pass");
    // ...and the overwrite restored a loadable entry.
    warnings.clear();
    std::vector<Certificate> fourth = run_suite(cfg, warnings);
    REQUIRE(warnings.empty());
    REQUIRE(fourth.back().witnesses["cached"] == true);
}

TEST_CASE("a too-small bound is rejected as a usage error") {
    RunConfig cfg;
    cfg.suite = "presentation";
    cfg.kind = Kind::So;
    cfg.l1 = 3;
    cfg.l2 = 3;
    cfg.opt.bound = 4;  // below 2n = 6
    std::vector<std::string> warnings;
    REQUIRE_THROWS_AS(run_suite(cfg, warnings), std::invalid_argument);
}

#ifdef TB_CLI_PATH

TEST_CASE("cli: realize and check verbs succeed end to end") {
    CliResult r = run_cli("realize --kind so --partition 3,3");
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    REQUIRE(j[0]["check_id"] == "realize");
    REQUIRE(j[0]["status"] == "pass");
    REQUIRE(j[0]["tool_version"] == TOOL_VERSION);

    CliResult t = run_cli("check presentation --kind so --partition 3,3 --format text");
    REQUIRE(t.exit_code == 0);
    REQUIRE(t.out.find("presentation.calibration") != std::string::npos);
    REQUIRE(t.out.find("fail: 0") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with status 2") {
    REQUIRE(run_cli("check bogus --kind so --partition 3,3").exit_code == 2);
    REQUIRE(run_cli("check presentation").exit_code == 2);
    REQUIRE(run_cli("check presentation --kind so --partition 2,3").exit_code == 2);
    REQUIRE(run_cli("check iso --pair so:3,3 sp:9,9").exit_code == 2);
    REQUIRE(run_cli("check dims").exit_code == 2);
    REQUIRE(run_cli("check very-even --very-even 5").exit_code == 2);
    REQUIRE(run_cli("nonsense").exit_code != 0);
}

TEST_CASE("cli: certificate streams are deterministic modulo timing") {
    CliResult a = run_cli("check iso --pair so:3,3 sp:2,2");
    CliResult b = run_cli("check iso --pair so:3,3 sp:2,2");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE(strip_timing(a.out) == strip_timing(b.out));
    REQUIRE(!a.out.empty());

    CliResult c = run_cli("check dims --very-even 4");
    CliResult d = run_cli("check dims --very-even 4");
    REQUIRE(c.exit_code == 0);
    REQUIRE(strip_timing(c.out) == strip_timing(d.out));
    nlohmann::json j = nlohmann::json::parse(c.out);
    REQUIRE(j[0]["witnesses"]["common"] == 4);
}

TEST_CASE("cli: config file fills flags and flags win") {
    fs::path dir = fs::temp_directory_path() / "twoblock_cli_cfg";
    fs::create_directories(dir);
    fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "# sample configuration\nkind = so\npartition = 3,3\nformat = text\n";
    CliResult r = run_cli("check realize --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("partition=\"3,3\"") != std::string::npos);

    CliResult s = run_cli("check realize --config " + cfg.string() + " --partition 1,5");
    REQUIRE(s.exit_code == 0);
    REQUIRE(s.out.find("partition=\"1,5\"") != std::string::npos);

    std::ofstream(cfg) << "mystery = 1\n";
    REQUIRE(run_cli("check realize --config " + cfg.string()).exit_code == 2);
}

TEST_CASE("cli: cache hits are visible and corruption recovers") {
    fs::path dir = fs::temp_directory_path() / "twoblock_cli_cache";
    fs::remove_all(dir);
    std::string base = "check casimir --kind so --partition 3,3 --cache-dir " + dir.string();
    CliResult first = run_cli(base);
    REQUIRE(first.exit_code == 0);
    CliResult second = run_cli(base);
    REQUIRE(second.exit_code == 0);
    REQUIRE(second.out.find("\"cached\": true") != std::string::npos);
    REQUIRE(second.err.empty());

    fs::path entry = gentab_cache_path(dir, Kind::So, 3, 3, 12);
    std::ofstream(entry, std::ios::binary | std::ios::app) << "zzz\n";
    CliResult third = run_cli(base);
    REQUIRE(third.exit_code == 0);
    REQUIRE(third.err.find("corrupt") != std::string::npos);
    CliResult fourth = run_cli(base);
    REQUIRE(fourth.out.find("\"cached\": true") != std::string::npos);
}

#endif  // TB_CLI_PATH

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/io.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("fraclab_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI binary named by FRACLAB_CLI; returns its exit status.
int run_cli(const std::string& args) {
    const char* exe = std::getenv("FRACLAB_CLI");
    REQUIRE(exe != nullptr);
    const std::string cmd = std::string(exe) + " " + args + " > " +
                            (temp_dir() / "cli_stdout.txt").string() + " 2> " +
                            (temp_dir() / "cli_stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string cli_stdout() { return slurp(temp_dir() / "cli_stdout.txt"); }

}  // namespace

TEST_CASE("space json round trip is exact") {
    const auto sp = make_grid(3, 4, 1.25, 0.75);
    const auto path = (temp_dir() / "grid.json").string();
    save_space(sp, path);
    const auto back = load_space(path);
    REQUIRE(back->size() == sp.size());
    for (int x = 0; x < sp.size(); ++x) {
        CHECK(back->vertex_ids()[x] == sp.vertex_ids()[x]);
        CHECK(back->mu(x) == sp.mu(x));
    }
    REQUIRE(back->edges().size() == sp.edges().size());
    for (int x = 0; x < sp.size(); ++x)
        for (int y = 0; y < sp.size(); ++y)
            CHECK(back->metric(x, y) == sp.metric(x, y));
}

TEST_CASE("space json parser rejects malformed input") {
    CHECK_THROWS_AS(parse_space_json("{not json"), Error);
    CHECK_THROWS_AS(parse_space_json(R"({"vertices": [], "edges": []})"), Error);
    CHECK_THROWS_AS(parse_space_json(
                        R"({"vertices":[{"id":"a","mu":1},{"id":"a","mu":1}],
                            "edges":[]})"),
                    Error);
}

TEST_CASE("function tsv round trip is exact and tolerates comments") {
    const auto sp = make_ring(6);
    std::mt19937_64 rng(91);
    std::normal_distribution<double> gauss;
    std::vector<double> f(sp.size());
    for (auto& v : f) v = gauss(rng) * 1e3;
    const auto path = (temp_dir() / "f.tsv").string();
    write_function_tsv(path, sp, f, {{"purpose", "round-trip"}});
    const auto back = load_function_tsv(path, sp);
    for (int x = 0; x < sp.size(); ++x) CHECK(back[x] == f[x]);

    // Missing vertex must be rejected.
    std::ofstream out(temp_dir() / "short.tsv");
    out << "v0\t1.0\n";
    out.close();
    CHECK_THROWS_AS(load_function_tsv((temp_dir() / "short.tsv").string(), sp),
                    Error);
}

TEST_CASE("field tsv round trip rebuilds mesh and values exactly") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(6));
    const auto dec = spectral_decompose(sp);
    FracConfig cfg;
    cfg.s = 0.4;
    const auto mesh = build_graded_mesh(3.0, 12, 0.0, cfg.a());
    std::vector<double> f(sp->size());
    for (int x = 0; x < sp->size(); ++x) f[x] = std::sin(1.0 + x);
    const auto field = solve_extension_pde(sp, f, cfg.s, mesh);
    const auto path = (temp_dir() / "field.tsv").string();
    write_field_tsv(path, field, {});
    const auto back = load_field_tsv(path, sp);
    CHECK(back.s == field.s);
    CHECK(back.mesh.y.size() == field.mesh.y.size());
    for (std::size_t j = 0; j < field.mesh.y.size(); ++j)
        CHECK(back.mesh.y[j] == doctest::Approx(field.mesh.y[j]).epsilon(1e-14));
    for (std::size_t k = 0; k < field.values.size(); ++k)
        CHECK(back.values[k] == field.values[k]);
}

TEST_CASE("writers are byte-deterministic") {
    const auto sp = make_ring(5, 1.3, 0.6);
    const auto p1 = temp_dir() / "d1.json";
    const auto p2 = temp_dir() / "d2.json";
    save_space(sp, p1.string());
    save_space(sp, p2.string());
    CHECK(slurp(p1) == slurp(p2));

    ExperimentReport rep;
    rep.kind = "demo";
    rep.columns = {"trial", "value"};
    rep.trials = {{0.0, 1.0 / 3.0}, {1.0, 0.1}};
    rep.constants["C"] = 1.2345678901234567;
    const auto r1 = temp_dir() / "r1.json";
    const auto r2 = temp_dir() / "r2.json";
    write_report_json(r1.string(), rep, {{"seed", "7"}});
    write_report_json(r2.string(), rep, {{"seed", "7"}});
    CHECK(slurp(r1) == slurp(r2));
    CHECK(slurp(r1).find("format-version") != std::string::npos);
}

TEST_CASE("format_number round trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, -2.5e17}) {
        const auto s = format_number(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("cli: space make / info") {
    const auto g = (temp_dir() / "cli_ring.json").string();
    CHECK(run_cli("space make --kind ring --n 12 --out " + g) == 0);
    CHECK(run_cli("space info --space " + g) == 0);
    const auto info = cli_stdout();
    CHECK(info.find("12") != std::string::npos);
}

TEST_CASE("cli: frac apply agrees across routes") {
    const auto g = (temp_dir() / "cli_ring10.json").string();
    REQUIRE(run_cli("space make --kind ring --n 10 --out " + g) == 0);
    const auto sp = load_space(g);
    std::vector<double> f(sp->size());
    for (int x = 0; x < sp->size(); ++x) f[x] = std::cos(0.7 * x);
    const auto ftsv = (temp_dir() / "cli_f.tsv").string();
    write_function_tsv(ftsv, *sp, f, {});

    const auto o1 = (temp_dir() / "out_spec.tsv").string();
    const auto o2 = (temp_dir() / "out_kern.tsv").string();
    CHECK(run_cli("frac apply --space " + g + " --f " + ftsv +
                  " --s 0.5 --method spectral --out " + o1) == 0);
    CHECK(run_cli("frac apply --space " + g + " --f " + ftsv +
                  " --s 0.5 --method kernel --out " + o2) == 0);
    const auto a = load_function_tsv(o1, *sp);
    const auto b = load_function_tsv(o2, *sp);
    for (int x = 0; x < sp->size(); ++x)
        CHECK(a[x] == doctest::Approx(b[x]).epsilon(1e-8));

    CHECK(run_cli("frac compare --space " + g + " --f " + ftsv +
                  " --s 0.5 --N 64 --out -") == 0);
}

TEST_CASE("cli: krein psi constant string single point") {
    CHECK(run_cli("krein psi --string constant --lmin 1 --lmax 1 --count 1 "
                  "--out -") == 0);
    // psi(1) = 1 for the unit constant string.
    const auto out = cli_stdout();
    CHECK(out.find("1\t1") != std::string::npos);
}

TEST_CASE("cli: validation failures exit with code 2") {
    const auto g = (temp_dir() / "cli_ring10.json").string();
    // Missing required --s.
    CHECK(run_cli("frac apply --space " + g + " --f missing.tsv --out -") == 2);
    // Out-of-range order.
    const auto ftsv = (temp_dir() / "cli_f.tsv").string();
    CHECK(run_cli("frac apply --space " + g + " --f " + ftsv +
                  " --s 1.7 --out /dev/null") == 2);
    // Corrupted graph file.
    const auto bad = (temp_dir() / "bad.json").string();
    std::ofstream(bad) << "{broken";
    CHECK(run_cli("frac apply --space " + bad + " --f " + ftsv +
                  " --s 0.5 --out /dev/null") == 2);
}

TEST_CASE("cli: harnack run writes a report") {
    const auto g = (temp_dir() / "cli_ring32.json").string();
    REQUIRE(run_cli("space make --kind ring --n 32 --out " + g) == 0);
    const auto rep = (temp_dir() / "harnack.json").string();
    CHECK(run_cli("harnack run --space " + g +
                  " --s 0.5 --ball v0:4 --delta 0.5 --trials 5 "
                  "--seed 3 --out " + rep) == 0);
    const auto text = slurp(rep);
    CHECK(text.find("harnack") != std::string::npos);
    CHECK(text.find("\"C\"") != std::string::npos);
}

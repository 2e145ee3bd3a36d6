// fraclab command-line front end.
//
// Exit codes: 0 success, 2 configuration/validation problem (single-line
// diagnostic on stderr), 1 numeric failure inside a computation.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fraclab/acceptance.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/fractional.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/harnack.hpp"
#include "fraclab/io.hpp"
#include "fraclab/krein.hpp"
#include "fraclab/lattice.hpp"
#include "fraclab/nonlocal.hpp"
#include "fraclab/spectral.hpp"

namespace {

using fraclab::ConfigEcho;
using fraclab::Error;
using json = nlohmann::ordered_json;

// Failures of these kinds mean the computation itself broke down (exit 1);
// everything else is treated as bad configuration or input (exit 2).
bool is_numeric_failure(const std::string& code) {
    static const std::set<std::string> numeric = {
        "CGNoConvergence",  "RiccatiBlowup",       "SingularSystem",
        "BernsteinViolation", "InfeasibleCompetitor", "DegenerateProbe",
        "MissingConstant"};
    return numeric.count(code) > 0;
}

std::pair<std::string, double> parse_ball(const std::string& text) {
    const std::size_t colon = text.rfind(':');
    fraclab::require(colon != std::string::npos && colon > 0 &&
                         colon + 1 < text.size(),
                     "BadBallSpec", "expected center:radius, got " + text);
    try {
        return {text.substr(0, colon), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        fraclab::fail("BadBallSpec", "invalid radius in " + text);
    }
}

fraclab::KreinString parse_string_spec(const std::string& text) {
    if (text == "constant") return fraclab::constant_string(1.0);
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fraclab::fail("BadString",
                      std::string("string spec JSON parse error: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "constant") return fraclab::constant_string(j.value("c", 1.0));
    if (kind == "powerlaw")
        return fraclab::powerlaw_string(j.value("c", 1.0), j.value("beta", 0.0));
    if (kind == "sampled")
        return fraclab::sampled_string(
            j.at("z").get<std::vector<double>>(),
            j.at("A").get<std::vector<double>>());
    fraclab::fail("BadString", "string kind must be constant|powerlaw|sampled");
}

fraclab::WeightFunction parse_weight_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fraclab::fail("WeightNotIntegrable",
                      std::string("weight spec JSON parse error: ") + e.what());
    }
    fraclab::WeightFunction w;
    const std::string kind = j.value("kind", "");
    if (kind == "power") {
        w.kind = fraclab::WeightFunction::Kind::Power;
        w.c = j.value("c", 1.0);
        w.p = j.value("exponent", 0.0);
        return w;
    }
    if (kind == "sampled") {
        w.kind = fraclab::WeightFunction::Kind::Sampled;
        w.y = j.at("y").get<std::vector<double>>();
        w.w = j.at("w").get<std::vector<double>>();
        return w;
    }
    fraclab::fail("WeightNotIntegrable", "weight kind must be power|sampled");
}

std::vector<double> lambda_grid(double lmin, double lmax, int count) {
    fraclab::require(lmin > 0.0 && lmax >= lmin && count >= 1, "BadLambdaGrid",
                     "need 0 < lmin <= lmax and count >= 1");
    std::vector<double> g;
    if (count == 1 || lmax == lmin) {
        g.push_back(lmin);
        return g;
    }
    for (int i = 0; i < count; ++i)
        g.push_back(lmin *
                    std::pow(lmax / lmin, static_cast<double>(i) / (count - 1)));
    return g;
}

// "id:r,id:r" -> ball family.
fraclab::BallFamily parse_ball_list(const fraclab::DirichletSpace& space,
                                    const std::string& text) {
    std::vector<std::pair<int, double>> centers;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        if (!item.empty()) {
            const auto [id, r] = parse_ball(item);
            const int c = space.index_of(id);
            fraclab::require(c >= 0, "UnknownVertex",
                             "unknown ball center " + id);
            centers.emplace_back(c, r);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return fraclab::make_ball_family(space, centers);
}

struct GridDomainSpec {
    int grid = 0;
    int inner = 0;
    bool lshape = false;
};

// "grid24-square16" / "grid24-lshape16".
GridDomainSpec parse_geometry_token(const std::string& text) {
    GridDomainSpec spec;
    int pos = 0;
    const auto read_int = [&](int& out) {
        int v = 0, digits = 0;
        while (pos < static_cast<int>(text.size()) && isdigit(text[pos])) {
            v = v * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        fraclab::require(digits > 0, "BadDomain",
                         "malformed geometry token " + text);
        out = v;
    };
    fraclab::require(text.rfind("grid", 0) == 0, "BadDomain",
                     "geometry token must start with grid");
    pos = 4;
    read_int(spec.grid);
    fraclab::require(pos < static_cast<int>(text.size()) && text[pos] == '-',
                     "BadDomain", "malformed geometry token " + text);
    ++pos;
    if (text.compare(pos, 6, "square") == 0) {
        pos += 6;
    } else if (text.compare(pos, 6, "lshape") == 0) {
        pos += 6;
        spec.lshape = true;
    } else {
        fraclab::fail("BadDomain", "geometry region must be square or lshape");
    }
    read_int(spec.inner);
    fraclab::require(pos == static_cast<int>(text.size()), "BadDomain",
                     "trailing characters in geometry token " + text);
    return spec;
}

fraclab::SpectralDecomposition grid_product_dec(int n) {
    auto path = std::make_shared<fraclab::DirichletSpace>(fraclab::make_path(n));
    const auto dp = fraclab::spectral_decompose(path);
    auto grid =
        std::make_shared<fraclab::DirichletSpace>(fraclab::make_grid(n, n));
    return fraclab::spectral_decompose_product(dp, dp, grid);
}

std::string fmtd(double v) { return fraclab::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* threads = std::getenv("FRACLAB_THREADS")) {
        const int t = std::atoi(threads);
        if (t > 0) omp_set_num_threads(t);
    }
#endif

    CLI::App app{"fractional powers and Bernstein functions of graph "
                 "Dirichlet-form generators"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ------------------------------------------------------------- space
    auto* space_cmd = app.add_subcommand("space", "graph fixtures and info");
    space_cmd->require_subcommand(1);
    {
        auto* make = space_cmd->add_subcommand("make", "write a fixture graph");
        auto kind = std::make_shared<std::string>("ring");
        auto n = std::make_shared<int>(10);
        auto nx = std::make_shared<int>(8);
        auto ny = std::make_shared<int>(8);
        auto mu = std::make_shared<double>(1.0);
        auto w = std::make_shared<double>(1.0);
        auto out = std::make_shared<std::string>();
        make->add_option("--kind", *kind, "ring|path|grid|torus")
            ->check(CLI::IsMember({"ring", "path", "grid", "torus"}));
        make->add_option("--n", *n, "vertex count (ring/path)");
        make->add_option("--nx", *nx, "grid/torus width");
        make->add_option("--ny", *ny, "grid/torus height");
        make->add_option("--mu", *mu, "uniform vertex measure");
        make->add_option("--w", *w, "uniform conductance");
        make->add_option("--out", *out, "output graph JSON")->required();
        make->callback([=]() {
            fraclab::DirichletSpace sp =
                *kind == "ring"   ? fraclab::make_ring(*n, *mu, *w)
                : *kind == "path" ? fraclab::make_path(*n, *mu, *w)
                : *kind == "grid" ? fraclab::make_grid(*nx, *ny, *mu, *w)
                                  : fraclab::make_torus(*nx, *ny);
            fraclab::save_space(sp, *out);
        });

        auto* info = space_cmd->add_subcommand("info", "summarize a graph");
        auto path = std::make_shared<std::string>();
        info->add_option("--space", *path, "graph JSON")->required();
        info->callback([=]() {
            const auto sp = fraclab::load_space(*path);
            double diam = 0.0;
            for (int x = 0; x < sp->size(); ++x)
                for (int y = 0; y < sp->size(); ++y)
                    diam = std::max(diam, sp->metric(x, y));
            std::printf("vertices\t%d\nedges\t%zu\ntotal_mass\t%s\n"
                        "components\t%d\ndiameter\t%s\n",
                        sp->size(), sp->edges().size(),
                        fmtd(sp->total_mass()).c_str(), sp->components(),
                        fmtd(diam).c_str());
        });
    }

    // -------------------------------------------------------------- frac
    auto* frac_cmd = app.add_subcommand("frac", "fractional powers (-L)^s");
    frac_cmd->require_subcommand(1);
    {
        auto* apply = frac_cmd->add_subcommand("apply", "apply (-L)^s to f");
        auto space = std::make_shared<std::string>();
        auto s = std::make_shared<double>();
        auto method = std::make_shared<std::string>("spectral");
        auto fpath = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto N = std::make_shared<int>(256);
        auto Y = std::make_shared<std::string>("auto");
        apply->add_option("--space", *space, "graph JSON")->required();
        apply->add_option("--s", *s, "fractional order in (0,1)")->required();
        apply->add_option("--method", *method,
                          "spectral|subord|kernel|extension")
            ->check(CLI::IsMember({"spectral", "subord", "kernel", "extension"}));
        apply->add_option("--f", *fpath, "function TSV")->required();
        apply->add_option("--out", *out, "output TSV")->required();
        apply->add_option("--N", *N, "extension mesh segments");
        apply->add_option("--Y", *Y, "extension height or 'auto'");
        apply->callback([=]() {
            const auto sp = fraclab::load_space(*space);
            const auto f = fraclab::load_function_tsv(*fpath, *sp);
            const auto dec = fraclab::spectral_decompose(sp);
            fraclab::FracConfig cfg;
            cfg.s = *s;
            fraclab::validate(cfg);
            std::vector<double> result;
            if (*method == "spectral") {
                result = fraclab::frac_spectral(dec, *s, f);
            } else if (*method == "subord") {
                result = fraclab::frac_subordination(dec, cfg, f);
            } else if (*method == "kernel") {
                result = fraclab::frac_kernel_apply(
                    fraclab::build_jump_kernel(dec, cfg), f);
            } else {
                const double height =
                    *Y == "auto" ? fraclab::default_extension_height(dec)
                                 : std::stod(*Y);
                const auto mesh =
                    fraclab::build_graded_mesh(height, *N, -1.0, cfg.a());
                const auto field =
                    fraclab::solve_extension_pde(sp, f, *s, mesh);
                result = fraclab::neumann_trace(field, *s);
            }
            fraclab::write_function_tsv(
                *out, *sp, result,
                {{"cmd", "frac apply"}, {"space", *space}, {"s", fmtd(*s)},
                 {"method", *method}, {"f", *fpath}});
        });

        auto* compare =
            frac_cmd->add_subcommand("compare", "pairwise route errors");
        auto cspace = std::make_shared<std::string>();
        auto cs = std::make_shared<double>();
        auto cf = std::make_shared<std::string>();
        auto cout_path = std::make_shared<std::string>("-");
        auto cN = std::make_shared<int>(256);
        compare->add_option("--space", *cspace, "graph JSON")->required();
        compare->add_option("--s", *cs, "fractional order")->required();
        compare->add_option("--f", *cf, "function TSV")->required();
        compare->add_option("--out", *cout_path, "output TSV ('-' = stdout)");
        compare->add_option("--N", *cN, "extension mesh segments");
        compare->callback([=]() {
            const auto sp = fraclab::load_space(*cspace);
            const auto f = fraclab::load_function_tsv(*cf, *sp);
            const auto dec = fraclab::spectral_decompose(sp);
            fraclab::FracConfig cfg;
            cfg.s = *cs;
            fraclab::validate(cfg);
            const auto a = fraclab::frac_spectral(dec, *cs, f);
            const auto b = fraclab::frac_subordination(dec, cfg, f);
            const auto c = fraclab::frac_kernel_apply(
                fraclab::build_jump_kernel(dec, cfg), f);
            const auto mesh = fraclab::build_graded_mesh(
                fraclab::default_extension_height(dec), *cN, -1.0, cfg.a());
            const auto d = fraclab::neumann_trace(
                fraclab::solve_extension_pde(sp, f, *cs, mesh), *cs);
            const auto err = [&](const std::vector<double>& u,
                                 const std::vector<double>& v) {
                double dev = 0.0, scale = 0.0;
                for (std::size_t k = 0; k < u.size(); ++k) {
                    dev = std::max(dev, std::abs(u[k] - v[k]));
                    scale = std::max(scale, std::abs(u[k]));
                }
                return dev / std::max(scale, 1e-300);
            };
            fraclab::write_table_tsv(
                *cout_path,
                {"spectral_subord", "spectral_kernel", "spectral_extension",
                 "subord_kernel", "subord_extension", "kernel_extension"},
                {{err(a, b), err(a, c), err(a, d), err(b, c), err(b, d),
                  err(c, d)}},
                {{"cmd", "frac compare"}, {"space", *cspace},
                 {"s", fmtd(*cs)}, {"f", *cf}});
        });
    }

    // ------------------------------------------------------------ extend
    auto* extend_cmd =
        app.add_subcommand("extend", "weighted extension problem");
    extend_cmd->require_subcommand(1);
    {
        auto* solve = extend_cmd->add_subcommand("solve", "solve the PDE");
        auto space = std::make_shared<std::string>();
        auto fpath = std::make_shared<std::string>();
        auto s = std::make_shared<double>();
        auto N = std::make_shared<int>(128);
        auto Y = std::make_shared<std::string>("auto");
        auto gamma = std::make_shared<double>(-1.0);
        auto out = std::make_shared<std::string>();
        solve->add_option("--space", *space, "graph JSON")->required();
        solve->add_option("--f", *fpath, "boundary data TSV")->required();
        solve->add_option("--s", *s, "fractional order")->required();
        solve->add_option("--N", *N, "mesh segments");
        solve->add_option("--Y", *Y, "height or 'auto'");
        solve->add_option("--gamma", *gamma, "mesh grading (<=0: default)");
        solve->add_option("--out", *out, "output field TSV")->required();
        solve->callback([=]() {
            const auto sp = fraclab::load_space(*space);
            const auto f = fraclab::load_function_tsv(*fpath, *sp);
            fraclab::FracConfig cfg;
            cfg.s = *s;
            fraclab::validate(cfg);
            const double height =
                *Y == "auto" ? fraclab::default_extension_height(
                                   fraclab::spectral_decompose(sp))
                             : std::stod(*Y);
            const auto mesh =
                fraclab::build_graded_mesh(height, *N, *gamma, cfg.a());
            const auto field = fraclab::solve_extension_pde(sp, f, *s, mesh);
            fraclab::write_field_tsv(
                *out, field,
                {{"cmd", "extend solve"}, {"space", *space}, {"f", *fpath}});
        });

        auto* dtn =
            extend_cmd->add_subcommand("dtn", "Neumann trace of a field");
        auto field_path = std::make_shared<std::string>();
        auto dspace = std::make_shared<std::string>();
        auto dout = std::make_shared<std::string>("-");
        dtn->add_option("--field", *field_path, "field TSV")->required();
        dtn->add_option("--space", *dspace, "graph JSON (optional)");
        dtn->add_option("--out", *dout, "output TSV ('-' = stdout)");
        dtn->callback([=]() {
            std::shared_ptr<const fraclab::DirichletSpace> sp;
            if (!dspace->empty()) sp = fraclab::load_space(*dspace);
            const auto field = fraclab::load_field_tsv(*field_path, sp);
            const auto trace = fraclab::neumann_trace(field, field.s);
            fraclab::write_function_tsv(
                *dout, *field.space, trace,
                {{"cmd", "extend dtn"}, {"field", *field_path},
                 {"s", fmtd(field.s)}});
        });
    }

    // ------------------------------------------------------------- krein
    auto* krein_cmd =
        app.add_subcommand("krein", "Krein strings and Bernstein functions");
    krein_cmd->require_subcommand(1);
    {
        auto* psi = krein_cmd->add_subcommand("psi", "psi(lambda) table");
        auto spec = std::make_shared<std::string>();
        auto lmin = std::make_shared<double>();
        auto lmax = std::make_shared<double>();
        auto count = std::make_shared<int>(25);
        auto out = std::make_shared<std::string>("-");
        psi->add_option("--string", *spec,
                        "string spec JSON or 'constant'")
            ->required();
        psi->add_option("--lmin", *lmin, "lowest lambda")->required();
        psi->add_option("--lmax", *lmax, "highest lambda")->required();
        psi->add_option("--count", *count, "grid size");
        psi->add_option("--out", *out, "output TSV ('-' = stdout)");
        psi->callback([=]() {
            const auto str = parse_string_spec(*spec);
            const auto grid = lambda_grid(*lmin, *lmax, *count);
            const auto table = fraclab::bernstein_from_string(str, grid);
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < grid.size(); ++k)
                rows.push_back({table.lambda[k], table.psi[k]});
            fraclab::write_table_tsv(*out, {"lambda", "psi"}, rows,
                                     {{"cmd", "krein psi"},
                                      {"string", *spec}});
        });

        auto* fw = krein_cmd->add_subcommand(
            "from-weight", "psi of the string induced by a weight");
        auto wspec = std::make_shared<std::string>();
        auto ymax = std::make_shared<double>(10.0);
        auto wlmin = std::make_shared<double>(1e-2);
        auto wlmax = std::make_shared<double>(1e2);
        auto wcount = std::make_shared<int>(25);
        auto wout = std::make_shared<std::string>("-");
        fw->add_option("--weight", *wspec, "weight spec JSON")->required();
        fw->add_option("--ymax", *ymax, "weight domain height");
        fw->add_option("--lmin", *wlmin, "lowest lambda");
        fw->add_option("--lmax", *wlmax, "highest lambda");
        fw->add_option("--count", *wcount, "grid size");
        fw->add_option("--out", *wout, "output TSV ('-' = stdout)");
        fw->callback([=]() {
            const auto weight = parse_weight_spec(*wspec);
            const auto str = fraclab::string_from_weight(weight, *ymax);
            const auto grid = lambda_grid(*wlmin, *wlmax, *wcount);
            const auto table = fraclab::bernstein_from_string(str, grid);
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < grid.size(); ++k)
                rows.push_back({table.lambda[k], table.psi[k]});
            fraclab::write_table_tsv(*wout, {"lambda", "psi"}, rows,
                                     {{"cmd", "krein from-weight"},
                                      {"weight", *wspec},
                                      {"ymax", fmtd(*ymax)}});
        });
    }

    // ----------------------------------------------------------- harnack
    auto* harnack_cmd =
        app.add_subcommand("harnack", "interior Harnack experiment");
    harnack_cmd->require_subcommand(1);
    {
        auto* run = harnack_cmd->add_subcommand("run", "run the experiment");
        auto space = std::make_shared<std::string>();
        auto s = std::make_shared<double>(0.5);
        auto ball = std::make_shared<std::string>();
        auto delta = std::make_shared<double>(0.5);
        auto trials = std::make_shared<int>(200);
        auto seed = std::make_shared<unsigned long long>(7);
        auto out = std::make_shared<std::string>();
        run->add_option("--space", *space, "graph JSON")->required();
        run->add_option("--s", *s, "fractional order");
        run->add_option("--ball", *ball, "center:radius")->required();
        run->add_option("--delta", *delta, "probe shrink factor");
        run->add_option("--trials", *trials, "randomized solves");
        run->add_option("--seed", *seed, "report seed")->required();
        run->add_option("--out", *out, "report JSON")->required();
        run->callback([=]() {
            const auto sp = fraclab::load_space(*space);
            const auto [center_id, r] = parse_ball(*ball);
            const int center = sp->index_of(center_id);
            fraclab::require(center >= 0, "UnknownVertex",
                             "unknown ball center " + center_id);
            fraclab::FracConfig cfg;
            cfg.s = *s;
            fraclab::validate(cfg);
            const auto dec = fraclab::spectral_decompose(sp);
            const auto rep = fraclab::harnack_constant(dec, cfg, center, r,
                                                       *delta, *trials, *seed);
            fraclab::write_report_json(
                *out, rep,
                {{"cmd", "harnack run"}, {"space", *space},
                 {"ball", *ball}});
            std::printf("C_emp\t%s\n", fmtd(rep.constant()).c_str());
        });
    }

    // ---------------------------------------------------------- bharnack
    auto* bharnack_cmd =
        app.add_subcommand("bharnack", "boundary Harnack experiment");
    bharnack_cmd->require_subcommand(1);
    {
        auto* run = bharnack_cmd->add_subcommand("run", "run the experiment");
        auto geometry = std::make_shared<std::string>("grid24-square16");
        auto s = std::make_shared<double>(0.5);
        auto xi = std::make_shared<std::string>("corner");
        auto r = std::make_shared<double>(3.0);
        auto trials = std::make_shared<int>(50);
        auto seed = std::make_shared<unsigned long long>(7);
        auto out = std::make_shared<std::string>();
        run->add_option("--geometry", *geometry,
                        "gridN-squareM or gridN-lshapeM");
        run->add_option("--s", *s, "fractional order");
        run->add_option("--xi", *xi, "'corner' or a vertex id");
        run->add_option("--r", *r, "probe radius");
        run->add_option("--trials", *trials, "randomized solves");
        run->add_option("--seed", *seed, "report seed");
        run->add_option("--out", *out, "report JSON (optional)");
        run->callback([=]() {
            const auto spec = parse_geometry_token(*geometry);
            const auto dec = grid_product_dec(spec.grid);
            const auto domain =
                spec.lshape
                    ? fraclab::grid_lshape_domain(spec.grid, spec.grid,
                                                  spec.inner)
                    : fraclab::grid_square_domain(spec.grid, spec.grid,
                                                  spec.inner);
            int xi_idx;
            if (*xi == "corner") {
                const int off = (spec.grid - spec.inner) / 2;
                xi_idx = off * spec.grid + off;
            } else {
                xi_idx = dec.space->index_of(*xi);
                fraclab::require(xi_idx >= 0, "UnknownVertex",
                                 "unknown vertex id " + *xi);
            }
            fraclab::FracConfig cfg;
            cfg.s = *s;
            fraclab::validate(cfg);
            const auto rep = fraclab::boundary_harnack_experiment(
                dec, cfg, domain, xi_idx, *r, *trials, *seed);
            if (!out->empty())
                fraclab::write_report_json(
                    *out, rep,
                    {{"cmd", "bharnack run"}, {"geometry", *geometry},
                     {"xi", *xi}});
            std::printf("C_emp\t%s\n", fmtd(rep.constant()).c_str());
        });
    }

    // ---------------------------------------------------------- geometry
    auto* geometry_cmd =
        app.add_subcommand("geometry", "doubling and Poincare estimators");
    geometry_cmd->require_subcommand(1);
    {
        auto* dbl = geometry_cmd->add_subcommand("doubling",
                                                 "volume doubling constant");
        auto space = std::make_shared<std::string>();
        auto balls = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        dbl->add_option("--space", *space, "graph JSON")->required();
        dbl->add_option("--balls", *balls, "id:r,id:r,...")->required();
        dbl->add_option("--out", *out, "report JSON")->required();
        dbl->callback([=]() {
            const auto sp = fraclab::load_space(*space);
            const auto family = parse_ball_list(*sp, *balls);
            const auto rep = fraclab::doubling_constant(*sp, family);
            fraclab::write_report_json(
                *out, rep,
                {{"cmd", "geometry doubling"}, {"space", *space},
                 {"balls", *balls}});
            std::printf("C\t%s\n", fmtd(rep.constant()).c_str());
        });

        auto* pc = geometry_cmd->add_subcommand("poincare",
                                                "2-Poincare constant");
        auto pspace = std::make_shared<std::string>();
        auto pballs = std::make_shared<std::string>();
        auto lambda = std::make_shared<double>(2.0);
        auto pseed = std::make_shared<unsigned long long>(1);
        auto pout = std::make_shared<std::string>();
        pc->add_option("--space", *pspace, "graph JSON")->required();
        pc->add_option("--balls", *pballs, "id:r,id:r,...")->required();
        pc->add_option("--lambda", *lambda, "dilation factor");
        pc->add_option("--seed", *pseed, "candidate seed");
        pc->add_option("--out", *pout, "report JSON")->required();
        pc->callback([=]() {
            const auto sp = fraclab::load_space(*pspace);
            const auto family = parse_ball_list(*sp, *pballs);
            const auto rep = fraclab::poincare_constant(*sp, family, *lambda,
                                                        10, 50, *pseed);
            fraclab::write_report_json(
                *pout, rep,
                {{"cmd", "geometry poincare"}, {"space", *pspace},
                 {"balls", *pballs}});
            std::printf("C\t%s\n", fmtd(rep.constant()).c_str());
        });
    }

    // ------------------------------------------------------------ accept
    {
        auto* accept =
            app.add_subcommand("accept", "run the acceptance suite");
        auto relaxed = std::make_shared<bool>(false);
        auto seed = std::make_shared<unsigned long long>(2026);
        auto criterion = std::make_shared<int>(0);
        auto out = std::make_shared<std::string>();
        auto tsv = std::make_shared<std::string>();
        accept->add_flag("--relaxed", *relaxed,
                         "x10 tolerance tier for extreme orders");
        accept->add_option("--seed", *seed, "suite seed");
        accept->add_option("--criterion", *criterion,
                           "run a single criterion (1..10); 0 = all");
        accept->add_option("--out", *out, "machine-readable JSON verdicts");
        accept->add_option("--tsv", *tsv, "human TSV verdicts");
        accept->callback([=, &exit_code]() {
            fraclab::AcceptanceOptions opt;
            opt.tolerance_scale = *relaxed ? 10.0 : 1.0;
            opt.seed = *seed;
            std::vector<fraclab::CriterionResult> results;
            if (*criterion == 0)
                results = fraclab::run_acceptance(opt);
            else
                results.push_back(fraclab::run_criterion(*criterion, opt));
            bool all_ok = true;
            std::string tsv_text =
                "# fraclab acceptance-tsv format-version=1\n"
                "id\tname\tverdict\tseconds\tdetail\n";
            json jr;
            jr["format-version"] = fraclab::kFormatVersion;
            jr["config"] = {{"tier", *relaxed ? "relaxed" : "strict"},
                            {"seed", *seed}};
            jr["criteria"] = json::array();
            for (const auto& r : results) {
                all_ok = all_ok && r.passed;
                std::printf("criterion %2d %-28s %s  (%.1fs)  %s\n", r.id,
                            r.name.c_str(), r.passed ? "PASS" : "FAIL",
                            r.seconds, r.detail.c_str());
                tsv_text += std::to_string(r.id) + "\t" + r.name + "\t" +
                            (r.passed ? "PASS" : "FAIL") + "\t" +
                            fmtd(r.seconds) + "\t" + r.detail + "\n";
                jr["criteria"].push_back({{"id", r.id},
                                          {"name", r.name},
                                          {"passed", r.passed},
                                          {"seconds", r.seconds},
                                          {"detail", r.detail}});
            }
            jr["all-passed"] = all_ok;
            if (!out->empty()) {
                std::ofstream os(*out, std::ios::binary | std::ios::trunc);
                fraclab::require(os.good(), "FileWriteError",
                                 "cannot write " + *out);
                os << jr.dump(2) << "\n";
            }
            if (!tsv->empty()) {
                std::ofstream os(*tsv, std::ios::binary | std::ios::trunc);
                fraclab::require(os.good(), "FileWriteError",
                                 "cannot write " + *tsv);
                os << tsv_text;
            }
            if (!all_ok) exit_code = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_numeric_failure(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return exit_code;
}

#include "fraclab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

using json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "FileNotFound", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), "FileWriteError", "cannot write " + path);
    out << text;
    require(out.good(), "FileWriteError", "write failed on " + path);
}

void write_echo_header(std::ostringstream& out, const std::string& kind,
                       const ConfigEcho& echo) {
    out << "# fraclab " << kind << " format-version=" << kFormatVersion
        << "\n";
    for (const auto& [k, v] : echo) out << "# " << k << "=" << v << "\n";
}

// Splits a data line on tabs; blank lines and '#' comments yield empty.
std::vector<std::string> tsv_fields(const std::string& line) {
    if (line.empty() || line[0] == '#') return {};
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() &&
        fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        require(used == text.size() && std::isfinite(v), "BadNumber",
                "invalid " + what + ": " + text);
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail("BadNumber", "invalid " + what + ": " + text);
    }
}

// Header comments written by write_field_tsv / loaders that must recover
// scalar parameters.
std::map<std::string, std::string> header_pairs(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] != '#') break;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::size_t start = 1;
        while (start < line.size() && line[start] == ' ') ++start;
        kv[line.substr(start, eq - start)] = line.substr(eq + 1);
    }
    return kv;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::shared_ptr<const DirichletSpace> parse_space_json(
    const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("BadGraphFile", std::string("JSON parse error: ") + e.what());
    }
    require(j.is_object() && j.contains("vertices") && j.contains("edges"),
            "BadGraphFile", "graph JSON needs 'vertices' and 'edges'");

    std::vector<std::string> ids;
    std::vector<double> mu;
    std::set<std::string> seen;
    for (const auto& v : j.at("vertices")) {
        require(v.is_object() && v.contains("id") && v.contains("mu"),
                "BadGraphFile", "vertex entries need 'id' and 'mu'");
        const std::string id = v.at("id").get<std::string>();
        require(seen.insert(id).second, "BadGraphFile",
                "duplicate vertex id " + id);
        ids.push_back(id);
        mu.push_back(v.at("mu").get<double>());
    }
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (const auto& e : j.at("edges")) {
        require(e.is_object() && e.contains("u") && e.contains("v") &&
                    e.contains("w"),
                "BadGraphFile", "edge entries need 'u', 'v', 'w'");
        edges.emplace_back(e.at("u").get<std::string>(),
                           e.at("v").get<std::string>(),
                           e.at("w").get<double>());
    }
    std::optional<std::vector<double>> metric;
    if (j.contains("metric") && !j.at("metric").is_null()) {
        const auto& m = j.at("metric");
        const std::size_t n = ids.size();
        std::vector<double> flat;
        if (m.is_array() && m.size() == n && n > 0 && m.at(0).is_array()) {
            for (const auto& row : m) {
                require(row.size() == n, "BadGraphFile",
                        "metric matrix must be square");
                for (const auto& x : row) flat.push_back(x.get<double>());
            }
        } else if (m.is_array()) {
            require(m.size() == n * n, "BadGraphFile",
                    "metric must be an n x n matrix");
            for (const auto& x : m) flat.push_back(x.get<double>());
        } else {
            fail("BadGraphFile", "metric must be an array");
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < a; ++b)
                require(flat[a * n + b] == flat[b * n + a], "BadGraphFile",
                        "explicit metric is asymmetric");
        metric = std::move(flat);
    }
    return std::make_shared<DirichletSpace>(
        build_space(std::move(ids), std::move(mu), edges, std::move(metric)));
}

std::shared_ptr<const DirichletSpace> load_space(const std::string& path) {
    return parse_space_json(slurp(path));
}

void save_space(const DirichletSpace& space, const std::string& path) {
    json j;
    j["format-version"] = kFormatVersion;
    j["vertices"] = json::array();
    for (int x = 0; x < space.size(); ++x)
        j["vertices"].push_back(
            {{"id", space.vertex_ids()[x]}, {"mu", space.mu(x)}});
    j["edges"] = json::array();
    for (const auto& e : space.edges())
        j["edges"].push_back({{"u", space.vertex_ids()[e.u]},
                              {"v", space.vertex_ids()[e.v]},
                              {"w", e.w}});
    j["metric"] = space.metric_matrix();
    spill(path, j.dump(2) + "\n");
}

std::vector<double> load_function_tsv(const std::string& path,
                                      const DirichletSpace& space) {
    const std::string text = slurp(path);
    std::istringstream in(text);
    std::string line;
    std::vector<double> values(space.size());
    std::vector<char> have(space.size(), 0);
    bool header_row_seen = false;
    while (std::getline(in, line)) {
        const auto fields = tsv_fields(line);
        if (fields.empty()) continue;
        if (!header_row_seen && fields[0] == "vertex_id") {
            header_row_seen = true;
            continue;
        }
        require(fields.size() >= 2, "BadFunctionFile",
                "function TSV rows need (vertex_id, value)");
        const int x = space.index_of(fields[0]);
        require(x >= 0, "UnknownVertex",
                "vertex id not in space: " + fields[0]);
        require(!have[x], "BadFunctionFile",
                "duplicate value for vertex " + fields[0]);
        have[x] = 1;
        values[x] = parse_double(fields[1], "function value");
    }
    for (int x = 0; x < space.size(); ++x)
        require(have[x], "BadFunctionFile",
                "missing value for vertex " + space.vertex_ids()[x]);
    return values;
}

void write_function_tsv(const std::string& path, const DirichletSpace& space,
                        const std::vector<double>& values,
                        const ConfigEcho& echo) {
    require(static_cast<int>(values.size()) == space.size(), "ShapeMismatch",
            "value count != vertex count");
    std::ostringstream out;
    write_echo_header(out, "function-tsv", echo);
    out << "vertex_id\tvalue\n";
    for (int x = 0; x < space.size(); ++x)
        out << space.vertex_ids()[x] << '\t' << format_number(values[x])
            << '\n';
    spill(path, out.str());
}

void write_table_tsv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const ConfigEcho& echo) {
    std::ostringstream out;
    write_echo_header(out, "table-tsv", echo);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? '\t' : '\n');
    for (const auto& row : rows) {
        require(row.size() == columns.size(), "ShapeMismatch",
                "table row width != column count");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_number(row[c]) << (c + 1 < row.size() ? '\t' : '\n');
    }
    spill(path, out.str());
}

void write_field_tsv(const std::string& path, const ExtensionField& field,
                     const ConfigEcho& echo) {
    std::ostringstream out;
    ConfigEcho full = echo;
    full.emplace_back("s", format_number(field.s));
    full.emplace_back("N", std::to_string(field.mesh.segments()));
    full.emplace_back("Y", format_number(field.mesh.y.back()));
    full.emplace_back("gamma", format_number(field.mesh.gamma));
    write_echo_header(out, "field-tsv", full);
    out << "vertex_id\ty\tU\n";
    const int n = field.space->size();
    for (int j = 0; j <= field.mesh.segments(); ++j)
        for (int x = 0; x < n; ++x)
            out << field.space->vertex_ids()[x] << '\t'
                << format_number(field.mesh.y[j]) << '\t'
                << format_number(field.at(x, j)) << '\n';
    spill(path, out.str());
}

ExtensionField load_field_tsv(const std::string& path,
                              std::shared_ptr<const DirichletSpace> space) {
    const std::string text = slurp(path);
    const auto kv = header_pairs(text);
    for (const char* key : {"s", "N", "Y", "gamma"})
        require(kv.count(key), "BadFieldFile",
                std::string("field TSV header lacks ") + key);
    const double s = parse_double(kv.at("s"), "s");
    const int N = static_cast<int>(parse_double(kv.at("N"), "N"));
    const double Y = parse_double(kv.at("Y"), "Y");
    const double gamma = parse_double(kv.at("gamma"), "gamma");
    const YMesh mesh = build_graded_mesh(Y, N, gamma, 1.0 - 2.0 * s);

    // First pass: vertex ids in file order at the first level.
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> data;
    bool header_row_seen = false;
    while (std::getline(in, line)) {
        auto fields = tsv_fields(line);
        if (fields.empty()) continue;
        if (!header_row_seen && fields[0] == "vertex_id") {
            header_row_seen = true;
            continue;
        }
        require(fields.size() >= 3, "BadFieldFile",
                "field TSV rows need (vertex_id, y, U)");
        data.push_back(std::move(fields));
    }
    require(!data.empty() && data.size() % (N + 1) == 0, "BadFieldFile",
            "field TSV row count does not match N");
    const int n = static_cast<int>(data.size()) / (N + 1);
    for (int x = 0; x < n; ++x) ids.push_back(data[x][0]);

    if (!space) {
        // Placeholder base: unit path over the recorded ids.  Vertical
        // operations (traces, mesh bookkeeping) never read conductances.
        std::vector<double> mu(n, 1.0);
        std::vector<std::tuple<std::string, std::string, double>> ed;
        for (int x = 0; x + 1 < n; ++x) ed.emplace_back(ids[x], ids[x + 1], 1.0);
        space = std::make_shared<DirichletSpace>(
            build_space(ids, std::move(mu), ed));
    }
    require(space->size() == n, "ShapeMismatch",
            "field TSV vertex count != space size");

    ExtensionField field;
    field.space = space;
    field.mesh = mesh;
    field.s = s;
    field.values.assign(static_cast<std::size_t>(n) * (N + 1), 0.0);
    for (int j = 0; j <= N; ++j)
        for (int x = 0; x < n; ++x) {
            const auto& row = data[static_cast<std::size_t>(j) * n + x];
            const int xi = space->index_of(row[0]);
            require(xi >= 0, "UnknownVertex",
                    "vertex id not in space: " + row[0]);
            const double y = parse_double(row[1], "y");
            require(std::abs(y - mesh.y[j]) <=
                        1e-9 * std::max(1.0, std::abs(mesh.y[j])),
                    "BadFieldFile", "stored y nodes disagree with the mesh");
            field.values[static_cast<std::size_t>(j) * n + xi] =
                parse_double(row[2], "U");
        }
    return field;
}

void write_report_json(const std::string& path, const ExperimentReport& report,
                       const ConfigEcho& echo) {
    json j;
    j["format-version"] = kFormatVersion;
    j["kind"] = report.kind;
    j["config"] = json::object();
    for (const auto& [k, v] : echo) j["config"][k] = v;
    for (const auto& [k, v] : report.config) j["config"][k] = v;
    j["constants"] = json::object();
    for (const auto& [k, v] : report.constants) j["constants"][k] = v;
    if (!report.refinement_trace.empty())
        j["refinement-trace"] = report.refinement_trace;
    std::ostringstream tsv;
    for (std::size_t c = 0; c < report.columns.size(); ++c)
        tsv << report.columns[c]
            << (c + 1 < report.columns.size() ? '\t' : '\n');
    for (const auto& row : report.trials) {
        for (std::size_t c = 0; c < row.size(); ++c)
            tsv << format_number(row[c]) << (c + 1 < row.size() ? '\t' : '\n');
    }
    j["trials-tsv"] = tsv.str();
    spill(path, j.dump(2) + "\n");
}

}  // namespace fraclab

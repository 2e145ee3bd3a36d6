#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/extension.hpp"
#include "fraclab/report.hpp"
#include "fraclab/space.hpp"

namespace fraclab {

/// Ordered key=value pairs echoed into every output file so a result can
/// always be traced back to the configuration that produced it.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline constexpr int kFormatVersion = 1;

/// Graph JSON: {"vertices":[{"id":str,"mu":float}...],
///              "edges":[{"u":str,"v":str,"w":float}...],
///              "metric": optional row-major matrix}.
/// Rejects duplicate ids and asymmetric explicit metrics.
std::shared_ptr<const DirichletSpace> load_space(const std::string& path);
std::shared_ptr<const DirichletSpace> parse_space_json(const std::string& text);
void save_space(const DirichletSpace& space, const std::string& path);

/// Function TSV: comment header, then one (vertex_id, value) row per
/// vertex.  The loader requires exactly one value per vertex of `space`.
std::vector<double> load_function_tsv(const std::string& path,
                                      const DirichletSpace& space);
void write_function_tsv(const std::string& path, const DirichletSpace& space,
                        const std::vector<double>& values,
                        const ConfigEcho& echo);

/// Generic numeric table TSV with config-echo header.
void write_table_tsv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const ConfigEcho& echo);

/// Extension field TSV: header records s / N / Y / gamma, rows are
/// (vertex_id, y, U) in level-major order.  The loader rebuilds the mesh
/// from the recorded parameters and cross-checks the stored y nodes; when
/// no space is supplied, a unit-weight placeholder over the recorded
/// vertex ids is synthesized (the vertical trace operations never read
/// base conductances).
void write_field_tsv(const std::string& path, const ExtensionField& field,
                     const ConfigEcho& echo);
ExtensionField load_field_tsv(
    const std::string& path,
    std::shared_ptr<const DirichletSpace> space = nullptr);

/// Experiment report as JSON: format version, kind, config echo,
/// constants, refinement trace, and the trial table embedded as TSV text.
void write_report_json(const std::string& path, const ExperimentReport& report,
                       const ConfigEcho& echo);

/// Shortest round-trip decimal form; fixed across platforms so identical
/// runs produce byte-identical outputs.
std::string format_number(double v);

}  // namespace fraclab

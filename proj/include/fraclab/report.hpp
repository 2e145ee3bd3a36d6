#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Uniform container for the empirical experiments: configuration echo,
/// named result constants, a per-trial table, and an optional refinement
/// trace.  The primary constant is the max over the recorded trials, so a
/// report is internally consistent by construction.
struct ExperimentReport {
    std::string kind;
    std::map<std::string, double> config;
    std::map<std::string, double> constants;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> trials;
    std::vector<double> refinement_trace;

    double constant(const std::string& name = "C") const {
        auto it = constants.find(name);
        require(it != constants.end(), "MissingConstant",
                "report has no constant named " + name);
        return it->second;
    }
};

}  // namespace fraclab

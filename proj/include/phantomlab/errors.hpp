#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace phantomlab {

/// Ill-formed model definition (bad density parameters, NaN densities, ...).
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid experiment configuration. Carries every violated constraint.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), issues(std::move(problems)) {}
    explicit ConfigError(const std::string& what)
        : ConfigError(std::vector<std::string>{what}) {}

    std::vector<std::string> issues;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
};

/// Level/quantile calibration cannot be carried out as requested.
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Statistical estimation failed its preconditions (too few points, ...).
struct EstimationError : std::runtime_error {
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace phantomlab

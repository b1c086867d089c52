#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nkspin/nkgeom.hpp"
#include "nkspin/quat.hpp"
#include "nkspin/s3calc.hpp"
#include "nkspin/spinor.hpp"

namespace nkspin::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kDegeneracy = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was given; what() is the help text.
class HelpRequested : public UsageError {
public:
    using UsageError::UsageError;
};

struct RunConfig {
    std::string command;
    std::string family;
    ImQuat a{kI};
    ImQuat b{kJ};
    /// 0 selects the command default (1000, or 20000 for geometry).
    std::size_t samples{0};
    std::uint64_t seed{20240601};
    DerivMode deriv{DerivMode::Analytic};
    double h{1e-4};
    std::map<std::string, double> tolerance_overrides;
    std::string out{"-"};
    /// Warnings raised while parsing; copied into the report.
    std::vector<std::string> warnings;
};

struct ReportDocument {
    nlohmann::json json;
    int exit_code{kFail};
};

/// Parses argv into a RunConfig; UsageError on malformed input. Warnings
/// (e.g. vector renormalization) are stored in RunConfig::warnings.
RunConfig parse_args(int argc, const char* const* argv);

/// Parses "x,y,z" into a unit imaginary quaternion (renormalizing).
ImQuat parse_unit_vector(const std::string& text, std::vector<std::string>& warnings);

/// const:w,x,y,z | inv | conjb:x,y,z | binv:x,y,z | identity | randpoly:<seed>
SpinorField parse_spinor_spec(const std::string& spec, std::vector<std::string>& warnings);

/// gamma1 | gamma2 | gamma3[:x,y,z] | gamma4[:x,y,z] | lab | graphinv:<map spec>.
/// Vectors omitted from gamma3/gamma4 come from `b`; lab uses (a, b).
LagrangianFamily parse_family_spec(const std::string& spec, const ImQuat& a, const ImQuat& b,
                                   std::vector<std::string>& warnings);

/// Executes the configured command. Usage problems become exit code 2 and
/// numerical degeneracy exit code 3, each with an "error" entry in the document.
ReportDocument run(const RunConfig& config);

/// Recomputes the pass flag of a report from its "metrics" and "checks".
bool recompute_pass(const nlohmann::json& report);

}  // namespace nkspin::cli

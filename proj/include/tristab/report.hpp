#pragma once

#include "tristab/hyers.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tristab {

inline constexpr const char* kReportSchema = "tristab.report/1";

enum class Comparison { AtMost, AtLeast };

/// One named check. The verdict is a pure function of (value, threshold, comparison),
/// so a report can be re-audited from its numbers alone. Non-gating checks are
/// recorded but do not influence the exit status.
struct CheckRecord {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::AtMost;
    bool gating = true;
    std::vector<std::string> flags;

    bool passed() const noexcept;
    std::string verdict() const { return passed() ? "PASS" : "FAIL"; }
};

struct ConvergenceCurve {
    std::string probe;
    bool converged = false;
    std::vector<HyersStep> points;
};

struct VerificationReport {
    std::string schema_version = kReportSchema;
    nlohmann::json config = nlohmann::json::object();
    std::map<std::string, double> estimates;
    std::vector<CheckRecord> checks;
    std::vector<ConvergenceCurve> curves;
    double wall_clock_seconds = 0.0;

    bool all_gating_passed() const noexcept;
    const CheckRecord* find(const std::string& name) const;
};

nlohmann::json to_json(const VerificationReport& rep);
/// Strict parse: wrong schema_version, unknown or missing fields, and verdicts that
/// disagree with their recorded numbers are all rejected.
VerificationReport report_from_json(const nlohmann::json& doc);

/// Writes the report document to `path` and, when `with_csv` is set, one CSV per
/// convergence curve next to it (`<stem>.curve<k>.csv`, header n,last_step,tail_bound).
/// Returns the CSV paths written.
std::vector<std::filesystem::path> emit_report(const VerificationReport& rep, const std::filesystem::path& path,
                                               bool with_csv = true);
VerificationReport load_report(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same binary64.
std::string format_double(double v);

} // namespace tristab

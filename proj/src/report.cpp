#include "tristab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tristab {

namespace {

using nlohmann::json;

json number(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j)
{
    if (j.is_number())
        return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw std::invalid_argument("report: expected a number, got '" + s + "'");
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object())
        throw std::invalid_argument("report: " + where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("report: unknown field '" + key + "' in " + where);
    for (const auto& key : allowed)
        if (!obj.contains(key))
            throw std::invalid_argument("report: missing field '" + key + "' in " + where);
}

} // namespace

bool CheckRecord::passed() const noexcept
{
    if (std::isnan(value))
        return false;
    return comparison == Comparison::AtMost ? value <= threshold : value >= threshold;
}

bool VerificationReport::all_gating_passed() const noexcept
{
    for (const auto& c : checks)
        if (c.gating && !c.passed())
            return false;
    return true;
}

const CheckRecord* VerificationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json to_json(const VerificationReport& rep)
{
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"value", number(c.value)},
                          {"threshold", number(c.threshold)},
                          {"comparison", c.comparison == Comparison::AtMost ? "<=" : ">="},
                          {"gating", c.gating},
                          {"flags", c.flags},
                          {"verdict", c.verdict()}});
    }
    json curves = json::array();
    for (const auto& cv : rep.curves) {
        json pts = json::array();
        for (const auto& p : cv.points)
            pts.push_back({{"n", p.n}, {"last_step", number(p.last_step)}, {"tail_bound", number(p.tail_bound)}});
        curves.push_back({{"probe", cv.probe}, {"converged", cv.converged}, {"points", std::move(pts)}});
    }
    json estimates = json::object();
    for (const auto& [k, v] : rep.estimates)
        estimates[k] = number(v);
    return {{"schema_version", rep.schema_version},
            {"config", rep.config},
            {"estimates", std::move(estimates)},
            {"checks", std::move(checks)},
            {"curves", std::move(curves)},
            {"verdict", rep.all_gating_passed() ? "PASS" : "FAIL"},
            {"wall_clock_seconds", rep.wall_clock_seconds}};
}

VerificationReport report_from_json(const json& doc)
{
    require_keys(doc, {"schema_version", "config", "estimates", "checks", "curves", "verdict", "wall_clock_seconds"},
                 "report");
    VerificationReport rep;
    rep.schema_version = doc.at("schema_version").get<std::string>();
    if (rep.schema_version != kReportSchema)
        throw std::invalid_argument("report: unsupported schema_version '" + rep.schema_version + "'");
    rep.config = doc.at("config");
    for (const auto& [k, v] : doc.at("estimates").items())
        rep.estimates[k] = number_from(v);
    std::set<std::string> seen;
    for (const auto& c : doc.at("checks")) {
        require_keys(c, {"name", "value", "threshold", "comparison", "gating", "flags", "verdict"}, "check");
        CheckRecord rec;
        rec.name = c.at("name").get<std::string>();
        if (!seen.insert(rec.name).second)
            throw std::invalid_argument("report: check '" + rec.name + "' listed twice");
        rec.value = number_from(c.at("value"));
        rec.threshold = number_from(c.at("threshold"));
        const auto cmp = c.at("comparison").get<std::string>();
        if (cmp != "<=" && cmp != ">=")
            throw std::invalid_argument("report: bad comparison '" + cmp + "'");
        rec.comparison = cmp == "<=" ? Comparison::AtMost : Comparison::AtLeast;
        rec.gating = c.at("gating").get<bool>();
        rec.flags = c.at("flags").get<std::vector<std::string>>();
        if (c.at("verdict").get<std::string>() != rec.verdict())
            throw std::invalid_argument("report: verdict of '" + rec.name + "' contradicts its numbers");
        rep.checks.push_back(std::move(rec));
    }
    for (const auto& cv : doc.at("curves")) {
        require_keys(cv, {"probe", "converged", "points"}, "curve");
        ConvergenceCurve curve;
        curve.probe = cv.at("probe").get<std::string>();
        curve.converged = cv.at("converged").get<bool>();
        for (const auto& p : cv.at("points")) {
            require_keys(p, {"n", "last_step", "tail_bound"}, "curve point");
            curve.points.push_back({p.at("n").get<int>(), number_from(p.at("last_step")),
                                    number_from(p.at("tail_bound"))});
        }
        rep.curves.push_back(std::move(curve));
    }
    rep.wall_clock_seconds = doc.at("wall_clock_seconds").get<double>();
    if (doc.at("verdict").get<std::string>() != (rep.all_gating_passed() ? "PASS" : "FAIL"))
        throw std::invalid_argument("report: overall verdict contradicts the checks");
    return rep;
}

std::vector<std::filesystem::path> emit_report(const VerificationReport& rep, const std::filesystem::path& path,
                                               bool with_csv)
{
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + p.string() + "' for writing");
        out << text;
        if (!out)
            throw std::runtime_error("write to '" + p.string() + "' failed");
    };
    write(path, to_json(rep).dump(2) + "\n");

    std::vector<std::filesystem::path> written;
    if (!with_csv)
        return written;
    for (std::size_t k = 0; k < rep.curves.size(); ++k) {
        std::ostringstream csv;
        csv << "n,last_step,tail_bound\n";
        for (const auto& p : rep.curves[k].points)
            csv << p.n << ',' << format_double(p.last_step) << ',' << format_double(p.tail_bound) << '\n';
        auto cpath = path;
        cpath.replace_extension();
        cpath += ".curve" + std::to_string(k) + ".csv";
        write(cpath, csv.str());
        written.push_back(cpath);
    }
    return written;
}

VerificationReport load_report(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open report '" + path.string() + "'");
    try {
        return report_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed report '" + path.string() + "': " + e.what());
    }
}

} // namespace tristab

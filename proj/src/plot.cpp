#include "tristab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tristab {

namespace {

constexpr double kWidth = 640, kHeight = 400, kMargin = 56;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double log_floor(double v)
{
    return std::log10(std::max(v, 1e-300));
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& body)
{
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error("cannot write plot " + p.string());
    out << body;
}

std::string header(const std::string& title)
{
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
      << "</text>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin / 2
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin / 2 << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    return s.str();
}

// log10 axis on y, linear on x
struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kMargin + (x - x0) / std::max(x1 - x0, 1e-12) * (kWidth - 1.5 * kMargin); }
    double py(double ly) const
    {
        return kHeight - kMargin - (ly - y0) / std::max(y1 - y0, 1e-12) * (kHeight - 1.5 * kMargin);
    }
};

std::string y_ticks(const Frame& f)
{
    std::ostringstream s;
    for (int e = static_cast<int>(std::ceil(f.y0)); e <= static_cast<int>(std::floor(f.y1)); e += 2)
        s << "<text x=\"" << kMargin - 6 << "\" y=\"" << f.py(e) + 4 << "\" text-anchor=\"end\">1e" << e
          << "</text>\n";
    return s.str();
}

std::string convergence_svg(const VerificationReport& rep)
{
    double max_n = 1, lo = 0, hi = -300;
    for (const auto& c : rep.curves)
        for (const auto& p : c.points) {
            max_n = std::max(max_n, static_cast<double>(p.n));
            for (double v : {p.last_step, p.tail_bound})
                if (v > 0) {
                    lo = std::min(lo, log_floor(v));
                    hi = std::max(hi, log_floor(v));
                }
        }
    if (hi < lo)
        hi = lo + 1;
    const Frame f{0, max_n, std::floor(lo), std::ceil(hi)};
    std::string svg = header("Hyers iterates: last step (solid), tail bound (dashed)") + y_ticks(f);
    std::ostringstream s;
    for (std::size_t k = 0; k < rep.curves.size(); ++k) {
        const char* color = kPalette[k % std::size(kPalette)];
        for (int series = 0; series < 2; ++series) {
            s << "<polyline fill=\"none\" stroke=\"" << color << "\"" << (series ? " stroke-dasharray=\"4 3\"" : "")
              << " points=\"";
            for (const auto& p : rep.curves[k].points) {
                const double v = series ? p.tail_bound : p.last_step;
                if (v > 0)
                    s << f.px(p.n) << ',' << f.py(log_floor(v)) << ' ';
            }
            s << "\"/>\n";
        }
        s << "<text x=\"" << kWidth - kMargin * 3 << "\" y=\"" << 40 + 14 * k << "\" fill=\"" << color << "\">"
          << escape(rep.curves[k].probe) << (rep.curves[k].converged ? "" : " (unconverged)") << "</text>\n";
    }
    s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">n</text>\n";
    return svg + s.str() + "</svg>\n";
}

std::string checks_svg(const VerificationReport& rep)
{
    double lo = 0, hi = -300;
    for (const auto& c : rep.checks)
        for (double v : {c.value, c.threshold})
            if (v > 0 && std::isfinite(v)) {
                lo = std::min(lo, log_floor(v));
                hi = std::max(hi, log_floor(v));
            }
    if (hi < lo)
        hi = lo + 1;
    const double n = static_cast<double>(std::max<std::size_t>(rep.checks.size(), 1));
    const Frame f{0, n, std::floor(lo) - 1, std::ceil(hi) + 1};
    std::string svg = header("Check values (bars) against thresholds (ticks)") + y_ticks(f);
    std::ostringstream s;
    const double slot = (kWidth - 1.5 * kMargin) / n;
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const auto& c = rep.checks[i];
        const double x = f.px(static_cast<double>(i)) + slot * 0.15;
        const double base = f.py(f.y0);
        const double v = std::isfinite(c.value) ? log_floor(c.value) : f.y1;
        const double top = f.py(std::clamp(v, f.y0, f.y1));
        s << "<rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << slot * 0.7 << "\" height=\""
          << std::max(base - top, 0.0) << "\" fill=\"" << (c.passed() ? "#2ca02c" : "#d62728") << "\""
          << (c.gating ? "" : " fill-opacity=\"0.45\"") << "/>\n";
        if (c.threshold > 0) {
            const double ty = f.py(std::clamp(log_floor(c.threshold), f.y0, f.y1));
            s << "<line x1=\"" << x - 2 << "\" y1=\"" << ty << "\" x2=\"" << x + slot * 0.7 + 2 << "\" y2=\"" << ty
              << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        }
        s << "<text transform=\"translate(" << x + slot * 0.35 << ',' << kHeight - kMargin + 8
          << ") rotate(35)\" font-size=\"9\">" << escape(c.name) << "</text>\n";
    }
    return svg + s.str() + "</svg>\n";
}

} // namespace

std::vector<std::filesystem::path> write_plots(const VerificationReport& rep, const std::filesystem::path& report_path)
{
    auto stem = report_path;
    stem.replace_extension();
    std::vector<std::filesystem::path> out;
    if (!rep.curves.empty()) {
        auto p = stem;
        p += ".convergence.svg";
        write_file(p, convergence_svg(rep));
        out.push_back(p);
    }
    auto p = stem;
    p += ".checks.svg";
    write_file(p, checks_svg(rep));
    out.push_back(p);
    return out;
}

} // namespace tristab

#include "blowup/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

namespace {

const char* relation_text(Relation r) {
    switch (r) {
        case Relation::Within: return "within";
        case Relation::Below: return "<";
        case Relation::AtMost: return "<=";
        case Relation::Above: return ">";
        case Relation::AtLeast: return ">=";
    }
    return "?";
}

bool evaluate(Relation r, double m, double target, double tol) {
    switch (r) {
        case Relation::Within: return std::abs(m - target) <= tol;
        case Relation::Below: return m < target;
        case Relation::AtMost: return m <= target;
        case Relation::Above: return m > target;
        case Relation::AtLeast: return m >= target;
    }
    return false;
}

}  // namespace

void ExperimentReport::echo(const std::string& key, const std::string& v) { config.emplace_back(key, v); }

void ExperimentReport::value(const std::string& key, double v) { values.emplace_back(key, format_double(v)); }

void ExperimentReport::value(const std::string& key, const std::string& v) { values.emplace_back(key, v); }

const ReportCheck& ExperimentReport::check(const std::string& name, double measured,
                                           Relation relation, double target, double tolerance) {
    ReportCheck c{name, measured, target, tolerance, relation,
                  std::isfinite(measured) && evaluate(relation, measured, target, tolerance)};
    checks.push_back(c);
    return checks.back();
}

const ReportCheck& ExperimentReport::check_fit(const std::string& name, const RateFit& fit,
                                               double target_slope, double tolerance) {
    fits.push_back({name, fit, target_slope});
    const double deviation = std::abs(fit.slope - target_slope) + fit.stderr_slope;
    ReportCheck c{name, fit.slope, target_slope, tolerance, Relation::Within,
                  std::isfinite(deviation) && deviation <= tolerance};
    checks.push_back(c);
    return checks.back();
}

void ExperimentReport::flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, 0.0, Relation::Within, ok, true});
}

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.passed; });
}

void render_summary(const ExperimentReport& report, std::ostream& os) {
    os << "# blowup-lab report\n";
    os << "title = " << report.title << '\n';
    if (!report.config.empty()) {
        os << "\n[config]\n";
        for (const auto& [k, v] : report.config) os << k << " = " << v << '\n';
    }
    if (!report.values.empty()) {
        os << "\n[values]\n";
        for (const auto& [k, v] : report.values) os << k << " = " << v << '\n';
    }
    if (!report.fits.empty()) {
        os << "\n[fits]\n";
        for (const auto& f : report.fits) {
            os << f.series << " = slope " << format_double(f.fit.slope) << " stderr "
               << format_double(f.fit.stderr_slope) << " window [" << format_double(f.fit.window.s_lo)
               << ", " << format_double(f.fit.window.s_hi) << "] points " << f.fit.points;
            if (f.target_slope) os << " target " << format_double(*f.target_slope);
            os << '\n';
        }
    }
    if (!report.checks.empty()) {
        os << "\n[checks]\n";
        for (const auto& c : report.checks) {
            os << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (c.is_flag) {
                os << '\n';
                continue;
            }
            os << " measured " << format_double(c.measured)
               << ' ' << relation_text(c.relation) << ' ' << format_double(c.target);
            if (c.relation == Relation::Within) os << " tolerance " << format_double(c.tolerance);
            os << '\n';
        }
        os << "\nresult = " << (report.passed() ? "pass" : "fail") << '\n';
    }
}

void render_series_csv(const NormSeries& series, std::ostream& os) {
    os << "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        os << format_double(series.t[i]) << ',' << format_double(series.value[i]) << '\n';
    }
}

void render_svg(const ExperimentReport& report, std::ostream& os) {
    const double width = 640.0, height = 480.0, pad = 48.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto point = [](const NormSeries& s, std::size_t i, double& x, double& y) {
        const double d = s.t_ref - s.t[i];
        if (!(d > 0.0) || !(s.value[i] > 0.0)) return false;
        x = std::log10(d);
        y = std::log10(s.value[i]);
        return true;
    };
    for (const auto& s : report.series) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            double x, y;
            if (!point(s, i, x, y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
    os << "<title>" << report.title << ": log10 norm vs log10(t_ref - t)</title>\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << width - 2 * pad << "\" height=\""
       << height - 2 * pad << "\" fill=\"none\" stroke=\"#888\"/>\n";
    std::size_t k = 0;
    for (const auto& s : report.series) {
        os << "<polyline fill=\"none\" stroke=\"" << colours[k % 6] << "\" data-series=\"" << s.name
           << "\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double x, y;
            if (!point(s, i, x, y)) continue;
            const double px = pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad);
            const double py = height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px, py);
            os << buf;
            first = false;
        }
        os << "\"/>\n";
        ++k;
    }
    os << "</svg>\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir, bool svg) {
    std::vector<std::filesystem::path> written;
    std::ostringstream summary;
    render_summary(report, summary);
    written.push_back(dir / "summary.txt");
    write_text_file(written.back(), summary.str());
    for (const auto& s : report.series) {
        std::ostringstream csv;
        render_series_csv(s, csv);
        written.push_back(dir / (s.name + ".csv"));
        write_text_file(written.back(), csv.str());
    }
    if (svg) {
        std::ostringstream plot;
        render_svg(report, plot);
        written.push_back(dir / "plot.svg");
        write_text_file(written.back(), plot.str());
    }
    return written;
}

}  // namespace blowup

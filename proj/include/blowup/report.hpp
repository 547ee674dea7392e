#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/rate_fit.hpp"

namespace blowup {

enum class Relation {
    Within,  // |measured - target| <= tolerance
    Below,   // measured < target
    AtMost,  // measured <= target
    Above,   // measured > target
    AtLeast, // measured >= target
};

struct ReportCheck {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::Within;
    bool passed = false;
    bool is_flag = false;  // a yes/no property without a measured value
};

struct ReportFit {
    std::string series;
    RateFit fit;
    std::optional<double> target_slope;
};

/// Structured result of one harness run. Entries keep insertion order.
struct ExperimentReport {
    std::string title;
    std::vector<std::pair<std::string, std::string>> config;  // echo of every setting used
    std::vector<std::pair<std::string, std::string>> values;  // measured quantities
    std::vector<ReportFit> fits;
    std::vector<ReportCheck> checks;
    std::vector<NormSeries> series;

    void echo(const std::string& key, const std::string& value);
    void value(const std::string& key, double v);
    void value(const std::string& key, const std::string& v);
    const ReportCheck& check(const std::string& name, double measured, Relation relation,
                             double target, double tolerance = 0.0);
    /// A fitted slope within `tolerance` of the target once its standard error is
    /// added to the deviation.
    const ReportCheck& check_fit(const std::string& name, const RateFit& fit, double target_slope,
                                 double tolerance);
    void flag(const std::string& name, bool ok);

    bool passed() const;
};

/// Plain-text key-value summary; byte-identical for identical reports.
void render_summary(const ExperimentReport& report, std::ostream& os);
/// Header `t,value`.
void render_series_csv(const NormSeries& series, std::ostream& os);
/// Log-norm against log(t_ref - t), one polyline per series.
void render_svg(const ExperimentReport& report, std::ostream& os);

/// Writes summary.txt, one CSV per series and optionally plot.svg into dir.
/// Returns the written paths. Throws IoError naming the path on IO failure.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir, bool svg);

/// Writes text to a file, creating parent directories; throws IoError with the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace blowup

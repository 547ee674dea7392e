#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace blowup {

/// Time-stamped positive values of one norm, approaching a singular time t_ref.
struct NormSeries {
    std::string name;
    double t_ref = 0.0;
    std::vector<double> t;
    std::vector<double> value;

    void push(double time, double v);
    std::size_t size() const { return t.size(); }
};

/// Window in the distance to the singular time, s = t_ref - t.
struct FitWindow {
    double s_lo = 1e-4;
    double s_hi = 1e-1;
    bool operator==(const FitWindow&) const = default;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    FitWindow window;
    std::size_t points = 0;
};

/// Least-squares slope of log(value) against log(t_ref - t) over the window.
///
/// A blow-up (-t)^(-e) fits with slope -e. Throws DegenerateWindow when fewer
/// than five samples fall inside, the window spans less than one decade, or a
/// value is not positive.
RateFit fit_rate(const NormSeries& series, const FitWindow& window);

/// Largest relative deviation of (t_ref - t)^e * value from its mean over the window.
double plateau_spread(const NormSeries& series, double exponent, const FitWindow& window);

/// log-spaced times t_ref - s for s from s_hi down to s_lo, `count` points.
std::vector<double> log_spaced_times(double t_ref, const FitWindow& window, std::size_t count);

}  // namespace blowup

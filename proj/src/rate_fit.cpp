#include "blowup/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

void NormSeries::push(double time, double v) {
    t.push_back(time);
    value.push_back(v);
}

namespace {

void check_window(const FitWindow& w) {
    if (!(w.s_lo > 0.0) || !(w.s_hi > w.s_lo)) {
        throw DegenerateWindow("fit window needs 0 < s_lo < s_hi, got [" + format_double(w.s_lo) +
                               ", " + format_double(w.s_hi) + "]");
    }
    if (w.s_hi < 10.0 * w.s_lo * (1.0 - 1e-12)) {
        throw DegenerateWindow("fit window [" + format_double(w.s_lo) + ", " +
                               format_double(w.s_hi) + "] spans less than one decade");
    }
}

bool in_window(double s, const FitWindow& w) {
    const double slack = 1e-12;
    return s >= w.s_lo * (1.0 - slack) && s <= w.s_hi * (1.0 + slack);
}

}  // namespace

RateFit fit_rate(const NormSeries& series, const FitWindow& window) {
    check_window(window);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double s = series.t_ref - series.t[i];
        if (!in_window(s, window)) continue;
        if (!(series.value[i] > 0.0)) {
            throw DegenerateWindow("series '" + series.name + "' has a non-positive value at t = " +
                                   format_double(series.t[i]));
        }
        xs.push_back(std::log(s));
        ys.push_back(std::log(series.value[i]));
    }
    const std::size_t n = xs.size();
    if (n < 5) {
        throw DegenerateWindow("series '" + series.name + "' has " + std::to_string(n) +
                               " points in the fit window, at least 5 needed");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateWindow("fit window samples share a single time");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - fit.intercept - fit.slope * xs[i];
        rss += r * r;
    }
    fit.stderr_slope = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    fit.window = window;
    fit.points = n;
    return fit;
}

double plateau_spread(const NormSeries& series, double exponent, const FitWindow& window) {
    std::vector<double> scaled;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double s = series.t_ref - series.t[i];
        if (in_window(s, window)) scaled.push_back(std::pow(s, exponent) * series.value[i]);
    }
    if (scaled.empty()) throw DegenerateWindow("no samples of '" + series.name + "' in window");
    double mean = 0.0;
    for (double v : scaled) mean += v;
    mean /= static_cast<double>(scaled.size());
    double worst = 0.0;
    for (double v : scaled) worst = std::max(worst, std::abs(v - mean) / std::abs(mean));
    return worst;
}

std::vector<double> log_spaced_times(double t_ref, const FitWindow& window, std::size_t count) {
    if (count < 2) throw DegenerateWindow("log-spaced sampling needs at least two points");
    std::vector<double> out(count);
    const double a = std::log(window.s_hi);
    const double b = std::log(window.s_lo);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
        out[i] = t_ref - s;
    }
    out.front() = t_ref - window.s_hi;
    out.back() = t_ref - window.s_lo;
    return out;
}

}  // namespace blowup

#include "blowup/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

// Sections and the keys each accepts, in serialization order.
const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> s = {
        {"model", {"dim", "alpha"}},
        {"profile", {"form", "amplitude", "k", "centres", "exponents", "scale", "rho"}},
        {"grid", {"length", "points"}},
        {"solver", {"dt_max", "cfl_amp", "dt_min", "blowup_linf_threshold", "monitor_cadence"}},
        {"simulate", {"direction", "t_from", "t_to", "initial", "amplitude", "width"}},
        {"sequence", {"n", "t0", "mu_window", "checkpoints"}},
        {"rates", {"window", "samples", "exterior_radius", "forward_track", "forward_n"}},
        {"output", {"dir", "svg"}},
        {"invariants", {"seed", "pairs"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

class Entries {
public:
    Entries(std::map<std::string, Entry> m, std::string source)
        : map_(std::move(m)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        auto it = map_.find(key);
        std::string where = source_;
        if (it != map_.end()) where += ":" + std::to_string(it->second.line);
        throw ConfigError(where + ": key '" + key + "': " + why);
    }

    double real(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return parse_real(key, map_.at(key).value);
    }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = map_.at(key).value;
        long long out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = map_.at(key).value;
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size()) {
            fail(key, "expected a non-negative integer, got '" + v + "'");
        }
        return out;
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = map_.at(key).value;
        if (v == "true") return true;
        if (v == "false") return false;
        fail(key, "expected true or false, got '" + v + "'");
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? map_.at(key).value : fallback;
    }

    std::vector<double> reals(const std::string& key, char sep) const {
        std::vector<double> out;
        for (const auto& part : split(map_.at(key).value, sep)) out.push_back(parse_real(key, part));
        return out;
    }

    FitWindow window(const std::string& key, FitWindow fallback) const {
        if (!has(key)) return fallback;
        const auto v = reals(key, ',');
        if (v.size() != 2) fail(key, "expected two values 's_lo, s_hi'");
        if (!(v[0] > 0.0 && v[1] > v[0])) fail(key, "window needs 0 < s_lo < s_hi");
        return {v[0], v[1]};
    }

private:
    double parse_real(const std::string& key, const std::string& v) const {
        double out = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
            fail(key, "expected a number, got '" + v + "'");
        }
        return out;
    }

    std::map<std::string, Entry> map_;
    std::string source_;
};

std::map<std::string, Entry> read_entries(std::istream& in, const std::string& source) {
    std::set<std::string> known;
    std::set<std::string> sections;
    for (const auto& [sec, keys] : schema()) {
        sections.insert(sec);
        for (const auto& k : keys) known.insert(sec + "." + k);
    }
    std::map<std::string, Entry> out;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        const std::string at = source + ":" + std::to_string(line);
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(at + ": malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!sections.count(section)) throw ConfigError(at + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(at + ": expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        if (section.empty()) throw ConfigError(at + ": key '" + key + "' outside any section");
        const std::string full = section + "." + key;
        if (!known.count(full)) throw ConfigError(at + ": unknown key '" + full + "'");
        if (out.count(full)) {
            throw ConfigError(at + ": key '" + full + "' repeats line " +
                              std::to_string(out[full].line));
        }
        out[full] = {trim(s.substr(eq + 1)), line};
    }
    return out;
}

template <class F>
auto guarded(const Entries& e, const std::string& key, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& err) {
        e.fail(key, err.what());
    }
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
    const Entries e(read_entries(in, source), source);
    RunConfig c;

    const int dim = static_cast<int>(e.integer("model.dim", 1));
    const double alpha = e.real("model.alpha", 2.0);
    const auto params = guarded(e, e.has("model.alpha") ? "model.alpha" : "model.dim",
                                [&] { return ModelParams::make(dim, alpha); });

    const std::string form = e.text("profile.form", "power_law");
    if (form == "power_law") {
        for (const char* k : {"profile.centres", "profile.exponents", "profile.scale"}) {
            if (e.has(k)) e.fail(k, "only valid with form = multi_point");
        }
        c.profile = ProfileSpec::power_law(params, e.real("profile.amplitude", 1.0),
                                           e.real("profile.k", 12.0), e.real("profile.rho", 1.0));
    } else if (form == "multi_point") {
        for (const char* k : {"profile.amplitude", "profile.k"}) {
            if (e.has(k)) e.fail(k, "only valid with form = power_law");
        }
        if (!e.has("profile.centres")) e.fail("profile.centres", "required for form = multi_point");
        if (!e.has("profile.exponents")) e.fail("profile.exponents", "required for form = multi_point");
        std::vector<Coord> centres;
        for (const auto& item : split(e.text("profile.centres", ""), ';')) {
            const auto comps = [&] {
                std::vector<double> v;
                for (const auto& part : split(item, ',')) {
                    double x = 0.0;
                    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
                    if (ec != std::errc() || p != part.data() + part.size() || part.empty()) {
                        e.fail("profile.centres", "expected numbers, got '" + item + "'");
                    }
                    v.push_back(x);
                }
                return v;
            }();
            if (static_cast<int>(comps.size()) != params.dim) {
                e.fail("profile.centres", "point '" + item + "' needs " + std::to_string(params.dim) +
                                              " coordinates");
            }
            Coord x{};
            for (int d = 0; d < params.dim; ++d) x[d] = comps[d];
            centres.push_back(x);
        }
        std::optional<double> rho;
        if (e.has("profile.rho")) rho = e.real("profile.rho", 1.0);
        auto exponents = e.reals("profile.exponents", ',');
        if (exponents.size() != centres.size()) {
            e.fail("profile.exponents", std::to_string(exponents.size()) + " exponents for " +
                                            std::to_string(centres.size()) + " centres");
        }
        c.profile = ProfileSpec::multi_point(params, std::move(centres), std::move(exponents),
                                             e.real("profile.scale", 1.0), rho);
    } else {
        e.fail("profile.form", "expected power_law or multi_point, got '" + form + "'");
    }

    c.grid.dim = params.dim;
    c.grid.length = e.real("grid.length", 40.0);
    c.grid.points = static_cast<int>(e.integer("grid.points", params.dim == 1 ? 1024 : 128));
    guarded(e, e.has("grid.points") ? "grid.points" : "grid.length", [&] { c.grid.validate(); });

    c.solver.dt_max = e.real("solver.dt_max", c.solver.dt_max);
    c.solver.cfl_amp = e.real("solver.cfl_amp", c.solver.cfl_amp);
    c.solver.dt_min = e.real("solver.dt_min", c.solver.dt_min);
    c.solver.blowup_linf_threshold = e.real("solver.blowup_linf_threshold", c.solver.blowup_linf_threshold);
    c.solver.monitor_cadence = static_cast<int>(e.integer("solver.monitor_cadence", c.solver.monitor_cadence));
    guarded(e, "solver.dt_max", [&] { c.solver.validate(); });

    const std::string dir = e.text("simulate.direction", "backward");
    if (dir == "backward") {
        c.simulate.direction = Direction::Backward;
    } else if (dir == "forward") {
        c.simulate.direction = Direction::Forward;
    } else {
        e.fail("simulate.direction", "expected forward or backward, got '" + dir + "'");
    }
    c.simulate.t_from = e.real("simulate.t_from", c.simulate.t_from);
    c.simulate.t_to = e.real("simulate.t_to", c.simulate.t_to);
    c.simulate.initial = e.text("simulate.initial", c.simulate.initial);
    if (c.simulate.initial != "gaussian" && c.simulate.initial != "profile") {
        e.fail("simulate.initial", "expected gaussian or profile, got '" + c.simulate.initial + "'");
    }
    c.simulate.amplitude = e.real("simulate.amplitude", c.simulate.amplitude);
    c.simulate.width = e.real("simulate.width", c.simulate.width);
    if (!(c.simulate.width > 0.0)) e.fail("simulate.width", "must be positive");

    if (e.has("sequence.n")) {
        c.schedule.n.clear();
        for (const auto& part : split(e.text("sequence.n", ""), ',')) {
            int v = 0;
            auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc() || p != part.data() + part.size() || part.empty()) {
                e.fail("sequence.n", "expected integers, got '" + part + "'");
            }
            c.schedule.n.push_back(v);
        }
    }
    c.schedule.t0 = e.real("sequence.t0", c.schedule.t0);
    guarded(e, e.has("sequence.n") ? "sequence.n" : "sequence.t0", [&] { c.schedule.validate(); });
    c.mu_window = e.window("sequence.mu_window", c.mu_window);
    c.checkpoints = static_cast<std::size_t>(e.unsigned_integer("sequence.checkpoints", c.checkpoints));
    if (c.checkpoints < 5) e.fail("sequence.checkpoints", "at least 5 needed for a fit");

    c.rates.window = e.window("rates.window", c.rates.window);
    c.rates.samples = static_cast<std::size_t>(e.unsigned_integer("rates.samples", c.rates.samples));
    if (c.rates.samples < 5) e.fail("rates.samples", "at least 5 needed for a fit");
    c.rates.exterior_radius = e.real("rates.exterior_radius", c.rates.exterior_radius);
    if (!(c.rates.exterior_radius > 0.0)) e.fail("rates.exterior_radius", "must be positive");
    c.rates.forward_track = e.boolean("rates.forward_track", c.rates.forward_track);
    c.rates.forward_n = static_cast<int>(e.integer("rates.forward_n", c.rates.forward_n));
    if (c.rates.forward_n < 1) e.fail("rates.forward_n", "must be positive");

    c.output_dir = e.text("output.dir", "");
    c.svg = e.boolean("output.svg", c.svg);
    c.seed = e.unsigned_integer("invariants.seed", c.seed);
    c.pairs = static_cast<std::size_t>(e.unsigned_integer("invariants.pairs", c.pairs));
    if (c.pairs < 1) e.fail("invariants.pairs", "must be positive");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return parse_config(in, path.string());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    const auto f = [](double v) { return format_double(v); };
    const auto& p = c.profile;
    os << "[model]\n";
    os << "dim = " << p.params.dim << "\nalpha = " << f(p.params.alpha) << "\n\n";
    os << "[profile]\n";
    if (const auto* pl = std::get_if<PowerLaw>(&p.form)) {
        os << "form = power_law\namplitude = " << f(pl->amplitude) << "\nk = " << f(pl->k) << '\n';
    } else {
        const auto& mp = std::get<MultiPoint>(p.form);
        os << "form = multi_point\ncentres = ";
        for (std::size_t j = 0; j < mp.centres.size(); ++j) {
            if (j) os << "; ";
            for (int d = 0; d < p.params.dim; ++d) os << (d ? ", " : "") << f(mp.centres[j][d]);
        }
        os << "\nexponents = ";
        for (std::size_t j = 0; j < mp.exponents.size(); ++j) os << (j ? ", " : "") << f(mp.exponents[j]);
        os << "\nscale = " << f(mp.scale) << '\n';
    }
    os << "rho = " << f(p.rho) << "\n\n";
    os << "[grid]\nlength = " << f(c.grid.length) << "\npoints = " << c.grid.points << "\n\n";
    os << "[solver]\ndt_max = " << f(c.solver.dt_max) << "\ncfl_amp = " << f(c.solver.cfl_amp)
       << "\ndt_min = " << f(c.solver.dt_min)
       << "\nblowup_linf_threshold = " << f(c.solver.blowup_linf_threshold)
       << "\nmonitor_cadence = " << c.solver.monitor_cadence << "\n\n";
    os << "[simulate]\ndirection = " << to_string(c.simulate.direction) << "\nt_from = "
       << f(c.simulate.t_from) << "\nt_to = " << f(c.simulate.t_to) << "\ninitial = "
       << c.simulate.initial << "\namplitude = " << f(c.simulate.amplitude) << "\nwidth = "
       << f(c.simulate.width) << "\n\n";
    os << "[sequence]\nn = ";
    for (std::size_t i = 0; i < c.schedule.n.size(); ++i) os << (i ? ", " : "") << c.schedule.n[i];
    os << "\nt0 = " << f(c.schedule.t0) << "\nmu_window = " << f(c.mu_window.s_lo) << ", "
       << f(c.mu_window.s_hi) << "\ncheckpoints = " << c.checkpoints << "\n\n";
    os << "[rates]\nwindow = " << f(c.rates.window.s_lo) << ", " << f(c.rates.window.s_hi)
       << "\nsamples = " << c.rates.samples << "\nexterior_radius = " << f(c.rates.exterior_radius)
       << "\nforward_track = " << (c.rates.forward_track ? "true" : "false")
       << "\nforward_n = " << c.rates.forward_n << "\n\n";
    os << "[output]\n";
    if (!c.output_dir.empty()) os << "dir = " << c.output_dir << '\n';
    os << "svg = " << (c.svg ? "true" : "false") << "\n\n";
    os << "[invariants]\nseed = " << c.seed << "\npairs = " << c.pairs << '\n';
    return os.str();
}

std::string config_reference() {
    std::ostringstream os;
    os << "Config keys (flat INI sections) and defaults:\n";
    RunConfig defaults;
    std::istringstream in(serialize_config(defaults));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) os << "  " << line << '\n';
    }
    os << "  [profile] multi_point form: centres = x1[, y1]; x2[, y2] ..., exponents = k1, k2, ...,\n"
          "            scale = c; rho defaults to half the smallest distance between centres\n"
          "  [simulate] initial = gaussian | profile; direction = forward | backward\n"
          "  [output] dir = <path> (otherwise $BLOWUP_LAB_OUT, otherwise ./blowup-out)\n";
    return os.str();
}

}  // namespace blowup

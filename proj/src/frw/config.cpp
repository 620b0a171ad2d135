#include "frw/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

namespace frw {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Classify: return "classify";
        case Scenario::Stability: return "stability";
        case Scenario::DecayFit: return "decay-fit";
        case Scenario::ConformalCheck: return "conformal-check";
        case Scenario::ShockContrast: return "shock-contrast";
        case Scenario::DivergenceCheck: return "divergence-check";
    }
    return "stability";
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) {
        msg += "\n  ";
        msg += p;
    }
    return msg;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end != c + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_ratio(const std::string& s) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return parse_double(s);
    auto num = parse_double(trim(s.substr(0, slash)));
    auto den = parse_double(trim(s.substr(slash + 1)));
    if (!num || !den || *den == 0.0) return std::nullopt;
    return *num / *den;
}

std::optional<long long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* c = s.c_str();
    char* end = nullptr;
    long long v = std::strtoll(c, &end, 10);
    if (end != c + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Parser {
    std::string origin;
    std::map<std::string, RawEntry> entries;
    std::vector<std::string> problems;

    void fail(int line, const std::string& msg) {
        problems.push_back(origin + ":" + std::to_string(line) + ": " + msg);
    }

    void load(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::size_t hash = raw.find('#');
            std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (body.empty()) continue;
            std::size_t eq = body.find('=');
            if (eq == std::string::npos) {
                fail(line, "expected 'key = value'");
                continue;
            }
            std::string key = trim(body.substr(0, eq));
            std::string value = trim(body.substr(eq + 1));
            if (key.empty()) {
                fail(line, "missing key before '='");
                continue;
            }
            if (value.empty()) {
                fail(line, "empty value for key '" + key + "'");
                continue;
            }
            if (entries.count(key)) {
                fail(line, "duplicate key '" + key + "' (first at line " +
                               std::to_string(entries[key].line) + ")");
                continue;
            }
            entries[key] = RawEntry{value, line, false};
        }
    }

    RawEntry* take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    void number(const std::string& key, double& dst, double lo, double hi,
                const char* bound_text) {
        RawEntry* e = take(key);
        if (!e) return;
        auto v = parse_double(e->value);
        if (!v) {
            fail(e->line, "key '" + key + "': '" + e->value + "' is not a number");
            return;
        }
        if (!(*v >= lo && *v <= hi) || !std::isfinite(*v)) {
            fail(e->line, "key '" + key + "': value must lie in " + bound_text);
            return;
        }
        dst = *v;
    }

    void integer(const std::string& key, long long& dst, long long lo, long long hi,
                 const char* bound_text) {
        RawEntry* e = take(key);
        if (!e) return;
        auto v = parse_int(e->value);
        if (!v) {
            fail(e->line, "key '" + key + "': '" + e->value + "' is not an integer");
            return;
        }
        if (*v < lo || *v > hi) {
            fail(e->line, "key '" + key + "': value must lie in " + bound_text);
            return;
        }
        dst = *v;
    }

    void report_unknown() {
        for (const auto& [key, entry] : entries)
            if (!entry.used) fail(entry.line, "unknown key '" + key + "'");
    }
};

std::optional<int> field_index(const std::string& name) {
    if (name == "L") return 0;
    if (name == "u1") return 1;
    if (name == "u2") return 2;
    if (name == "u3") return 3;
    return std::nullopt;
}

const char* field_name(int idx) {
    static const char* names[] = {"L", "u1", "u2", "u3"};
    return names[idx];
}

struct PendingPerturbation {
    ConfiguredPerturbation cfg;
    bool needs_phase = false;
    int line = 0;
};

std::optional<std::array<double, 3>> parse_triple(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) return std::nullopt;
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        auto v = parse_double(parts[static_cast<std::size_t>(i)]);
        if (!v) return std::nullopt;
        out[static_cast<std::size_t>(i)] = *v;
    }
    return out;
}

void parse_perturbation(Parser& p, const std::string& key, const RawEntry& e,
                        std::vector<PendingPerturbation>& out) {
    std::istringstream in(e.value);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    if (tokens.empty()) {
        p.fail(e.line, "key '" + key + "': empty perturbation");
        return;
    }
    PendingPerturbation pending;
    pending.line = e.line;
    PerturbationSpec& spec = pending.cfg.spec;
    const std::string& kind = tokens[0];
    if (kind == "fourier") {
        spec.kind = PerturbationSpec::Kind::Fourier;
        pending.needs_phase = true;
    } else if (kind == "bump") {
        spec.kind = PerturbationSpec::Kind::GaussianBump;
    } else if (kind == "compressive") {
        spec.kind = PerturbationSpec::Kind::CompactCompressive;
    } else {
        p.fail(e.line, "key '" + key + "': unknown perturbation kind '" + kind +
                           "' (expected fourier, bump, or compressive)");
        return;
    }
    bool have_amp = false;
    bool have_center = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::size_t eq = tokens[i].find('=');
        if (eq == std::string::npos) {
            p.fail(e.line, "key '" + key + "': expected name=value, got '" +
                               tokens[i] + "'");
            return;
        }
        std::string name = tokens[i].substr(0, eq);
        std::string value = tokens[i].substr(eq + 1);
        if (name == "amp") {
            auto v = parse_double(value);
            if (!v || !std::isfinite(*v)) {
                p.fail(e.line, "key '" + key + "': amp must be a finite number");
                return;
            }
            pending.cfg.amplitude = *v;
            have_amp = true;
        } else if (name == "field") {
            if (spec.kind == PerturbationSpec::Kind::CompactCompressive) {
                p.fail(e.line, "key '" + key +
                                   "': compressive acts on all velocity "
                                   "components; drop 'field'");
                return;
            }
            auto idx = field_index(value);
            if (!idx) {
                p.fail(e.line, "key '" + key + "': field must be L, u1, u2, or u3");
                return;
            }
            spec.field = *idx;
        } else if (name == "k" && spec.kind == PerturbationSpec::Kind::Fourier) {
            auto v = parse_triple(value);
            if (!v) {
                p.fail(e.line, "key '" + key + "': k must be three numbers k1,k2,k3");
                return;
            }
            spec.kvec = *v;
        } else if (name == "phase" && spec.kind == PerturbationSpec::Kind::Fourier) {
            auto v = parse_double(value);
            if (!v) {
                p.fail(e.line, "key '" + key + "': phase must be a number");
                return;
            }
            spec.phase = *v;
            pending.needs_phase = false;
        } else if (name == "center" &&
                   spec.kind != PerturbationSpec::Kind::Fourier) {
            auto v = parse_triple(value);
            if (!v) {
                p.fail(e.line,
                       "key '" + key + "': center must be three numbers x,y,z");
                return;
            }
            spec.center = *v;
            have_center = true;
        } else if (name == "width" &&
                   spec.kind == PerturbationSpec::Kind::GaussianBump) {
            auto v = parse_double(value);
            if (!v || !(*v > 0.0)) {
                p.fail(e.line, "key '" + key + "': width must be positive");
                return;
            }
            spec.width = *v;
        } else if (name == "radius" &&
                   spec.kind == PerturbationSpec::Kind::CompactCompressive) {
            auto v = parse_double(value);
            if (!v || !(*v > 0.0)) {
                p.fail(e.line, "key '" + key + "': radius must be positive");
                return;
            }
            spec.radius = *v;
        } else {
            p.fail(e.line, "key '" + key + "': unknown option '" + name +
                               "' for kind '" + kind + "'");
            return;
        }
    }
    if (!have_amp) {
        p.fail(e.line, "key '" + key + "': missing required option 'amp'");
        return;
    }
    if (!have_center) spec.center = {-1.0, -1.0, -1.0};  // box center, resolved below
    out.push_back(std::move(pending));
}

std::vector<std::pair<double, double>> load_table(Parser& p, int line,
                                                  const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        p.fail(line, "table file '" + path + "' cannot be opened");
        return {};
    }
    std::vector<std::pair<double, double>> rows;
    std::string raw;
    int tline = 0;
    while (std::getline(in, raw)) {
        ++tline;
        std::size_t hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        std::istringstream ls(body);
        double t, Om;
        if (!(ls >> t >> Om)) {
            p.fail(line, "table file '" + path + "' line " + std::to_string(tline) +
                             ": expected 't Omega'");
            return {};
        }
        rows.emplace_back(t, Om);
    }
    return rows;
}

struct EnumOption {
    const char* token;
    int value;
};

template <typename T>
void enumerated(Parser& p, const std::string& key, T& dst,
                std::initializer_list<EnumOption> options) {
    RawEntry* e = p.take(key);
    if (!e) return;
    for (const auto& opt : options)
        if (e->value == opt.token) {
            dst = static_cast<T>(opt.value);
            return;
        }
    std::string expected;
    for (const auto& opt : options) {
        if (!expected.empty()) expected += ", ";
        expected += opt.token;
    }
    p.fail(e->line, "key '" + key + "': '" + e->value + "' is not one of: " + expected);
}

}  // namespace

config_error::config_error(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Parser p;
    p.origin = origin;
    p.load(text);

    RunConfig cfg;

    {
        RawEntry* e = p.take("scenario");
        if (!e) {
            p.fail(0, "missing required key 'scenario'");
        } else {
            static const std::map<std::string, Scenario> names = {
                {"classify", Scenario::Classify},
                {"stability", Scenario::Stability},
                {"decay-fit", Scenario::DecayFit},
                {"conformal-check", Scenario::ConformalCheck},
                {"shock-contrast", Scenario::ShockContrast},
                {"divergence-check", Scenario::DivergenceCheck},
            };
            auto it = names.find(e->value);
            if (it == names.end())
                p.fail(e->line, "key 'scenario': '" + e->value +
                                    "' is not a known scenario");
            else
                cfg.scenario = it->second;
        }
    }

    enumerated(p, "family", cfg.family,
               {{"exponential", static_cast<int>(ScaleFactorSpec::Family::Exponential)},
                {"power-law", static_cast<int>(ScaleFactorSpec::Family::PowerLaw)},
                {"tabulated", static_cast<int>(ScaleFactorSpec::Family::Tabulated)}});
    if (p.has("family")) {
        int fline = p.entries["family"].line;
        if (cfg.family == ScaleFactorSpec::Family::Exponential && !p.has("H"))
            p.fail(fline, "missing required key 'H' (family = exponential)");
        if (cfg.family == ScaleFactorSpec::Family::PowerLaw && !p.has("Q"))
            p.fail(fline, "missing required key 'Q' (family = power-law)");
        if (cfg.family == ScaleFactorSpec::Family::Tabulated && !p.has("table_path"))
            p.fail(fline, "missing required key 'table_path' (family = tabulated)");
    }
    p.number("H", cfg.H, 1e-12, 1e6, "(0, 1e6]");
    p.number("Q", cfg.Q, 1e-12, 1e6, "(0, 1e6]");
    p.number("decay_q", cfg.decay_q, 0.0, 1e6, "[0, 1e6]");
    if (RawEntry* e = p.take("table_path")) {
        cfg.table_path = e->value;
        cfg.table = load_table(p, e->line, e->value);
        if (!cfg.table.empty()) {
            try {
                ScaleFactorSpec::tabulated(cfg.table, cfg.decay_q);
            } catch (const std::exception& ex) {
                p.fail(e->line, std::string("key 'table_path': ") + ex.what());
            }
        }
    }

    enumerated(p, "stable_family", cfg.stable_family,
               {{"exponential", static_cast<int>(ScaleFactorSpec::Family::Exponential)},
                {"power-law", static_cast<int>(ScaleFactorSpec::Family::PowerLaw)},
                {"tabulated", static_cast<int>(ScaleFactorSpec::Family::Tabulated)}});
    if (p.has("stable_family")) {
        int fline = p.entries["stable_family"].line;
        if (cfg.stable_family == ScaleFactorSpec::Family::Exponential &&
            !p.has("stable_H"))
            p.fail(fline, "missing required key 'stable_H' (stable_family = exponential)");
        if (cfg.stable_family == ScaleFactorSpec::Family::PowerLaw && !p.has("stable_Q"))
            p.fail(fline, "missing required key 'stable_Q' (stable_family = power-law)");
        if (cfg.stable_family == ScaleFactorSpec::Family::Tabulated &&
            !p.has("stable_table_path"))
            p.fail(fline,
                   "missing required key 'stable_table_path' (stable_family = tabulated)");
    }
    p.number("stable_H", cfg.stable_H, 1e-12, 1e6, "(0, 1e6]");
    p.number("stable_Q", cfg.stable_Q, 1e-12, 1e6, "(0, 1e6]");
    p.number("stable_decay_q", cfg.stable_decay_q, 0.0, 1e6, "[0, 1e6]");
    if (RawEntry* e = p.take("stable_table_path")) {
        cfg.stable_table_path = e->value;
        cfg.stable_table = load_table(p, e->line, e->value);
        if (!cfg.stable_table.empty()) {
            try {
                ScaleFactorSpec::tabulated(cfg.stable_table, cfg.stable_decay_q);
            } catch (const std::exception& ex) {
                p.fail(e->line, std::string("key 'stable_table_path': ") + ex.what());
            }
        }
    }

    if (RawEntry* e = p.take("c2")) {
        auto v = parse_ratio(e->value);
        if (!v)
            p.fail(e->line, "key 'c2': '" + e->value + "' is not a number or ratio");
        else if (!(*v >= 0.0 && *v <= 1.0 / 3.0))
            p.fail(e->line, "key 'c2': value must lie in [0, 1/3]");
        else
            cfg.c2 = *v;
    }
    p.number("rho_bar", cfg.rho_bar, 1e-300, 1e300, "(0, inf)");

    long long n = 0;
    for (int a = 0; a < 3; ++a) {
        static const char* keys[] = {"nx", "ny", "nz"};
        n = cfg.dims[static_cast<std::size_t>(a)];
        p.integer(keys[a], n, 1, 1 << 14, "[1, 16384]");
        cfg.dims[static_cast<std::size_t>(a)] = n;
    }
    for (int a = 0; a < 3; ++a) {
        static const char* keys[] = {"lx", "ly", "lz"};
        p.number(keys[a], cfg.lengths[static_cast<std::size_t>(a)], 1e-12, 1e12,
                 "(0, 1e12]");
    }

    std::vector<PendingPerturbation> pending;
    for (int i = 1;; ++i) {
        std::string key = "perturb" + std::to_string(i);
        RawEntry* e = p.take(key);
        if (!e) {
            std::string next = "perturb" + std::to_string(i + 1);
            if (p.has(next))
                p.fail(p.entries[next].line,
                       "perturbation keys must be numbered consecutively from "
                       "perturb1 ('" + key + "' is missing)");
            break;
        }
        parse_perturbation(p, key, *e, pending);
    }

    p.number("cfl", cfg.ctl.cfl, 1e-6, 1.0, "(0, 1]");
    p.number("dt_max", cfg.ctl.dt_max, 1e-12, 1e6, "(0, 1e6]");
    p.number("t_end", cfg.ctl.t_end, 1.0, 1e12, "[1, 1e12]");
    p.number("gradient_threshold", cfg.ctl.gradient_threshold, 0.0, 1e300,
             "[0, inf)");
    p.number("value_threshold", cfg.ctl.value_threshold, 1e-12, 1e300, "(0, inf)");
    p.number("diag_interval", cfg.diag_interval, 1e-9, 1e9, "(0, 1e9]");
    enumerated(p, "frame", cfg.frame,
               {{"coordinate", static_cast<int>(Frame::CoordinateTime)},
                {"conformal-minkowski", static_cast<int>(Frame::ConformalMinkowski)}});
    p.number("nu", cfg.nu, 0.0, 1e6, "[0, 1e6]");
    p.integer("fixed_steps", cfg.fixed_steps, 0, 100000000, "[0, 1e8]");

    long long N = cfg.N;
    p.integer("N", N, 1, 8, "[1, 8]");
    cfg.N = static_cast<int>(N);
    enumerated(p, "scheme", cfg.scheme,
               {{"spectral", static_cast<int>(Scheme::Spectral)},
                {"central-4", static_cast<int>(Scheme::Central4)},
                {"central-2", static_cast<int>(Scheme::Central2)}});
    p.number("fit_t1", cfg.fit_t1, 1.0, 1e12, "[1, 1e12]");
    p.number("fit_t2", cfg.fit_t2, 1.0, 1e12, "[1, 1e12]");
    p.number("dt_probe", cfg.dt_probe, 1e-12, 1.0, "(0, 1]");

    p.number("r", cfg.r, 2.0 / 3.0, std::nextafter(1.0, 0.0), "[2/3, 1)");
    long long M = cfg.M;
    p.integer("M", M, 0, 6, "[0, 6]");
    cfg.M = static_cast<int>(M);
    p.number("C", cfg.C, 0.0, 1e12, "[0, 1e12]");
    p.number("C_prime", cfg.C_prime, 1e-12, 1e12, "(0, 1e12]");
    p.number("epsilon", cfg.epsilon, 1e-300, 1e12, "(0, 1e12]");

    if (RawEntry* e = p.take("out_dir")) cfg.out_dir = e->value;
    if (RawEntry* e = p.take("snapshot_times")) {
        for (const std::string& part : split(e->value, ',')) {
            auto v = parse_double(part);
            if (!v || !(*v >= 1.0)) {
                p.fail(e->line, "key 'snapshot_times': each entry must be a time >= 1");
                break;
            }
            cfg.snapshot_times.push_back(*v);
        }
    }
    if (RawEntry* e = p.take("seed")) {
        const char* c = e->value.c_str();
        char* end = nullptr;
        unsigned long long v = std::strtoull(c, &end, 10);
        if (end != c + e->value.size() || e->value[0] == '-')
            p.fail(e->line, "key 'seed': '" + e->value + "' is not an unsigned integer");
        else
            cfg.seed = v;
    }
    p.integer("base_steps", cfg.base_steps, 1, 100000000, "[1, 1e8]");
    long long levels = cfg.refine_levels;
    p.integer("refine_levels", levels, 1, 12, "[1, 12]");
    cfg.refine_levels = static_cast<int>(levels);

    p.report_unknown();

    // Cross-key checks, reported against the offending key's line.
    auto line_of = [&](const char* key) {
        auto it = p.entries.find(key);
        return it == p.entries.end() ? 0 : it->second.line;
    };
    if (cfg.frame == Frame::ConformalMinkowski && cfg.c2 != 1.0 / 3.0)
        p.fail(line_of("frame"),
               "key 'frame': conformal-minkowski requires c2 = 1/3");
    if (cfg.scenario == Scenario::ShockContrast && cfg.c2 != 1.0 / 3.0)
        p.fail(line_of("scenario"),
               "key 'scenario': shock-contrast requires c2 = 1/3");
    if (cfg.scenario == Scenario::ConformalCheck && cfg.c2 != 1.0 / 3.0)
        p.fail(line_of("scenario"),
               "key 'scenario': conformal-check requires c2 = 1/3");
    if (cfg.fit_t2 <= cfg.fit_t1)
        p.fail(line_of("fit_t2"), "key 'fit_t2': fit window needs fit_t2 > fit_t1");

    double half_min = 1e300;
    for (int a = 0; a < 3; ++a)
        if (cfg.dims[static_cast<std::size_t>(a)] > 1)
            half_min = std::min(half_min, 0.5 * cfg.lengths[static_cast<std::size_t>(a)]);
    for (const auto& pp : pending) {
        if (pp.cfg.spec.kind == PerturbationSpec::Kind::GaussianBump &&
            !(pp.cfg.spec.width < half_min))
            p.fail(pp.line, "perturbation width must be smaller than half the box");
        if (pp.cfg.spec.kind == PerturbationSpec::Kind::CompactCompressive &&
            !(pp.cfg.spec.radius < half_min))
            p.fail(pp.line, "perturbation radius must be smaller than half the box");
    }

    if (!p.problems.empty()) throw config_error(std::move(p.problems));

    // Resolve defaults that depend on other keys, then the seeded phases.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    for (auto& pp : pending) {
        if (pp.cfg.spec.kind != PerturbationSpec::Kind::Fourier &&
            pp.cfg.spec.center == std::array<double, 3>{-1.0, -1.0, -1.0}) {
            for (int a = 0; a < 3; ++a)
                pp.cfg.spec.center[static_cast<std::size_t>(a)] =
                    0.5 * cfg.lengths[static_cast<std::size_t>(a)];
        }
        if (pp.needs_phase) pp.cfg.spec.phase = uni(rng);
        cfg.perturbations.push_back(pp.cfg);
    }

    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({path + ": cannot open config file"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

namespace {

std::string perturbation_text(const ConfiguredPerturbation& cp) {
    const PerturbationSpec& s = cp.spec;
    std::string out;
    switch (s.kind) {
        case PerturbationSpec::Kind::Fourier:
            out = "fourier field=" + std::string(field_name(s.field)) +
                  " amp=" + fmt_double(cp.amplitude) + " k=" + fmt_double(s.kvec[0]) +
                  "," + fmt_double(s.kvec[1]) + "," + fmt_double(s.kvec[2]) +
                  " phase=" + fmt_double(s.phase);
            break;
        case PerturbationSpec::Kind::GaussianBump:
            out = "bump field=" + std::string(field_name(s.field)) +
                  " amp=" + fmt_double(cp.amplitude) + " center=" +
                  fmt_double(s.center[0]) + "," + fmt_double(s.center[1]) + "," +
                  fmt_double(s.center[2]) + " width=" + fmt_double(s.width);
            break;
        case PerturbationSpec::Kind::CompactCompressive:
            out = "compressive amp=" + fmt_double(cp.amplitude) + " center=" +
                  fmt_double(s.center[0]) + "," + fmt_double(s.center[1]) + "," +
                  fmt_double(s.center[2]) + " radius=" + fmt_double(s.radius);
            break;
    }
    return out;
}

const char* family_token(ScaleFactorSpec::Family f) {
    switch (f) {
        case ScaleFactorSpec::Family::Exponential: return "exponential";
        case ScaleFactorSpec::Family::PowerLaw: return "power-law";
        case ScaleFactorSpec::Family::Tabulated: return "tabulated";
    }
    return "exponential";
}

const char* frame_token(Frame f) {
    return f == Frame::CoordinateTime ? "coordinate" : "conformal-minkowski";
}

}  // namespace

std::string effective_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "scenario = " << scenario_name(cfg.scenario) << "\n";
    out << "family = " << family_token(cfg.family) << "\n";
    switch (cfg.family) {
        case ScaleFactorSpec::Family::Exponential:
            out << "H = " << fmt_double(cfg.H) << "\n";
            break;
        case ScaleFactorSpec::Family::PowerLaw:
            out << "Q = " << fmt_double(cfg.Q) << "\n";
            break;
        case ScaleFactorSpec::Family::Tabulated:
            out << "table_path = " << cfg.table_path << "\n";
            break;
    }
    out << "decay_q = " << fmt_double(cfg.decay_q) << "\n";
    if (cfg.scenario == Scenario::ShockContrast) {
        out << "stable_family = " << family_token(cfg.stable_family) << "\n";
        switch (cfg.stable_family) {
            case ScaleFactorSpec::Family::Exponential:
                out << "stable_H = " << fmt_double(cfg.stable_H) << "\n";
                break;
            case ScaleFactorSpec::Family::PowerLaw:
                out << "stable_Q = " << fmt_double(cfg.stable_Q) << "\n";
                break;
            case ScaleFactorSpec::Family::Tabulated:
                out << "stable_table_path = " << cfg.stable_table_path << "\n";
                break;
        }
        out << "stable_decay_q = " << fmt_double(cfg.stable_decay_q) << "\n";
    }
    out << "c2 = " << fmt_double(cfg.c2) << "\n";
    out << "rho_bar = " << fmt_double(cfg.rho_bar) << "\n";
    out << "nx = " << cfg.dims[0] << "\n";
    out << "ny = " << cfg.dims[1] << "\n";
    out << "nz = " << cfg.dims[2] << "\n";
    out << "lx = " << fmt_double(cfg.lengths[0]) << "\n";
    out << "ly = " << fmt_double(cfg.lengths[1]) << "\n";
    out << "lz = " << fmt_double(cfg.lengths[2]) << "\n";
    for (std::size_t i = 0; i < cfg.perturbations.size(); ++i)
        out << "perturb" << (i + 1) << " = "
            << perturbation_text(cfg.perturbations[i]) << "\n";
    out << "cfl = " << fmt_double(cfg.ctl.cfl) << "\n";
    out << "dt_max = " << fmt_double(cfg.ctl.dt_max) << "\n";
    out << "t_end = " << fmt_double(cfg.ctl.t_end) << "\n";
    out << "gradient_threshold = " << fmt_double(cfg.ctl.gradient_threshold) << "\n";
    out << "value_threshold = " << fmt_double(cfg.ctl.value_threshold) << "\n";
    out << "diag_interval = " << fmt_double(cfg.diag_interval) << "\n";
    out << "frame = " << frame_token(cfg.frame) << "\n";
    out << "nu = " << fmt_double(cfg.nu) << "\n";
    out << "fixed_steps = " << cfg.fixed_steps << "\n";
    out << "N = " << cfg.N << "\n";
    out << "scheme = " << scheme_name(cfg.scheme) << "\n";
    out << "fit_t1 = " << fmt_double(cfg.fit_t1) << "\n";
    out << "fit_t2 = " << fmt_double(cfg.fit_t2) << "\n";
    out << "dt_probe = " << fmt_double(cfg.dt_probe) << "\n";
    out << "r = " << fmt_double(cfg.r) << "\n";
    out << "M = " << cfg.M << "\n";
    out << "C = " << fmt_double(cfg.C) << "\n";
    out << "C_prime = " << fmt_double(cfg.C_prime) << "\n";
    out << "epsilon = " << fmt_double(cfg.epsilon) << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    if (!cfg.snapshot_times.empty()) {
        out << "snapshot_times = ";
        for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
            if (i) out << ",";
            out << fmt_double(cfg.snapshot_times[i]);
        }
        out << "\n";
    }
    out << "seed = " << cfg.seed << "\n";
    out << "base_steps = " << cfg.base_steps << "\n";
    out << "refine_levels = " << cfg.refine_levels << "\n";
    return out.str();
}

std::string print_defaults() {
    RunConfig cfg;
    std::ostringstream out;
    out << "# scenarios: classify | stability | decay-fit | conformal-check |"
           " shock-contrast | divergence-check\n";
    out << "# expansion families: exponential (needs H) | power-law (needs Q) |"
           " tabulated (needs table_path)\n";
    out << "# perturbations (add as perturb1, perturb2, ...):\n";
    out << "#   perturb1 = fourier field=L amp=1e-3 k=1,0,0 phase=0.3\n";
    out << "#     (omitting phase= draws it from 'seed')\n";
    out << "#   perturb2 = bump field=u1 amp=1e-2 center=3.14,3.14,3.14 width=0.5\n";
    out << "#   perturb3 = compressive amp=5e-2 center=2,0,0 radius=0.8\n";
    out << "# values below are the defaults for every optional key\n";
    out << effective_config_text(cfg);
    return out.str();
}

ScaleFactorSpec spacetime(const RunConfig& cfg) {
    switch (cfg.family) {
        case ScaleFactorSpec::Family::Exponential:
            return ScaleFactorSpec::exponential(cfg.H, cfg.decay_q);
        case ScaleFactorSpec::Family::PowerLaw:
            return ScaleFactorSpec::power_law(cfg.Q, cfg.decay_q);
        case ScaleFactorSpec::Family::Tabulated:
            return ScaleFactorSpec::tabulated(cfg.table, cfg.decay_q);
    }
    throw std::logic_error("unhandled family");
}

ScaleFactorSpec stable_spacetime(const RunConfig& cfg) {
    switch (cfg.stable_family) {
        case ScaleFactorSpec::Family::Exponential:
            return ScaleFactorSpec::exponential(cfg.stable_H, cfg.stable_decay_q);
        case ScaleFactorSpec::Family::PowerLaw:
            return ScaleFactorSpec::power_law(cfg.stable_Q, cfg.stable_decay_q);
        case ScaleFactorSpec::Family::Tabulated:
            return ScaleFactorSpec::tabulated(cfg.stable_table, cfg.stable_decay_q);
    }
    throw std::logic_error("unhandled family");
}

FluidState initial_state(const RunConfig& cfg) {
    Grid grid = make_grid(cfg.dims, cfg.lengths);
    FluidState st = background(grid, cfg.rho_bar);
    for (const auto& cp : cfg.perturbations) st = perturb(st, cp.spec, cp.amplitude);
    return st;
}

RunOptions run_options(const RunConfig& cfg) {
    RunOptions opt;
    opt.ctl = cfg.ctl;
    opt.frame = cfg.frame;
    opt.scheme = cfg.scheme;
    opt.nu = cfg.nu;
    opt.N = cfg.N;
    opt.diag_interval = cfg.diag_interval;
    opt.dt_probe = cfg.dt_probe;
    opt.fixed_steps = cfg.fixed_steps;
    opt.snapshot_times = cfg.snapshot_times;
    return opt;
}

}  // namespace frw

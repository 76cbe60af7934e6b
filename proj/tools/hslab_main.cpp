/*
 hslab - a numerical laboratory for the Hunter-Saxton equation on the line.
 Copyright 2026 the hslab authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hs/datum.hpp"
#include "hs/experiments.hpp"
#include "hs/io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_usage = 1;
constexpr int exit_fail = 2;
constexpr int exit_inapplicable = 3;

int exit_code_of(const hs::Verdict& v) {
    switch (v.status) {
        case hs::VerdictStatus::pass: return exit_pass;
        case hs::VerdictStatus::fail: return exit_fail;
        case hs::VerdictStatus::inapplicable: return exit_inapplicable;
    }
    return exit_fail;
}

// --- structured-text config: [grid] / [datum] / [scenario] sections --------

using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    ConfigMap cfg;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string{};
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line without '=': " + line);
        cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

struct Settings {
    double half_width = 12.0;
    int n_points = 4096;

    std::string datum = "gauss_anti";
    double amplitude = 1.0;
    unsigned seed = 1u;

    std::string g_mode = "zero";
    double g_value = 0.0;

    double t_end = -1.0;  // scenario default applied later
    double epsilon = 0.1;
    double r = 2.0;
    double p = 2.0;
    int low_cut_n = 4;
    int k_max = 11;
    double horizon_fraction = 0.99;
    int n_iter = 12;
    double picard_T = 0.1;
    double c_forcing = 0.5;
    double window_a = -1.0, window_b = 1.0, window_t1 = 0.25, window_t2 = 0.75;
    std::string method = "lagrangian";
    std::string limiter = "none";
    bool dump_states = false;

    std::string out_dir;

    void apply(const ConfigMap& cfg) {
        auto get = [&](const std::string& sec, const std::string& key, auto& slot) {
            auto s = cfg.find(sec);
            if (s == cfg.end()) return;
            auto k = s->second.find(key);
            if (k == s->second.end()) return;
            using T = std::decay_t<decltype(slot)>;
            if constexpr (std::is_same_v<T, std::string>)
                slot = k->second;
            else if constexpr (std::is_same_v<T, bool>)
                slot = (k->second == "1" || k->second == "true" || k->second == "yes");
            else if constexpr (std::is_same_v<T, int>)
                slot = std::stoi(k->second);
            else if constexpr (std::is_same_v<T, unsigned>)
                slot = static_cast<unsigned>(std::stoul(k->second));
            else
                slot = std::stod(k->second);
        };
        get("grid", "L", half_width);
        get("grid", "n", n_points);
        get("datum", "kind", datum);
        get("datum", "amplitude", amplitude);
        get("datum", "seed", seed);
        get("datum", "epsilon", epsilon);
        get("datum", "r", r);
        get("datum", "p", p);
        get("datum", "N", low_cut_n);
        get("datum", "k_max", k_max);
        get("scenario", "t_end", t_end);
        get("scenario", "g_mode", g_mode);
        get("scenario", "g_value", g_value);
        get("scenario", "horizon_fraction", horizon_fraction);
        get("scenario", "n_iter", n_iter);
        get("scenario", "T", picard_T);
        get("scenario", "C", c_forcing);
        get("scenario", "window_a", window_a);
        get("scenario", "window_b", window_b);
        get("scenario", "window_t1", window_t1);
        get("scenario", "window_t2", window_t2);
        get("scenario", "method", method);
        get("scenario", "limiter", limiter);
        get("scenario", "dump_states", dump_states);
        get("scenario", "out", out_dir);
    }

    hs::Grid grid() const { return hs::Grid::make(half_width, n_points); }

    hs::Limiter limiter_mode() const {
        if (limiter == "none") return hs::Limiter::none;
        if (limiter == "upwind_blend") return hs::Limiter::upwind_blend;
        throw std::runtime_error("unknown limiter '" + limiter + "' (none|upwind_blend)");
    }

    hs::GMode gmode() const {
        if (g_mode == "zero") return hs::GMode::zero();
        if (g_mode == "constant") return hs::GMode::constant(g_value);
        if (g_mode == "closure") return hs::GMode::closure(g_value);
        throw std::runtime_error("unknown g_mode '" + g_mode + "' (zero|constant|closure)");
    }

    hs::LineFunction build_datum(const hs::Grid& g) const {
        if (datum == "random_band") {
            std::mt19937 rng(seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            auto xi = hs::detail::fft_frequencies(g);
            std::vector<std::complex<double>> spec(xi.size(), {0.0, 0.0});
            for (std::size_t k = 1; k < xi.size() / 2; ++k) {
                const double a = std::abs(xi[k]);
                if (a < 0.3 || a > 0.25 * hs::detail::nyquist_frequency(g)) continue;
                const std::complex<double> z(gauss(rng), gauss(rng));
                spec[k] = z;
                spec[xi.size() - k] = std::conj(z);
            }
            hs::detail::fft_inplace(spec, true);
            std::vector<double> v(spec.size());
            const double lw = 0.6 * g.half_width;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double z = g.point(static_cast<int>(i)) / lw;
                const double z4 = z * z * z * z;
                v[i] = amplitude * spec[i].real() * std::exp(-z4 * z4);
            }
            return hs::LineFunction::make_inferred(g, std::move(v));
        }
        if (datum == "illposed") {
            auto bank = hs::build_default_bank(g);
            hs::IllposedDatumSpec spec{epsilon, r, p, low_cut_n, k_max};
            return hs::build_illposed_datum(spec, bank, g).u0;
        }
        return hs::datum::by_name(datum, g, amplitude);
    }
};

void write_outputs(const Settings& s, const std::string& scenario, const hs::ExperimentReport& rep) {
    const fs::path out = s.out_dir.empty() ? fs::path("out-" + scenario) : fs::path(s.out_dir);
    hs::io::write_report(out / "report.json", rep);
    for (const auto& [name, values] : rep.series)
        hs::io::write_csv(out / "series" / (name + ".csv"), {{name, values}});
    std::cout << to_string(rep.verdict.status) << " [" << rep.verdict.assertion_id << "] "
              << rep.verdict.detail << "\n"
              << "report: " << (out / "report.json").string() << "\n";
}

int run_solve(const Settings& s) {
    const auto g = s.grid();
    const auto u0 = s.build_datum(g);
    const double t_end = s.t_end > 0.0 ? s.t_end : 1.0;
    const fs::path out = s.out_dir.empty() ? fs::path("out-solve") : fs::path(s.out_dir);

    hs::ExperimentReport rep;
    rep.scenario = hs::Scenario::solve;
    rep.echo("datum", s.datum);
    rep.echo("t_end", t_end);
    rep.echo("method", s.method);

    if (s.method == "lagrangian") {
        auto st = hs::init_state(u0, s.gmode());
        const double t_star = hs::blowup_time(st);
        rep.echo("T_star", t_star);
        auto& ts = rep.add_series("t");
        auto& h1 = rep.add_series("h1_energy");
        const int samples = 9;
        for (int k = 0; k < samples; ++k) {
            const double t = t_end * k / (samples - 1.0);
            if (t >= t_star) break;
            auto snap = hs::snapshot(st, t);
            ts.push_back(t);
            h1.push_back(hs::h1_energy(snap));
            std::ostringstream name;
            name << "snapshot_t" << std::fixed << std::setprecision(3) << t << ".csv";
            hs::io::write_snapshot_csv(out / "series" / name.str(), snap);
        }
        rep.pass("solve.completed", "lagrangian snapshots written");
    } else if (s.method == "eulerian") {
        hs::EulerianConfig cfg;
        cfg.t_end = t_end;
        cfg.limiter = s.limiter_mode();
        for (int k = 1; k <= 8; ++k) cfg.output_times.push_back(t_end * k / 8.0);
        auto traj = hs::integrate(u0, cfg, s.gmode());
        hs::io::write_trajectory_csv(out / "series" / "trajectory.csv", traj);
        if (s.dump_states) hs::io::write_state_dump(out / "states.bin", traj);
        rep.echo("halted", traj.halted ? 1.0 : 0.0);
        if (traj.halted) rep.echo("t_halt", traj.t_halt);
        rep.pass("solve.completed", traj.halted ? "halted: " + traj.halt_reason : "reached t_end");
    } else {
        throw std::runtime_error("unknown method '" + s.method + "' (lagrangian|eulerian)");
    }
    write_outputs(s, "solve", rep);
    return exit_code_of(rep.verdict);
}

int run_besov_cli(const Settings& s) {
    const auto g = s.grid();
    const auto f = s.build_datum(g);
    auto bank = hs::build_default_bank(g);
    nlohmann::json records = nlohmann::json::array();
    for (double sv : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        hs::NormRecord rec{sv, s.p, s.r, hs::Homogeneity::homogeneous,
                           hs::besov_norm(bank, f, hs::BesovParams::make(sv, s.p, s.r))};
        records.push_back(hs::io::to_json(rec));
    }
    hs::NormRecord e2{2.0, 2.0, 2.0, hs::Homogeneity::homogeneous,
                      hs::e_space_norm(bank, f, hs::ESpaceParams::make(2, 2, 2))};
    nlohmann::json doc;
    doc["schema_version"] = hs::io::report_schema_version;
    doc["datum"] = s.datum;
    doc["besov"] = records;
    doc["e_space_2_2_2"] = hs::io::to_json(e2);
    const fs::path out = s.out_dir.empty() ? fs::path("out-besov") : fs::path(s.out_dir);
    hs::io::write_text(out / "norms.json", doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\n";
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hslab - numerical laboratory for the Hunter-Saxton equation on the line"};
    app.require_subcommand(1);
    app.fallthrough();

    Settings s;
    std::string config_path;

    app.add_option("--config", config_path, "structured-text config ([grid]/[datum]/[scenario])");
    app.add_option("--L", s.half_width, "domain half-width");
    app.add_option("--n", s.n_points, "grid points (power of two)");
    app.add_option("--t-end", s.t_end, "time horizon");
    app.add_option("--datum", s.datum,
                   "zero|gauss_anti|neg_x_gauss|gaussian|bump|random_band|illposed");
    app.add_option("--amplitude", s.amplitude, "datum amplitude");
    app.add_option("--epsilon", s.epsilon, "ill-posedness epsilon");
    app.add_option("--seed", s.seed, "seed for random_band datum");
    app.add_option("--out", s.out_dir, "output directory");
    app.add_option("--g-mode", s.g_mode, "zero|constant|closure");
    app.add_option("--g-value", s.g_value, "forcing constant (c or C)");
    app.add_option("--method", s.method, "solve: lagrangian|eulerian");
    app.add_option("--limiter", s.limiter, "solve/eulerian: none|upwind_blend");
    app.add_flag("--dump-states", s.dump_states, "solve/eulerian: write binary state dump");
    app.add_option("--r", s.r, "Besov r");
    app.add_option("--p", s.p, "Besov p");
    app.add_option("--N", s.low_cut_n, "ill-posedness low cut index");
    app.add_option("--k-max", s.k_max, "ill-posedness series truncation");
    app.add_option("--horizon-fraction", s.horizon_fraction, "illposed: fraction of T*");
    app.add_option("--n-iter", s.n_iter, "picard: iterations");
    app.add_option("--T", s.picard_T, "picard: horizon");
    app.add_option("--C", s.c_forcing, "uc: forcing constant C > 0");
    app.add_option("--window-a", s.window_a, "uc: window left edge");
    app.add_option("--window-b", s.window_b, "uc: window right edge");
    app.add_option("--window-t1", s.window_t1, "uc: window start time");
    app.add_option("--window-t2", s.window_t2, "uc: window end time");

    auto* c_solve = app.add_subcommand("solve", "evolve a datum and export snapshots/series");
    auto* c_crossval = app.add_subcommand("crossval", "Eulerian vs Lagrangian agreement");
    auto* c_conserve = app.add_subcommand("conserve", "H^1 conservation experiment");
    auto* c_global = app.add_subcommand("global", "global-existence experiment");
    auto* c_blowup = app.add_subcommand("blowup", "blow-up experiment");
    auto* c_picard = app.add_subcommand("picard", "Picard iteration experiment");
    auto* c_besov = app.add_subcommand("besov", "Besov/E-space norms of a datum");
    auto* c_illposed = app.add_subcommand("illposed", "norm-inflation experiment");
    auto* c_uc = app.add_subcommand("uc", "unique-continuation probe (C > 0)");

    // config file values sit between built-in defaults and explicit flags:
    // pre-scan for --config, load, then let CLI11 re-parse the full line
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                s.apply(parse_config(argv[i + 1]));
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return exit_usage;
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (c_solve->parsed()) return run_solve(s);
        if (c_besov->parsed()) return run_besov_cli(s);

        const auto g = s.grid();
        if (c_crossval->parsed()) {
            auto rep = hs::run_crossval(s.datum, s.amplitude, s.t_end > 0 ? s.t_end : 1.0,
                                        s.n_points, s.half_width);
            write_outputs(s, "crossval", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_conserve->parsed()) {
            auto rep = hs::run_conservation(s.build_datum(g), s.t_end > 0 ? s.t_end : 5.0, s.gmode());
            write_outputs(s, "conserve", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_global->parsed()) {
            auto rep = hs::run_global(s.build_datum(g), s.t_end > 0 ? s.t_end : 10.0);
            write_outputs(s, "global", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_blowup->parsed()) {
            auto rep = hs::run_blowup(s.build_datum(g));
            write_outputs(s, "blowup", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_picard->parsed()) {
            auto bank = hs::build_default_bank(g);
            auto rep = hs::run_picard(s.build_datum(g), s.n_iter, s.picard_T, bank);
            write_outputs(s, "picard", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_illposed->parsed()) {
            hs::Grid gi = (s.n_points == 4096 && s.half_width == 12.0)
                              ? hs::Grid::make(12.0, 131072)  // inflation wants headroom
                              : g;
            auto bank = hs::build_default_bank(gi);
            hs::IllposedDatumSpec spec{s.epsilon, s.r, s.p, s.low_cut_n, s.k_max};
            auto rep = hs::run_norm_inflation(spec, s.horizon_fraction, bank, gi);
            write_outputs(s, "illposed", rep);
            return exit_code_of(rep.verdict);
        }
        if (c_uc->parsed()) {
            hs::EulerianConfig cfg;
            cfg.t_end = s.t_end > 0 ? s.t_end : 1.0;
            for (int k = 0; k <= 8; ++k) cfg.output_times.push_back(cfg.t_end * k / 8.0);
            auto traj = hs::integrate(s.build_datum(g), cfg, hs::GMode::closure(s.c_forcing));
            hs::UcWindow win{s.window_a, s.window_b, s.window_t1, s.window_t2};
            auto rep = hs::unique_continuation_probe(traj, win, s.c_forcing);
            write_outputs(s, "uc", rep);
            return exit_code_of(rep.verdict);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

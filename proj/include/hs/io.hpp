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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hs/eulerian.hpp"
#include "hs/experiments.hpp"
#include "hs/grid.hpp"
#include "hs/lagrangian.hpp"
#include "hs/littlewood_paley.hpp"

namespace hs::io {

constexpr int report_schema_version = 1;

inline nlohmann::json to_json(const ExperimentReport& rep) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["scenario"] = to_string(rep.scenario);
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [k, v] : rep.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    nlohmann::json series = nlohmann::json::object();
    for (const auto& [k, v] : rep.series) series[k] = v;
    j["series"] = series;
    j["verdict"] = {{"status", to_string(rep.verdict.status)},
                    {"assertion", rep.verdict.assertion_id},
                    {"detail", rep.verdict.detail}};
    j["runtime_s"] = rep.runtime_s;
    return j;
}

inline nlohmann::json to_json(const NormRecord& rec) {
    return {{"s", rec.s},
            {"p", rec.p},
            {"r", rec.r},
            {"homogeneity", rec.homogeneity == Homogeneity::homogeneous ? "homogeneous" : "inhomogeneous"},
            {"value", rec.value}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

inline void write_report(const std::filesystem::path& path, const ExperimentReport& rep) {
    write_text(path, to_json(rep).dump(2) + "\n");
}

/// One column per named series; ragged columns are padded with blanks.
inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.precision(17);
    std::size_t rows = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << columns[c].first << (c + 1 < columns.size() ? "," : "\n");
        rows = std::max(rows, columns[c].second.size());
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (r < columns[c].second.size()) out << columns[c].second[r];
            out << (c + 1 < columns.size() ? "," : "\n");
        }
    }
}

inline void write_snapshot_csv(const std::filesystem::path& path, const LagrangianSnapshot& snap) {
    write_csv(path, {{"label_x", snap.q.grid.points()},
                     {"q", snap.q.values},
                     {"qx", snap.qx.values},
                     {"u", snap.u_along.values},
                     {"ux", snap.ux_along.values}});
}

inline void write_trajectory_csv(const std::filesystem::path& path, const EulerianTrajectory& traj) {
    write_csv(path, {{"t", traj.times},
                     {"u_sup", traj.u_sup_series},
                     {"ux_sup", traj.ux_sup_series},
                     {"ux_l2", traj.h1_series},
                     {"criterion_partial", traj.criterion_partial}});
}

// Flat binary state dump: magic, half_width, n_points, then row-major doubles
// (one row per recorded output state, prefixed by its time).
constexpr std::uint64_t state_dump_magic = 0x48534C4142000001ull;  // "HSLAB" + version

inline void write_state_dump(const std::filesystem::path& path, const EulerianTrajectory& traj) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (traj.output_states.empty()) throw std::invalid_argument("state dump: no recorded states");
    const Grid& g = traj.output_states.front().grid;
    const std::uint64_t magic = state_dump_magic;
    const double L = g.half_width;
    const std::uint64_t n = static_cast<std::uint64_t>(g.n_points);
    const std::uint64_t rows = traj.output_states.size();
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&L), sizeof L);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    for (std::size_t r = 0; r < traj.output_states.size(); ++r) {
        const double t = traj.output_times[r];
        out.write(reinterpret_cast<const char*>(&t), sizeof t);
        out.write(reinterpret_cast<const char*>(traj.output_states[r].values.data()),
                  static_cast<std::streamsize>(sizeof(double) * traj.output_states[r].values.size()));
    }
}

struct StateDump {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

inline StateDump read_state_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::uint64_t magic = 0, n = 0, rows = 0;
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    if (magic != state_dump_magic) throw std::runtime_error("state dump: bad magic");
    in.read(reinterpret_cast<char*>(&L), sizeof L);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&rows), sizeof rows);
    StateDump dump;
    dump.grid = Grid::make(L, static_cast<int>(n));
    dump.times.resize(rows);
    dump.states.assign(rows, std::vector<double>(n));
    for (std::uint64_t r = 0; r < rows; ++r) {
        in.read(reinterpret_cast<char*>(&dump.times[r]), sizeof(double));
        in.read(reinterpret_cast<char*>(dump.states[r].data()),
                static_cast<std::streamsize>(sizeof(double) * n));
    }
    if (!in) throw std::runtime_error("state dump: truncated file");
    return dump;
}

}  // namespace hs::io

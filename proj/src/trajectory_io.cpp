#include "nlslab/trajectory_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlslab/error.hpp"

namespace nlslab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* format_tag = "nlslab-trajectory";
constexpr int format_version = 1;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return out;
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.bin", index);
  return buf;
}

json config_to_json(const EvolutionConfig& c) {
  return {{"dimension", c.dimension},
          {"mu", c.mu},
          {"dt", c.dt},
          {"snapshot_stride", c.snapshot_stride},
          {"energy_drift_alarm", c.energy_drift_alarm},
          {"blowup_gradient_factor", c.blowup_gradient_factor}};
}

EvolutionConfig config_from_json(const json& j) {
  EvolutionConfig c;
  c.dimension = j.at("dimension").get<int>();
  c.mu = j.at("mu").get<double>();
  c.dt = j.at("dt").get<double>();
  c.snapshot_stride = j.at("snapshot_stride").get<std::size_t>();
  c.energy_drift_alarm = j.at("energy_drift_alarm").get<double>();
  c.blowup_gradient_factor = j.at("blowup_gradient_factor").get<double>();
  return c;
}

RunStatus status_from_string(const std::string& s) {
  for (RunStatus r : {RunStatus::complete, RunStatus::blowup, RunStatus::energy_alarm})
    if (s == to_string(r)) return r;
  throw Error(ErrorCode::io, "unknown run status '" + s + "'");
}

}  // namespace

void write_snapshot(const fs::path& file, const RadialField& u) {
  std::vector<std::uint64_t> raw;
  raw.reserve(2 * u.size());
  for (const auto& v : u.values)
    for (double d : {v.real(), v.imag()}) raw.push_back(to_little(std::bit_cast<std::uint64_t>(d)));
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + file.string() + " for writing");
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!out) throw Error(ErrorCode::io, "write failed for " + file.string());
}

RadialField read_snapshot(const fs::path& file, GridPtr grid) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + file.string());
  const auto bytes = fs::file_size(file);
  if (bytes != grid->size() * 2 * sizeof(std::uint64_t))
    throw Error(ErrorCode::io, file.string() + " holds " + std::to_string(bytes) +
                                   " bytes, expected " +
                                   std::to_string(grid->size() * 16));
  std::vector<std::uint64_t> raw(2 * grid->size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw Error(ErrorCode::io, "read failed for " + file.string());
  std::vector<cplx> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = cplx(std::bit_cast<double>(to_little(raw[2 * i])),
                std::bit_cast<double>(to_little(raw[2 * i + 1])));
  return RadialField(std::move(grid), std::move(v));
}

void write_trajectory(const Trajectory& traj, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".bin")
      fs::remove(entry.path());
  }
  const RadialGrid& g = *traj.grid;
  json meta = {{"format", format_tag},
               {"version", format_version},
               {"grid",
                {{"dimension", g.dimension()},
                 {"node_count", g.size()},
                 {"r_max", g.r_max()}}},
               {"config", config_to_json(traj.config)},
               {"status", to_string(traj.status)},
               {"status_detail", traj.status_detail},
               {"initial_data", traj.initial_data},
               {"times", traj.times}};
  std::ofstream out(dir / "metadata.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write metadata in " + dir.string());
  out << meta.dump(2) << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i)
    write_snapshot(dir / snapshot_name(i), traj.snapshots[i]);
}

Trajectory read_trajectory(const fs::path& dir) {
  std::ifstream in(dir / "metadata.json");
  if (!in) throw Error(ErrorCode::io, "no metadata.json in " + dir.string());
  json meta;
  try {
    meta = json::parse(in);
    if (meta.at("format").get<std::string>() != format_tag ||
        meta.at("version").get<int>() != format_version)
      throw Error(ErrorCode::io, "unsupported trajectory format in " + dir.string());
    Trajectory traj;
    const json& g = meta.at("grid");
    traj.grid = make_grid(g.at("dimension").get<int>(),
                          g.at("node_count").get<std::size_t>(),
                          g.at("r_max").get<double>());
    traj.config = config_from_json(meta.at("config"));
    traj.status = status_from_string(meta.at("status").get<std::string>());
    traj.status_detail = meta.at("status_detail").get<std::string>();
    traj.initial_data = meta.at("initial_data").get<std::string>();
    traj.times = meta.at("times").get<std::vector<double>>();
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      traj.snapshots.push_back(read_snapshot(dir / snapshot_name(i), traj.grid));
    return traj;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io, "malformed metadata in " + dir.string() + ": " + e.what());
  }
}

}  // namespace nlslab

#ifndef CCALE_OUTPUT_HPP
#define CCALE_OUTPUT_HPP

// Snapshot and log artifacts: legacy ASCII VTK, CSV profiles, interface polygons and the
// per-cycle conservation log. A small VTK reader is included for round-trip checks.

#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccale/cases.hpp"
#include "ccale/error.hpp"
#include "ccale/mesh.hpp"
#include "ccale/state.hpp"

namespace ccale::io {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  return os;
}

/// Cell data: rho, pressure, energy, speed, alpha_<material> for each material, schlieren.
/// Point data: node velocity (zero z component).
inline void write_vtk(std::ostream& os, const Mesh& mesh, const HydroState& st,
                      std::span<const std::string> material_names, std::span<const double> schlieren,
                      std::span<const Vec2> node_velocity, const std::string& title = "ccale snapshot") {
  const std::size_t nn = mesh.num_nodes(), nc = mesh.num_cells();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (const auto& x : mesh.nodes) os << x.x << " " << x.y << " 0\n";
  std::size_t size = 0;
  for (const auto& pc : mesh.cells) size += pc.size() + 1;
  os << "CELLS " << nc << " " << size << "\n";
  for (const auto& pc : mesh.cells) {
    os << pc.size();
    for (int p : pc) os << " " << p;
    os << "\n";
  }
  os << "CELL_TYPES " << nc << "\n";
  for (const auto& pc : mesh.cells) os << (pc.size() == 3 ? 5 : pc.size() == 4 ? 9 : 7) << "\n";

  os << "CELL_DATA " << nc << "\n";
  const auto scalar = [&](const std::string& name, auto&& value) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < nc; ++c) os << value(static_cast<int>(c)) << "\n";
  };
  scalar("rho", [&](int c) { return st.cells[c].rho; });
  scalar("pressure", [&](int c) { return st.cells[c].pressure; });
  scalar("energy", [&](int c) { return st.cells[c].energy; });
  scalar("speed", [&](int c) { return norm(st.cells[c].velocity); });
  for (std::size_t k = 0; k < st.num_materials(); ++k) {
    const std::string name = k < material_names.size() ? material_names[k] : "mat" + std::to_string(k);
    scalar("alpha_" + name, [&](int c) { return st.mats(c)[k].alpha; });
  }
  scalar("schlieren", [&](int c) { return schlieren.empty() ? 1.0 : schlieren[c]; });

  os << "POINT_DATA " << nn << "\nVECTORS velocity double\n";
  for (std::size_t p = 0; p < nn; ++p) {
    const Vec2 u = node_velocity.empty() ? Vec2{} : node_velocity[p];
    os << u.x << " " << u.y << " 0\n";
  }
}

inline void write_vtk(const std::string& path, const Mesh& mesh, const HydroState& st,
                      std::span<const std::string> material_names, std::span<const double> schlieren,
                      std::span<const Vec2> node_velocity) {
  std::ofstream os = open_out(path);
  write_vtk(os, mesh, st, material_names, schlieren, node_velocity);
  if (!os) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

/// What the reader recovers from a snapshot.
struct VtkData {
  std::vector<Vec2> points;
  std::vector<std::vector<int>> cells;
  std::vector<std::string> cell_field_names;  // in file order
  std::map<std::string, std::vector<double>> cell_fields;
  std::map<std::string, std::vector<Vec2>> point_vectors;
};

inline VtkData read_vtk(std::istream& is) {
  const auto fail = [](const std::string& what) { return Error(ErrorKind::io, "vtk: " + what); };
  VtkData d;
  std::string line;
  for (int i = 0; i < 4; ++i)
    if (!std::getline(is, line)) throw fail("truncated header");
  std::string word;
  std::size_t ncells = 0;
  while (is >> word) {
    if (word == "POINTS") {
      std::size_t n;
      is >> n >> word;
      d.points.resize(n);
      double z;
      for (auto& p : d.points) is >> p.x >> p.y >> z;
    } else if (word == "CELLS") {
      std::size_t size;
      is >> ncells >> size;
      d.cells.resize(ncells);
      for (auto& c : d.cells) {
        std::size_t k;
        is >> k;
        c.resize(k);
        for (auto& p : c) is >> p;
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n;
      is >> n;
      for (std::size_t i = 0; i < n; ++i) is >> word;
    } else if (word == "CELL_DATA" || word == "POINT_DATA") {
      std::size_t n;
      is >> n;
    } else if (word == "SCALARS") {
      std::string name, type;
      int comps = 1;
      is >> name >> type >> comps >> word >> word;  // LOOKUP_TABLE default
      auto& v = d.cell_fields[name];
      d.cell_field_names.push_back(name);
      v.resize(ncells);
      for (auto& x : v) is >> x;
    } else if (word == "VECTORS") {
      std::string name, type;
      is >> name >> type;
      auto& v = d.point_vectors[name];
      v.resize(d.points.size());
      double z;
      for (auto& x : v) is >> x.x >> x.y >> z;
    } else {
      throw fail("unexpected token '" + word + "'");
    }
    if (!is) throw fail("truncated section " + word);
  }
  return d;
}

inline VtkData read_vtk(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return read_vtk(is);
}

inline void write_profile_csv(std::ostream& os, std::span<const cases::ProfilePoint> pts) {
  os << "r,rho,pressure,radial_velocity,volume\n";
  for (const auto& p : pts) os << p.r << "," << p.rho << "," << p.pressure << "," << p.radial_velocity << "," << p.volume << "\n";
}

/// One row per polygon vertex: cell, material, vertex index, x, y.
inline void write_interfaces_csv(std::ostream& os, std::span<const std::vector<Polygon>> pieces) {
  os << "cell,material,vertex,x,y\n";
  for (std::size_t c = 0; c < pieces.size(); ++c)
    for (std::size_t k = 0; k < pieces[c].size(); ++k)
      for (std::size_t i = 0; i < pieces[c][k].size(); ++i)
        os << c << "," << k << "," << i << "," << pieces[c][k][i].x << "," << pieces[c][k][i].y << "\n";
}

/// Conservation log row, written once per cycle.
struct LogRow {
  long cycle = 0;
  double t = 0.0, dt = 0.0;
  double mass = 0.0, energy = 0.0, boundary_work = 0.0;
  double mass_drift = 0.0, energy_drift = 0.0;
  double remap_mass = 0.0, remap_energy = 0.0, remap_momentum = 0.0;
  double coverage = 0.0;
  std::size_t mixed = 0, pcsf = 0, mcib = 0;
};

inline const char* log_header() {
  return "cycle,t,dt,mass,energy,boundary_work,mass_drift,energy_drift,remap_mass,remap_energy,remap_momentum,"
         "coverage,mixed_cells,pcsf_cells,mcib_cells\n";
}

inline void write_log_row(std::ostream& os, const LogRow& r) {
  os << r.cycle << "," << r.t << "," << r.dt << "," << r.mass << "," << r.energy << "," << r.boundary_work << ","
     << r.mass_drift << "," << r.energy_drift << "," << r.remap_mass << "," << r.remap_energy << ","
     << r.remap_momentum << "," << r.coverage << "," << r.mixed << "," << r.pcsf << "," << r.mcib << "\n";
}

}  // namespace ccale::io

#endif  // CCALE_OUTPUT_HPP

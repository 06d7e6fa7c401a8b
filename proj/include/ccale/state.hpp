#ifndef CCALE_STATE_HPP
#define CCALE_STATE_HPP

#include <span>
#include <utility>
#include <vector>

#include "ccale/eos.hpp"
#include "ccale/mesh.hpp"
#include "ccale/vec2.hpp"

namespace ccale {

/// Cell-averaged hydrodynamic state.
struct CellState {
  double rho = 0.0;
  Vec2 velocity;
  double energy = 0.0;    // specific total energy
  double pressure = 0.0;
  double sound = 0.0;
  double mass = 0.0;      // constant during the Lagrangian phase
  double volume = 0.0;    // R-weighted
  double area = 0.0;      // planar

  double rbar() const { return volume / area; }
  double internal_energy() const { return energy - 0.5 * norm2(velocity); }
  double impedance() const { return rho * sound; }
};

/// Cells plus per-material partial states stored densely (cell-major).
struct HydroState {
  std::vector<CellState> cells;
  std::vector<GasEos> eos;
  std::vector<MaterialState> materials;

  std::size_t num_cells() const { return cells.size(); }
  std::size_t num_materials() const { return eos.size(); }

  std::span<MaterialState> mats(int c) {
    return {materials.data() + static_cast<std::size_t>(c) * eos.size(), eos.size()};
  }
  std::span<const MaterialState> mats(int c) const {
    return {materials.data() + static_cast<std::size_t>(c) * eos.size(), eos.size()};
  }

  int present_count(int c) const {
    int n = 0;
    for (const auto& m : mats(c)) n += m.present() ? 1 : 0;
    return n;
  }
  bool is_mixed(int c) const { return present_count(c) > 1; }
  /// Index of the material holding the largest volume fraction.
  int dominant_material(int c) const {
    int best = 0;
    double a = -1.0;
    const auto ms = mats(c);
    for (std::size_t k = 0; k < ms.size(); ++k)
      if (ms[k].alpha > a) {
        a = ms[k].alpha;
        best = static_cast<int>(k);
      }
    return best;
  }

  double total_mass() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.mass;
    return s;
  }
  double total_energy() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.mass * c.energy;
    return s;
  }
  /// Planar momentum sum of rho A U, the quantity the velocity update conserves.
  Vec2 planar_momentum() const {
    Vec2 s;
    for (const auto& c : cells) s += c.velocity * (c.rho * c.area);
    return s;
  }
};

/// Recomputes V_c and A_c from node positions.
inline void refresh_geometry(const Mesh& mesh, HydroState& st) {
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellMeasures cm = cell_measures(mesh, c);
    st.cells[c].volume = cm.volume;
    st.cells[c].area = cm.area;
  }
}

/// Rebuilds the cell thermodynamic state from the materials. Expects material masses, volume
/// fractions and internal energies; sets cell mass, density, pressure, sound speed and total energy
/// with the current cell velocity.
inline void close_cell_from_materials(HydroState& st, int c) {
  CellState& cs = st.cells[c];
  auto ms = st.mats(c);
  const MixtureClosure mix = close_materials(ms, st.eos, cs.volume, c);
  double m = 0.0;
  double ie = 0.0;
  for (const auto& mk : ms) {
    if (!mk.present()) continue;
    m += mk.mass;
    ie += mk.mass * mk.eps;
  }
  cs.mass = m;
  cs.rho = m / cs.volume;
  cs.pressure = mix.pressure;
  cs.sound = mix.sound;
  cs.energy = ie / m + 0.5 * norm2(cs.velocity);
}

/// Allocates a state for the mesh with all materials absent.
inline HydroState make_state(const Mesh& mesh, std::vector<GasEos> eos) {
  HydroState st;
  st.eos = std::move(eos);
  st.cells.assign(mesh.num_cells(), {});
  st.materials.assign(mesh.num_cells() * st.eos.size(), {});
  refresh_geometry(mesh, st);
  return st;
}

/// Initial data of one material inside a cell.
struct MaterialInit {
  double alpha = 0.0;
  double rho = 0.0;
  double pressure = 0.0;
  Vec2 centroid;  // used only for mixed cells
};

/// Sets cell c from per-material initial data (one entry per material) and a cell velocity.
inline void set_cell(HydroState& st, const Mesh& mesh, int c, std::span<const MaterialInit> init, Vec2 velocity) {
  CellState& cs = st.cells[c];
  const CellMeasures cm = cell_measures(mesh, c);
  cs.volume = cm.volume;
  cs.area = cm.area;
  cs.velocity = velocity;
  auto ms = st.mats(c);
  int present = 0;
  for (std::size_t k = 0; k < ms.size(); ++k) present += init[k].alpha > 0.0 ? 1 : 0;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    MaterialState& m = ms[k];
    m = {};
    if (!(init[k].alpha > 0.0)) continue;
    m.alpha = init[k].alpha;
    m.mass = init[k].rho * init[k].alpha * cm.volume;
    m.eps = internal_energy(st.eos[k], init[k].rho, init[k].pressure);
    m.centroid = present > 1 ? init[k].centroid : cm.centroid;
  }
  close_cell_from_materials(st, c);
}

/// Convenience for a single-material cell.
inline void set_pure_cell(HydroState& st, const Mesh& mesh, int c, int material, double rho, double p, Vec2 velocity) {
  std::vector<MaterialInit> init(st.num_materials());
  init[material] = {1.0, rho, p, {}};
  set_cell(st, mesh, c, init, velocity);
}

}  // namespace ccale

#endif  // CCALE_STATE_HPP

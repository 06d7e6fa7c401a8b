#ifndef CCALE_EOS_HPP
#define CCALE_EOS_HPP

#include <algorithm>
#include <cmath>
#include <span>

#include "ccale/error.hpp"
#include "ccale/vec2.hpp"

namespace ccale {

/// Perfect gas. The molar mass is carried as metadata only.
struct GasEos {
  double gamma = 1.4;
  double molar_mass = 0.0;
};

inline double pressure(const GasEos& eos, double rho, double eps) {
  if (!(rho > 0.0)) throw Error(ErrorKind::positivity, "non-positive density in EOS");
  return rho * eps * (eos.gamma - 1.0);
}

inline double internal_energy(const GasEos& eos, double rho, double p) {
  if (!(rho > 0.0)) throw Error(ErrorKind::positivity, "non-positive density in EOS");
  return p / (rho * (eos.gamma - 1.0));
}

struct Acoustics {
  double sound = 0.0;
  double impedance = 0.0;
};

inline Acoustics sound_speed(const GasEos& eos, double rho, double p) {
  if (!(rho > 0.0)) throw Error(ErrorKind::positivity, "non-positive density in EOS");
  if (p < 0.0) throw Error(ErrorKind::positivity, "negative pressure");
  const double a = std::sqrt(eos.gamma * p / rho);
  return {a, rho * a};
}

/// Per-material partial state inside one cell.
struct MaterialState {
  double alpha = 0.0;     // volume fraction
  double mass = 0.0;
  double rho = 0.0;       // partial density m / (alpha V)
  double eps = 0.0;       // specific internal energy
  double pressure = 0.0;
  double sound = 0.0;
  Vec2 centroid;          // R-weighted material centroid

  bool present() const { return alpha > 0.0 && mass > 0.0; }
};

struct MixtureClosure {
  double rho = 0.0;
  double pressure = 0.0;
  double sound = 0.0;
};

/// Recomputes partial densities, pressures and sound speeds for the given cell volume and
/// returns the mixture: volume-fraction averaged pressure and density, max sound speed.
inline MixtureClosure close_materials(std::span<MaterialState> mats, std::span<const GasEos> eos, double volume,
                                      long cell = -1) {
  MixtureClosure mix;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    auto& m = mats[k];
    if (!m.present()) {
      m.rho = 0.0;
      m.pressure = 0.0;
      m.sound = 0.0;
      continue;
    }
    m.rho = m.mass / (m.alpha * volume);
    if (!(m.rho > 0.0)) throw Error(ErrorKind::positivity, "non-positive partial density", cell);
    if (m.eps < 0.0) throw Error(ErrorKind::positivity, "negative partial internal energy", cell);
    m.pressure = pressure(eos[k], m.rho, m.eps);
    m.sound = sound_speed(eos[k], m.rho, m.pressure).sound;
    mix.rho += m.alpha * m.rho;
    mix.pressure += m.alpha * m.pressure;
    mix.sound = std::max(mix.sound, m.sound);
  }
  return mix;
}

/// Equal-strain update after a Lagrangian step. Volume fractions are untouched; the cell
/// internal-energy change is shared in proportion to alpha_k P_k (mass if all pressures vanish).
inline MixtureClosure equal_strain_update(std::span<MaterialState> mats, std::span<const GasEos> eos,
                                          double new_volume, double cell_internal_energy_change, long cell = -1) {
  double wsum = 0.0;
  for (const auto& m : mats)
    if (m.present()) wsum += m.alpha * m.pressure;
  const bool by_mass = !(wsum > 0.0);
  if (by_mass) {
    wsum = 0.0;
    for (const auto& m : mats)
      if (m.present()) wsum += m.mass;
  }
  if (wsum > 0.0) {
    for (auto& m : mats) {
      if (!m.present()) continue;
      const double w = by_mass ? m.mass : m.alpha * m.pressure;
      m.eps += cell_internal_energy_change * (w / wsum) / m.mass;
    }
  }
  return close_materials(mats, eos, new_volume, cell);
}

}  // namespace ccale

#endif  // CCALE_EOS_HPP

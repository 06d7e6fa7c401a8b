#ifndef CCALE_MESH_IO_HPP
#define CCALE_MESH_IO_HPP

// Plain-text mesh dump and its reader. Connectivity, node tags and boundary tags survive the
// round trip; positions are written with full precision.

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ccale/error.hpp"
#include "ccale/mesh.hpp"

namespace ccale::io {

inline const char* tag_name(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::none: return "none";
    case BoundaryTag::wall: return "wall";
    case BoundaryTag::symmetry: return "symmetry";
    case BoundaryTag::piston: return "piston";
    case BoundaryTag::pressure: return "pressure";
  }
  return "none";
}

inline BoundaryTag tag_from_name(const std::string& s) {
  for (BoundaryTag t : {BoundaryTag::none, BoundaryTag::wall, BoundaryTag::symmetry, BoundaryTag::piston,
                        BoundaryTag::pressure})
    if (s == tag_name(t)) return t;
  throw Error(ErrorKind::io, "unknown boundary tag '" + s + "'");
}

/// Format:
///   ccale-mesh 1
///   geometry planar|axisymmetric
///   nodes N
///   x y region interfacial        (N lines; region 0 cartesian, 1 polar)
///   cells M
///   n p_0 .. p_{n-1} tag_0 .. tag_{n-1}   (M lines)
inline void write_mesh(std::ostream& os, const Mesh& m) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "ccale-mesh 1\n";
  os << "geometry " << (m.geometry == Geometry::axisymmetric ? "axisymmetric" : "planar") << "\n";
  os << "nodes " << m.num_nodes() << "\n";
  for (std::size_t p = 0; p < m.num_nodes(); ++p)
    os << m.nodes[p].x << " " << m.nodes[p].y << " " << (m.region[p] == RegionTag::polar ? 1 : 0) << " "
       << static_cast<int>(m.interfacial[p]) << "\n";
  os << "cells " << m.num_cells() << "\n";
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    os << m.cells[c].size();
    for (int p : m.cells[c]) os << " " << p;
    for (BoundaryTag t : m.face_tag[c]) os << " " << tag_name(t);
    os << "\n";
  }
}

inline Mesh read_mesh(std::istream& is) {
  const auto fail = [](const std::string& what) { return Error(ErrorKind::io, "mesh file: " + what); };
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "ccale-mesh" || version != 1) throw fail("bad header");
  Mesh m;
  std::string geom;
  if (!(is >> word >> geom) || word != "geometry") throw fail("missing geometry");
  if (geom == "axisymmetric") m.geometry = Geometry::axisymmetric;
  else if (geom == "planar") m.geometry = Geometry::planar;
  else throw fail("unknown geometry '" + geom + "'");
  std::size_t nn = 0;
  if (!(is >> word >> nn) || word != "nodes") throw fail("missing node count");
  m.nodes.resize(nn);
  m.region.resize(nn);
  m.interfacial.resize(nn);
  for (std::size_t p = 0; p < nn; ++p) {
    int region = 0, inter = 0;
    if (!(is >> m.nodes[p].x >> m.nodes[p].y >> region >> inter)) throw fail("truncated node list");
    m.region[p] = region ? RegionTag::polar : RegionTag::cartesian;
    m.interfacial[p] = inter ? 1 : 0;
  }
  std::size_t nc = 0;
  if (!(is >> word >> nc) || word != "cells") throw fail("missing cell count");
  m.cells.resize(nc);
  m.face_tag.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t n = 0;
    if (!(is >> n) || n < 3) throw fail("bad cell size");
    m.cells[c].resize(n);
    for (auto& p : m.cells[c])
      if (!(is >> p) || p < 0 || static_cast<std::size_t>(p) >= nn) throw fail("bad node index");
    m.face_tag[c].resize(n);
    for (auto& t : m.face_tag[c]) {
      if (!(is >> word)) throw fail("truncated tag list");
      t = tag_from_name(word);
    }
  }
  m.build_topology();
  return m;
}

inline void write_mesh(const std::string& path, const Mesh& m) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  write_mesh(os, m);
  if (!os) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

inline Mesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return read_mesh(is);
}

}  // namespace ccale::io

#endif  // CCALE_MESH_IO_HPP

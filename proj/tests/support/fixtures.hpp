#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "meshtok/mesh.hpp"
#include "meshtok/synthetic.hpp"

namespace fixtures {

/// Canonical n-face zigzag strip: face i joins vertices i, i+1, i+2.
inline meshtok::QuantizedMesh strip(std::size_t n) {
  meshtok::SyntheticParams p;
  p.length = n;
  return meshtok::quantize(meshtok::generate_synthetic(meshtok::SyntheticKind::Strip, p, 1));
}

inline meshtok::QuantizedMesh icosphere(int subdivisions, std::uint64_t seed = 1) {
  meshtok::SyntheticParams p;
  p.subdivisions = subdivisions;
  return meshtok::quantize(meshtok::generate_synthetic(meshtok::SyntheticKind::Icosphere, p, seed));
}

/// Random triangle soup, possibly with shared vertices and degenerate faces.
inline meshtok::RawMesh random_soup(std::mt19937_64& rng, std::size_t vertices, std::size_t faces,
                                    double extent = 10.0) {
  std::uniform_real_distribution<double> coord(-extent, extent);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(vertices - 1));
  meshtok::RawMesh m;
  for (std::size_t i = 0; i < vertices; ++i) m.vertices.push_back({coord(rng), coord(rng), coord(rng)});
  while (m.faces.size() < faces) {
    const meshtok::Face f{pick(rng), pick(rng), pick(rng)};
    if (f[0] != f[1] && f[1] != f[2] && f[0] != f[2]) m.faces.push_back(f);
  }
  return m;
}

/// Mixed synthetic shapes, quantized, all with at least one face.
inline std::vector<meshtok::QuantizedMesh> corpus(std::size_t count, std::uint64_t seed,
                                                  std::size_t max_faces = 600) {
  meshtok::CorpusOptions o;
  o.max_faces = max_faces;
  std::vector<meshtok::QuantizedMesh> out;
  for (const auto& m : meshtok::generate_corpus(count, seed, o)) {
    auto q = meshtok::quantize(m.mesh);
    if (!q.faces.empty()) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace fixtures

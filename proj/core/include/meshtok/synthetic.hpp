#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshtok/mesh.hpp"

namespace meshtok {

enum class SyntheticKind { Strip, Grid, Icosphere, Torus, Noisy };

std::string_view to_string(SyntheticKind kind) noexcept;
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

/// Shape parameters. Each kind reads only its own fields.
struct SyntheticParams {
  std::size_t length = 8;                  ///< strip: face count, >= 1
  std::size_t rows = 4;                    ///< grid: cells along y, >= 1
  std::size_t cols = 4;                    ///< grid: cells along x, >= 1
  int terraces = 0;                        ///< grid: height levels, 0 = smooth
  int subdivisions = 1;                    ///< icosphere: [0, 4]
  std::size_t major_segments = 16;         ///< torus: >= 3
  std::size_t minor_segments = 8;          ///< torus: >= 3
  SyntheticKind base = SyntheticKind::Icosphere;  ///< noisy: shape before noise
  double jitter = 0.01;                    ///< noisy: max offset per axis, bbox-diagonal units
  double drop_fraction = 0.05;             ///< noisy: share of faces removed, [0, 1)
};

/// Consistently wound triangle mesh. Icospheres and tori are closed; strips
/// and grids are open sheets; noisy meshes are a jittered base with random
/// faces removed. The seed picks per-shape variation (strip width, grid
/// heights, ellipsoid axes, tube radius, noise) and axis permutations that
/// keep grid lines axis-aligned.
///
/// Face counts: strip = length, grid = 2 rows cols, icosphere = 20 4^s,
/// torus = 2 major minor.
///
/// Throws Error for parameters outside the ranges above.
RawMesh generate_synthetic(SyntheticKind kind, const SyntheticParams& params, std::uint64_t seed);

struct NamedMesh {
  std::string name;  ///< file stem
  SyntheticKind kind = SyntheticKind::Strip;
  RawMesh mesh;
};

struct CorpusOptions {
  std::size_t max_faces = 5000;
  std::size_t max_strip_length = 120;  ///< longer zigzags collapse at 7 bits
};

/// `count` meshes mixing all kinds with sizes spread log-uniformly up to
/// `max_faces`. Deterministic in (count, seed, options).
std::vector<NamedMesh> generate_corpus(std::size_t count, std::uint64_t seed,
                                       const CorpusOptions& options = {});

/// Writes `<dir>/<name>.obj` for every mesh.
void write_corpus(const std::filesystem::path& dir, const std::vector<NamedMesh>& meshes);

}  // namespace meshtok

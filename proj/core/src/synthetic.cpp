#include "meshtok/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <utility>

#include "detail/rng.hpp"
#include "meshtok/error.hpp"
#include "meshtok/obj_io.hpp"

namespace meshtok {

namespace {

using detail::uniform;
using detail::uniform_int;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct stream for noise so a noisy mesh's base matches the clean shape
// generated from the same seed.
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ull;

// Even permutations first.
constexpr std::array<std::array<int, 3>, 6> kAxisOrders{{
    {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};

void permute_axes(RawMesh& mesh, std::mt19937_64& rng) {
  const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, 5));
  const auto& order = kAxisOrders[pick];
  const bool odd = pick >= 3;
  for (auto& v : mesh.vertices) v = {v[order[0]], v[order[1]], v[order[2]]};
  // An odd permutation mirrors the shape; swap two corners to keep the
  // outward orientation.
  if (odd) {
    for (auto& f : mesh.faces) std::swap(f[1], f[2]);
  }
}

RawMesh make_strip(const SyntheticParams& p, std::mt19937_64& rng) {
  if (p.length < 1) throw Error("strip length must be at least 1");
  const double width = uniform(rng, 0.5, 2.0);
  RawMesh m;
  const std::size_t n = p.length;
  for (std::size_t i = 0; i < n + 2; ++i) {
    m.vertices.push_back({width * static_cast<double>(i % 2), 0.0, static_cast<double>(i)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::uint32_t>(i);
    if (i % 2 == 0) {
      m.faces.push_back({a, a + 1, a + 2});
    } else {
      m.faces.push_back({a, a + 2, a + 1});
    }
  }
  return m;
}

RawMesh make_grid(const SyntheticParams& p, std::mt19937_64& rng) {
  if (p.rows < 1 || p.cols < 1) throw Error("grid needs at least one row and column");
  if (p.terraces < 0) throw Error("grid terrace count must be non-negative");
  const double extent = static_cast<double>(std::max(p.rows, p.cols));
  const double amplitude = uniform(rng, 0.0, 0.35) * extent;
  const double fx = uniform(rng, 0.5, 2.5) * kTwoPi / extent;
  const double fy = uniform(rng, 0.5, 2.5) * kTwoPi / extent;
  const double px = uniform(rng, 0.0, kTwoPi);
  const double py = uniform(rng, 0.0, kTwoPi);

  RawMesh m;
  const std::size_t w = p.cols + 1;
  for (std::size_t j = 0; j <= p.rows; ++j) {
    for (std::size_t i = 0; i <= p.cols; ++i) {
      const double x = static_cast<double>(i);
      const double y = static_cast<double>(j);
      double h = std::sin(fx * x + px) * std::cos(fy * y + py);
      if (p.terraces > 0) h = std::round(h * p.terraces) / p.terraces;
      m.vertices.push_back({x, y, amplitude * h});
    }
  }
  for (std::size_t j = 0; j < p.rows; ++j) {
    for (std::size_t i = 0; i < p.cols; ++i) {
      const auto a = static_cast<std::uint32_t>(j * w + i);
      const auto b = a + 1;
      const auto c = static_cast<std::uint32_t>(a + w + 1);
      const auto d = static_cast<std::uint32_t>(a + w);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  permute_axes(m, rng);
  return m;
}

RawMesh make_icosphere(const SyntheticParams& p, std::mt19937_64& rng) {
  if (p.subdivisions < 0 || p.subdivisions > 4) {
    throw Error("icosphere subdivisions must lie in [0, 4]");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  const auto normalize = [](Vec3 v) {
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return Vec3{v[0] / len, v[1] / len, v[2] / len};
  };
  for (auto& v : m.vertices) v = normalize(v);

  for (int s = 0; s < p.subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto [it, inserted] = mid.try_emplace({key.first, key.second}, 0);
      if (inserted) {
        const auto& va = m.vertices[a];
        const auto& vb = m.vertices[b];
        it->second = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(normalize({va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]}));
      }
      return it->second;
    };
    std::vector<Face> faces;
    faces.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const auto ab = midpoint(f[0], f[1]);
      const auto bc = midpoint(f[1], f[2]);
      const auto ca = midpoint(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    m.faces = std::move(faces);
  }

  const Vec3 axes{uniform(rng, 0.6, 1.0), uniform(rng, 0.6, 1.0), uniform(rng, 0.6, 1.0)};
  for (auto& v : m.vertices) {
    for (int a = 0; a < 3; ++a) v[a] *= axes[a];
  }
  return m;
}

RawMesh make_torus(const SyntheticParams& p, std::mt19937_64& rng) {
  if (p.major_segments < 3 || p.minor_segments < 3) {
    throw Error("torus needs at least 3 segments in each direction");
  }
  const double r = uniform(rng, 0.2, 0.5);
  const double phase = uniform(rng, 0.0, kTwoPi);
  const std::size_t nu = p.major_segments;
  const std::size_t nv = p.minor_segments;
  RawMesh m;
  for (std::size_t i = 0; i < nu; ++i) {
    const double u = kTwoPi * static_cast<double>(i) / static_cast<double>(nu);
    for (std::size_t j = 0; j < nv; ++j) {
      const double v = kTwoPi * static_cast<double>(j) / static_cast<double>(nv) + phase;
      const double ring = 1.0 + r * std::cos(v);
      m.vertices.push_back({ring * std::cos(u), ring * std::sin(u), r * std::sin(v)});
    }
  }
  const auto id = [&](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>((i % nu) * nv + (j % nv));
  };
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      const auto a = id(i, j);
      const auto b = id(i + 1, j);
      const auto c = id(i + 1, j + 1);
      const auto d = id(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  permute_axes(m, rng);
  return m;
}

RawMesh make_clean(SyntheticKind kind, const SyntheticParams& p, std::mt19937_64& rng) {
  switch (kind) {
    case SyntheticKind::Strip: return make_strip(p, rng);
    case SyntheticKind::Grid: return make_grid(p, rng);
    case SyntheticKind::Icosphere: return make_icosphere(p, rng);
    case SyntheticKind::Torus: return make_torus(p, rng);
    case SyntheticKind::Noisy: break;
  }
  throw Error("noisy meshes need a clean base shape");
}

RawMesh make_noisy(const SyntheticParams& p, std::uint64_t seed) {
  if (!(p.jitter >= 0.0) || !std::isfinite(p.jitter)) throw Error("jitter must be non-negative");
  if (!(p.drop_fraction >= 0.0 && p.drop_fraction < 1.0)) {
    throw Error("drop fraction must lie in [0, 1)");
  }
  std::mt19937_64 base_rng(seed);
  RawMesh m = make_clean(p.base, p, base_rng);

  Vec3 lo = m.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : m.vertices) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  const double diag = std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                (hi[2] - lo[2]) * (hi[2] - lo[2]));
  const double amount = p.jitter * diag;

  std::mt19937_64 rng(seed ^ kNoiseStream);
  for (auto& v : m.vertices) {
    for (int a = 0; a < 3; ++a) v[a] += uniform(rng, -amount, amount);
  }
  std::vector<Face> kept;
  kept.reserve(m.faces.size());
  for (const auto& f : m.faces) {
    if (detail::unit_double(rng) >= p.drop_fraction) kept.push_back(f);
  }
  if (kept.empty()) kept.push_back(m.faces.front());
  m.faces = std::move(kept);
  return m;
}

std::size_t log_uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  const double x = std::exp(uniform(rng, std::log(static_cast<double>(lo)),
                                    std::log(static_cast<double>(hi) + 1.0)));
  return std::clamp(static_cast<std::size_t>(x), lo, hi);
}

constexpr std::size_t kMaxGridCells = 127;  // one lattice step per cell at 7 bits

void size_grid(SyntheticParams& p, std::size_t faces, std::mt19937_64& rng) {
  const double cells = std::max(1.0, static_cast<double>(faces) / 2.0);
  const double aspect = uniform(rng, 0.5, 2.0);
  p.cols = std::clamp<std::size_t>(static_cast<std::size_t>(std::round(std::sqrt(cells * aspect))), 1,
                                   kMaxGridCells);
  p.rows = std::clamp<std::size_t>(static_cast<std::size_t>(cells / static_cast<double>(p.cols)), 1,
                                   kMaxGridCells);
  p.terraces = detail::unit_double(rng) < 0.5 ? static_cast<int>(uniform_int(rng, 2, 8)) : 0;
}

void size_torus(SyntheticParams& p, std::size_t faces, std::mt19937_64& rng) {
  const double quads = std::max(9.0, static_cast<double>(faces) / 2.0);
  const double ratio = uniform(rng, 2.0, 4.0);
  p.minor_segments = std::max<std::size_t>(3, static_cast<std::size_t>(std::sqrt(quads / ratio)));
  p.major_segments =
      std::max<std::size_t>(3, static_cast<std::size_t>(quads / static_cast<double>(p.minor_segments)));
}

int max_subdivisions(std::size_t max_faces) {
  int s = 0;
  while (s < 4 && 20u * (std::size_t{1} << (2 * (s + 1))) <= max_faces) ++s;
  return s;
}

}  // namespace

std::string_view to_string(SyntheticKind kind) noexcept {
  switch (kind) {
    case SyntheticKind::Strip: return "strip";
    case SyntheticKind::Grid: return "grid";
    case SyntheticKind::Icosphere: return "icosphere";
    case SyntheticKind::Torus: return "torus";
    case SyntheticKind::Noisy: return "noisy";
  }
  return "?";
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto kind : {SyntheticKind::Strip, SyntheticKind::Grid, SyntheticKind::Icosphere,
                    SyntheticKind::Torus, SyntheticKind::Noisy}) {
    if (lower == to_string(kind)) return kind;
  }
  return std::nullopt;
}

RawMesh generate_synthetic(SyntheticKind kind, const SyntheticParams& params, std::uint64_t seed) {
  if (kind == SyntheticKind::Noisy) return make_noisy(params, seed);
  std::mt19937_64 rng(seed);
  return make_clean(kind, params, rng);
}

std::vector<NamedMesh> generate_corpus(std::size_t count, std::uint64_t seed,
                                       const CorpusOptions& options) {
  if (options.max_faces < 20) throw Error("corpus face cap must be at least 20");
  std::mt19937_64 rng(seed);
  std::vector<NamedMesh> out;
  out.reserve(count);
  const int max_sub = max_subdivisions(options.max_faces);
  const std::size_t max_strip = std::clamp<std::size_t>(options.max_strip_length, 1, options.max_faces);

  for (std::size_t i = 0; i < count; ++i) {
    const double pick = detail::unit_double(rng);
    const std::uint64_t mesh_seed = rng();
    SyntheticKind kind;
    if (pick < 0.10) {
      kind = SyntheticKind::Strip;
    } else if (pick < 0.45) {
      kind = SyntheticKind::Grid;
    } else if (pick < 0.60) {
      kind = SyntheticKind::Icosphere;
    } else if (pick < 0.80) {
      kind = SyntheticKind::Torus;
    } else {
      kind = SyntheticKind::Noisy;
    }

    SyntheticParams p;
    SyntheticKind shape = kind;
    if (kind == SyntheticKind::Noisy) {
      const auto b = uniform_int(rng, 0, 2);
      shape = b == 0 ? SyntheticKind::Grid : b == 1 ? SyntheticKind::Icosphere : SyntheticKind::Torus;
      p.base = shape;
      p.jitter = uniform(rng, 0.002, 0.02);
      p.drop_fraction = uniform(rng, 0.0, 0.1);
    }
    switch (shape) {
      case SyntheticKind::Strip: p.length = log_uniform(rng, 1, max_strip); break;
      case SyntheticKind::Grid: size_grid(p, log_uniform(rng, 2, options.max_faces), rng); break;
      case SyntheticKind::Icosphere:
        p.subdivisions = static_cast<int>(uniform_int(rng, 0, max_sub));
        break;
      case SyntheticKind::Torus: size_torus(p, log_uniform(rng, 18, options.max_faces), rng); break;
      case SyntheticKind::Noisy: break;
    }

    char name[64];
    std::snprintf(name, sizeof name, "%05zu_%s", i, std::string(to_string(kind)).c_str());
    out.push_back({name, kind, generate_synthetic(kind, p, mesh_seed)});
  }
  return out;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<NamedMesh>& meshes) {
  std::filesystem::create_directories(dir);
  for (const auto& m : meshes) write_obj(dir / (m.name + ".obj"), m.mesh);
}

}  // namespace meshtok

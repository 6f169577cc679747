#pragma once

// Schwarz triangles and the tiles obtained by applying even words in the
// three mirror reflections.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsm/inverse_map.hpp"
#include "hsm/mobius.hpp"
#include "hsm/polyhedral.hpp"

namespace hsm {

class BaseTriangle {
 public:
  enum class Kind { Polyhedral, Fuchsian };

  static BaseTriangle for_map(const InverseSchwarzMap& inv) {
    if (inv.is_polyhedral()) return polyhedral(inv.polyhedral_data().tag);
    if (inv.is_lambda()) return fuchsian();
    throw std::domain_error("BaseTriangle: no Schwarz triangle for " + inv.name());
  }

  /// Sector 0 < arg z < alpha inside the R3 circle.
  static BaseTriangle polyhedral(const PolyhedralTag& tag) {
    BaseTriangle b;
    b.kind_ = Kind::Polyhedral;
    const ReflectionTriple t = reflection_triple(tag);
    b.mirrors_ = t.R;
    b.alpha_ = hsm::sector_angle(tag);
    b.center_ = t.R[2].m.a / t.R[2].m.c;
    b.radius2_ = (t.R[2].m.b / t.R[2].m.c).real() + std::norm(b.center_);
    b.vertices_ = {Complex{0.0}, Complex{ray_to_circle(t.R[2], 0.0)},
                   std::polar(ray_to_circle(t.R[2], b.alpha_), b.alpha_)};
    return b;
  }

  /// Ideal triangle 0 < Re z < 1, |z - 1/2| > 1/2 with vertices infinity, 0, 1.
  static BaseTriangle fuchsian() {
    BaseTriangle b;
    b.kind_ = Kind::Fuchsian;
    b.mirrors_ = {MobiusMap::antiholomorphic({-1.0, 0.0, 0.0, 1.0}), MobiusMap::antiholomorphic({-1.0, 2.0, 0.0, 1.0}),
                  MobiusMap::circle_reflection(0.5, 0.5)};
    b.vertices_ = {Complex{std::numeric_limits<double>::infinity()}, Complex{0.0}, Complex{1.0}};
    return b;
  }

  Kind kind() const { return kind_; }
  const std::array<MobiusMap, 3>& mirrors() const { return mirrors_; }
  /// Polyhedral: 0, the real-axis corner, the corner on the R2 mirror. Fuchsian: infinity, 0, 1.
  const std::array<Complex, 3>& vertices() const { return vertices_; }
  double sector_angle() const { return alpha_; }

  bool contains(Complex z, double eps = 0.0) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (kind_ == Kind::Polyhedral) {
      if (std::abs(z) == 0.0) return false;
      const double a = std::arg(z);
      return a > eps && a < alpha_ - eps && std::norm(z - center_) < radius2_ * (1.0 - eps);
    }
    return z.imag() > eps && z.real() > eps && z.real() < 1.0 - eps && std::abs(z - 0.5) > 0.5 + eps;
  }

  /// Structured fan parametrization (u, v) in [0,1]^2, u = 0 at the apex.
  /// Polyhedral apex is z = 0; Fuchsian apex is the cusp at infinity, with
  /// the fan laid out along straight Klein-model chords.
  Complex fan_point(double u, double v) const {
    if (kind_ == Kind::Polyhedral) {
      const double th = v * alpha_;
      return u * std::polar(ray_to_circle(mirrors_[2], th), th);
    }
    const Complex k = klein_point(u, v);
    return klein_to_upper_half_plane(k);
  }

  /// Fuchsian fan in the Klein disk: apex 1 (z=inf), base from -1 (z=0) to -i (z=1).
  static Complex klein_point(double u, double v) {
    const Complex V0 = 1.0, V1 = -1.0, V2 = -I;
    return V0 + u * ((1.0 - v) * V1 + v * V2 - V0);
  }
  static Complex klein_to_poincare(Complex k) { return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k)))); }
  static Complex poincare_to_upper_half_plane(Complex p) { return I * (1.0 + p) / (1.0 - p); }
  static Complex klein_to_upper_half_plane(Complex k) { return poincare_to_upper_half_plane(klein_to_poincare(k)); }

  /// Three fixed interior points used to tell group elements apart.
  std::array<Complex, 3> probe_points() const {
    return {fan_point(0.41, 0.23), fan_point(0.63, 0.71), fan_point(0.27, 0.52)};
  }

 private:
  Kind kind_ = Kind::Polyhedral;
  std::array<MobiusMap, 3> mirrors_;
  std::array<Complex, 3> vertices_;
  double alpha_ = 0.0;
  Complex center_;
  double radius2_ = 0.0;
};

struct Tile {
  MobiusMap g;       // maps the base triangle onto the tile
  std::string word;  // reflection digits, "e" for the identity
  bool mirrored = false;
};

struct Tiling {
  std::vector<Tile> tiles;
  bool partial = false;    // depth ran out before the requested count
  bool exhausted = false;  // every group element was enumerated
  int depth = 0;
};

/// Free reduction of a reflection word (R_i R_i = e).
inline std::string reduce_word(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (c == 'e') continue;
    if (!out.empty() && out.back() == c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out.empty() ? "e" : out;
}

inline MobiusMap word_to_map(const BaseTriangle& base, const std::string& word) {
  MobiusMap g = MobiusMap::identity();
  for (char c : word) {
    if (c == 'e') continue;
    if (c < '1' || c > '3') throw std::invalid_argument("word_to_map: bad letter in '" + word + "'");
    g = g * base.mirrors()[c - '1'];
  }
  return g;
}

inline constexpr double tile_dedup_tolerance = 1e-9;

/// Breadth-first enumeration over the even generators R_i R_j; each element
/// contributes the tiles g(T) and g R1 (T).
inline Tiling tile_parameter_domain(const BaseTriangle& base, int max_tiles, int max_depth = 64) {
  if (max_tiles < 1) throw std::invalid_argument("tile_parameter_domain: need at least one tile");
  const std::array<std::string, 6> gens{"12", "21", "13", "31", "23", "32"};
  const auto probes = base.probe_points();
  struct Element {
    MobiusMap g;
    std::string word;
    int depth;
    std::array<Complex, 3> image;
  };
  std::vector<Element> seen;
  auto image_of = [&](const MobiusMap& g) {
    return std::array<Complex, 3>{g(probes[0]), g(probes[1]), g(probes[2])};
  };
  auto known = [&](const std::array<Complex, 3>& im) {
    for (const auto& e : seen) {
      bool same = true;
      for (int k = 0; k < 3 && same; ++k) same = chordal_distance(e.image[k], im[k]) < tile_dedup_tolerance;
      if (same) return true;
    }
    return false;
  };

  Tiling out;
  std::deque<std::size_t> queue;
  seen.push_back({MobiusMap::identity(), "e", 0, image_of(MobiusMap::identity())});
  queue.push_back(0);
  const MobiusMap R1 = base.mirrors()[0];
  bool truncated = false;

  while (!queue.empty() && static_cast<int>(out.tiles.size()) < max_tiles) {
    const Element cur = seen[queue.front()];
    queue.pop_front();
    out.depth = std::max(out.depth, cur.depth);
    out.tiles.push_back({cur.g, cur.word, false});
    if (static_cast<int>(out.tiles.size()) < max_tiles)
      out.tiles.push_back({cur.g * R1, reduce_word(cur.word + "1"), true});
    for (const auto& gw : gens) {
      const MobiusMap g = cur.g * word_to_map(base, gw);
      const auto im = image_of(g);
      if (known(im)) continue;
      if (cur.depth >= max_depth) {
        truncated = true;
        continue;
      }
      seen.push_back({g, reduce_word(cur.word + gw), cur.depth + 1, im});
      queue.push_back(seen.size() - 1);
    }
  }
  out.exhausted = queue.empty() && !truncated;
  out.partial = static_cast<int>(out.tiles.size()) < max_tiles && !out.exhausted;
  return out;
}

/// Tiles named by explicit words; odd words are mirrored tiles.
inline Tiling tiles_from_words(const BaseTriangle& base, const std::vector<std::string>& words) {
  Tiling out;
  for (const auto& w : words) {
    const std::string r = reduce_word(w);
    const int letters = r == "e" ? 0 : static_cast<int>(r.size());
    out.tiles.push_back({word_to_map(base, r), r, letters % 2 == 1});
  }
  out.exhausted = false;
  return out;
}

}  // namespace hsm

#pragma once

// Uniform evaluator x(z), dx/dz, d2x/dz2 for every standard case, plus the
// synthetic power map x = z^alpha used for end-behavior checks.

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "hsm/hgde.hpp"
#include "hsm/polyhedral.hpp"
#include "hsm/theta.hpp"

namespace hsm {

struct LambdaCase {};
struct PowerCase {
  double alpha = 1.0;
};

class InverseSchwarzMap {
 public:
  using Data = std::variant<PolyhedralData, LambdaCase, PowerCase>;

  static InverseSchwarzMap polyhedral(const PolyhedralTag& tag) {
    InverseSchwarzMap m;
    m.data_ = std::make_shared<Data>(build_polyhedral(tag));
    const auto& d = std::get<PolyhedralData>(*m.data_);
    m.exponents_ = exponents_from_orders(d.k0, d.k1, d.kInf);
    m.name_ = tag.str();
    return m;
  }
  static InverseSchwarzMap lambda() {
    InverseSchwarzMap m;
    m.data_ = std::make_shared<Data>(LambdaCase{});
    m.exponents_ = exponents_from_orders(0, 0, 0);
    m.name_ = "fuchsian";
    return m;
  }
  /// x = z^alpha (principal branch); carries no equation data.
  static InverseSchwarzMap power(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("InverseSchwarzMap::power: alpha must be positive");
    InverseSchwarzMap m;
    m.data_ = std::make_shared<Data>(PowerCase{alpha});
    m.name_ = "power:" + std::to_string(alpha);
    return m;
  }

  bool is_polyhedral() const { return std::holds_alternative<PolyhedralData>(*data_); }
  bool is_lambda() const { return std::holds_alternative<LambdaCase>(*data_); }
  bool is_power() const { return std::holds_alternative<PowerCase>(*data_); }
  const PolyhedralData& polyhedral_data() const { return std::get<PolyhedralData>(*data_); }
  const ExponentData& exponents() const { return exponents_; }
  const std::string& name() const { return name_; }

  MapJet operator()(Complex z) const {
    struct Visitor {
      Complex z;
      MapJet operator()(const PolyhedralData& d) const { return eval_polyhedral_x(d, z); }
      MapJet operator()(const LambdaCase&) const { return eval_lambda(z); }
      MapJet operator()(const PowerCase& p) const {
        if (z == Complex{}) throw std::domain_error("power map: z = 0");
        const Complex za = std::pow(z, p.alpha);
        return {za, p.alpha * za / z, p.alpha * (p.alpha - 1.0) * za / (z * z)};
      }
    };
    return std::visit(Visitor{z}, *data_);
  }

 private:
  InverseSchwarzMap() = default;
  std::shared_ptr<const Data> data_;
  ExponentData exponents_;
  std::string name_;
};

/// Parses dihedral:n | tetra | octa | icosa | fuchsian.
inline InverseSchwarzMap parse_case(const std::string& s) {
  if (s == "fuchsian") return InverseSchwarzMap::lambda();
  if (s == "tetra" || s == "tetrahedral") return InverseSchwarzMap::polyhedral(PolyhedralTag::tetrahedral());
  if (s == "octa" || s == "octahedral") return InverseSchwarzMap::polyhedral(PolyhedralTag::octahedral());
  if (s == "icosa" || s == "icosahedral") return InverseSchwarzMap::polyhedral(PolyhedralTag::icosahedral());
  const std::string prefix = "dihedral:";
  if (s.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(s.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() - prefix.size() || n < 1)
      throw std::invalid_argument("bad dihedral order in case '" + s + "'");
    return InverseSchwarzMap::polyhedral(PolyhedralTag::dihedral(n));
  }
  throw std::invalid_argument("unknown case '" + s + "' (expected dihedral:n|tetra|octa|icosa|fuchsian)");
}

}  // namespace hsm

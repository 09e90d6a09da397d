// SPDX-License-Identifier: Apache-2.0
#include "llwork/core.hpp"

#include <sstream>

namespace llwork {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_length(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ConfigError(std::string(what) + " must be positive and finite");
}

void require_coupling(double value, const char* what) {
  if (std::isnan(value) || value < 0.0)
    throw ConfigError(std::string(what) + " must be >= 0 (repulsive branch)");
}

}  // namespace

ModelSpec::ModelSpec(int n_particles, Geometry geometry, double coupling, double hbar)
    : n_(n_particles), geometry_(geometry), coupling_(coupling), hbar_(hbar) {
  if (n_ < 1) throw ConfigError("n_particles must be >= 1");
  require_length(length(), is_ring() ? "ring circumference" : "box width");
  require_coupling(coupling_, "coupling C");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ConfigError("hbar must be positive");
}

double ModelSpec::length() const noexcept {
  return std::visit(Overloaded{[](const Ring& r) { return r.circumference; },
                               [](const Box& b) { return b.width; }},
                    geometry_);
}

ModelSpec ModelSpec::with_length(double length) const {
  if (is_ring()) return ring(n_, length, coupling_, hbar_);
  return box(n_, length, coupling_, hbar_);
}

ModelSpec ModelSpec::with_coupling(double coupling) const {
  return ModelSpec(n_, geometry_, coupling, hbar_);
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (is_ring() ? "ring" : "box") << " N=" << n_ << " length=" << length() << " C=";
  if (tonks_girardeau())
    os << "inf";
  else
    os << coupling_;
  os << " hbar=" << hbar_ << " mass=2m=1";
  return os.str();
}

DimensionlessCoupling alpha_of(const ModelSpec& model) {
  if (model.tonks_girardeau()) return {kInfiniteCoupling};
  return {model.length() * model.coupling() / (2.0 * model.hbar() * model.hbar())};
}

double coupling_for_alpha(double alpha, double length, double hbar) {
  if (std::isinf(alpha)) return kInfiniteCoupling;
  return 2.0 * hbar * hbar * alpha / length;
}

Protocol::Protocol(ProtocolKind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const Adiabatic& p) {
                   require_length(p.initial_length, "initial length");
                   require_length(p.final_length, "final length");
                 },
                 [](const SuddenWall& p) {
                   require_length(p.initial_length, "initial length");
                   require_length(p.final_length, "final length");
                 },
                 [](const SuddenCoupling& p) {
                   require_coupling(p.initial_coupling, "initial coupling");
                   require_coupling(p.final_coupling, "final coupling");
                 },
                 [](const LinearRamp& p) {
                   require_length(p.initial_length, "initial length");
                   if (!(p.duration > 0.0)) throw ConfigError("ramp duration must be positive");
                   if (!std::isfinite(p.speed)) throw ConfigError("ramp speed must be finite");
                   require_length(p.final_length(), "ramp final width");
                 },
             },
             kind_);
}

std::string Protocol::name() const {
  return std::visit(Overloaded{[](const Adiabatic&) { return std::string("adiabatic"); },
                               [](const SuddenWall&) { return std::string("sudden-wall"); },
                               [](const SuddenCoupling&) { return std::string("sudden-coupling"); },
                               [](const LinearRamp&) { return std::string("ramp"); }},
                    kind_);
}

std::string Protocol::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Adiabatic& p) {
                   os << "adiabatic lambda_i=" << p.initial_length << " lambda_f=" << p.final_length;
                 },
                 [&](const SuddenWall& p) {
                   os << "sudden-wall lambda_i=" << p.initial_length << " lambda_f=" << p.final_length;
                 },
                 [&](const SuddenCoupling& p) {
                   os << "sudden-coupling C_i=" << p.initial_coupling << " C_f=" << p.final_coupling;
                 },
                 [&](const LinearRamp& p) {
                   os << "ramp lambda_i=" << p.initial_length << " v=" << p.speed << " tau=" << p.duration;
                 },
             },
             kind_);
  return os.str();
}

int duality_sign(std::span<const double> x) {
  int sign = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] == x[i]) throw ContactError("duality_sign evaluated on the contact set");
      if (x[j] < x[i]) sign = -sign;
    }
  }
  return sign;
}

}  // namespace llwork

// SPDX-License-Identifier: Apache-2.0
//
// Shared conventions for the whole library.
//
// Units: the mass convention is fixed to 2m = 1, so a plane wave of wave
// number k carries kinetic energy hbar^2 k^2.  hbar is configurable and
// defaults to 1.  Box results are naturally expressed in units of
// hbar^2 / (2m lambda^2) = hbar^2 / lambda^2.
#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <variant>

#include "llwork/errors.hpp"

namespace llwork {

/// Coupling value standing for C = +infinity (Tonks-Girardeau limit).
inline constexpr double kInfiniteCoupling = std::numeric_limits<double>::infinity();

inline bool is_tonks_girardeau(double coupling) { return std::isinf(coupling) && coupling > 0; }

struct Ring {
  double circumference;
};

struct Box {
  double width;
};

using Geometry = std::variant<Ring, Box>;

class ModelSpec {
 public:
  /// Throws ConfigError unless n >= 1, length > 0, coupling >= 0 (or +inf), hbar > 0.
  ModelSpec(int n_particles, Geometry geometry, double coupling, double hbar = 1.0);

  static ModelSpec ring(int n, double circumference, double coupling, double hbar = 1.0) {
    return {n, Ring{circumference}, coupling, hbar};
  }
  static ModelSpec box(int n, double width, double coupling, double hbar = 1.0) {
    return {n, Box{width}, coupling, hbar};
  }

  int n_particles() const noexcept { return n_; }
  const Geometry& geometry() const noexcept { return geometry_; }
  bool is_ring() const noexcept { return std::holds_alternative<Ring>(geometry_); }
  bool is_box() const noexcept { return std::holds_alternative<Box>(geometry_); }
  /// Ring circumference or box width.
  double length() const noexcept;
  double coupling() const noexcept { return coupling_; }
  double hbar() const noexcept { return hbar_; }
  bool tonks_girardeau() const noexcept { return is_tonks_girardeau(coupling_); }

  /// Same model with a different length (geometry kind kept).
  ModelSpec with_length(double length) const;
  ModelSpec with_coupling(double coupling) const;

  std::string describe() const;

 private:
  int n_;
  Geometry geometry_;
  double coupling_;
  double hbar_;
};

/// alpha = m lambda C / hbar^2, i.e. lambda C / (2 hbar^2) with 2m = 1.
struct DimensionlessCoupling {
  double alpha;
};

DimensionlessCoupling alpha_of(const ModelSpec& model);

/// Coupling C that realizes a given alpha at width lambda.
double coupling_for_alpha(double alpha, double length, double hbar = 1.0);

// Driving protocols.  Lengths are ring circumferences or box widths.
struct Adiabatic {
  double initial_length;
  double final_length;
};
struct SuddenWall {
  double initial_length;
  double final_length;
};
struct SuddenCoupling {
  double initial_coupling;
  double final_coupling;
};
/// lambda(t) = initial_length + speed * t for t in [0, duration].
struct LinearRamp {
  double initial_length;
  double speed;
  double duration;
  double final_length() const { return initial_length + speed * duration; }
};

using ProtocolKind = std::variant<Adiabatic, SuddenWall, SuddenCoupling, LinearRamp>;

class Protocol {
 public:
  /// Throws ConfigError on non-positive lengths, negative couplings or a
  /// ramp that ends at non-positive width.
  explicit Protocol(ProtocolKind kind);

  const ProtocolKind& kind() const noexcept { return kind_; }
  std::string name() const;
  std::string describe() const;

 private:
  ProtocolKind kind_;
};

/// A(x) = prod_{i<j} sign(x_j - x_i).  Throws ContactError if two coordinates
/// coincide.
int duality_sign(std::span<const double> x);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace llwork

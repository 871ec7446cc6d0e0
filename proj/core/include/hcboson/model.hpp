#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "hcboson/errors.hpp"

namespace hcb {

/// Inverse temperature. Either a finite positive value or the distinguished
/// ground-state value; never a large finite stand-in for T = 0.
class InverseTemperature {
 public:
  static InverseTemperature finite(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw InvalidArgument("inverse temperature must be finite and > 0, got " +
                            std::to_string(beta));
    }
    return InverseTemperature(beta);
  }

  static InverseTemperature infinite() {
    return InverseTemperature(std::numeric_limits<double>::infinity());
  }

  /// From a temperature T >= 0; T = 0 maps to the infinite value.
  static InverseTemperature from_temperature(double temperature) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
      throw InvalidArgument("temperature must be finite and >= 0");
    }
    return temperature == 0.0 ? infinite() : finite(1.0 / temperature);
  }

  bool is_infinite() const { return std::isinf(value_); }
  bool is_finite() const { return !is_infinite(); }

  /// The finite value. Throws for the ground-state value.
  double value() const {
    if (is_infinite()) {
      throw InvalidArgument("inverse temperature is infinite (ground state)");
    }
    return value_;
  }

  /// Raw value, +inf for the ground state.
  double raw() const { return value_; }

  friend bool operator==(InverseTemperature, InverseTemperature) = default;

 private:
  explicit InverseTemperature(double v) : value_(v) {}
  double value_;
};

/// Couplings of the rescaled one-site model
///   h = t*lambda*(s+_1 + s+_2) + t*conj(lambda)*(s-_1 + s-_2) + U s^z_1 s^z_2.
/// The chemical potential is not a free parameter: half filling fixes it.
struct ModelParams {
  double t = -1.0;
  double U = 0.0;
  InverseTemperature beta = InverseTemperature::infinite();

  ModelParams() = default;
  ModelParams(double hopping, double coupling, InverseTemperature inverse_temperature)
      : t(hopping), U(coupling), beta(inverse_temperature) {
    if (!std::isfinite(t)) throw InvalidArgument("t must be finite");
    if (!(U >= 0.0) || !std::isfinite(U)) throw InvalidArgument("U must be finite and >= 0");
  }

  /// Condensation requires attractive hopping.
  bool physical() const { return t < 0.0; }
};

}  // namespace hcb

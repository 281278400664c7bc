#pragma once

#include <string_view>
#include <vector>

#include "okd/optics.hpp"

namespace okd {

enum class Observable { V56, IN56, VB, IN78, V78 };
enum class PhaseSymbol { Phi1, Phi2, Psi1, Psi2 };

Observable observable_from_string(std::string_view s);
PhaseSymbol symbol_from_string(std::string_view s);
std::string_view to_string(Observable o);
std::string_view to_string(PhaseSymbol s);

/// Evaluates one observable of the channel for a unit source field.
double observe(Observable quantity, const PhaseFramed& frame);

double& phase_ref(PhaseFramed& frame, PhaseSymbol s);

/// Another phase that follows the swept one: symbol = x + offset.
struct Tie {
  PhaseSymbol symbol;
  double offset{0};
};

struct SweepSpec {
  Observable quantity{Observable::V56};
  PhaseFramed base;
  PhaseSymbol varying{PhaseSymbol::Phi1};
  double start{0};
  double stop{kTwoPi<double>};
  double step{kPi<double> / 100};
  std::vector<Tie> tied;
};

struct SweepPoint {
  double x{0};
  double value{0};
};

/// Grid x_k = start + k*step over [start, stop).
std::vector<double> phase_grid(double start, double stop, double step);

std::vector<SweepPoint> sweep(const SweepSpec& spec);

}  // namespace okd

#include "okd/sweep.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace okd {

Observable observable_from_string(std::string_view s) {
  if (s == "V56") return Observable::V56;
  if (s == "IN56") return Observable::IN56;
  if (s == "VB") return Observable::VB;
  if (s == "IN78") return Observable::IN78;
  if (s == "V78") return Observable::V78;
  throw std::invalid_argument("unknown observable: " + std::string(s));
}

PhaseSymbol symbol_from_string(std::string_view s) {
  if (s == "phi1") return PhaseSymbol::Phi1;
  if (s == "phi2") return PhaseSymbol::Phi2;
  if (s == "psi1") return PhaseSymbol::Psi1;
  if (s == "psi2") return PhaseSymbol::Psi2;
  throw std::invalid_argument("unknown phase symbol: " + std::string(s));
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::V56: return "V56";
    case Observable::IN56: return "IN56";
    case Observable::VB: return "VB";
    case Observable::IN78: return "IN78";
    case Observable::V78: return "V78";
  }
  return "?";
}

std::string_view to_string(PhaseSymbol s) {
  switch (s) {
    case PhaseSymbol::Phi1: return "phi1";
    case PhaseSymbol::Phi2: return "phi2";
    case PhaseSymbol::Psi1: return "psi1";
    case PhaseSymbol::Psi2: return "psi2";
  }
  return "?";
}

double observe(Observable quantity, const PhaseFramed& frame) {
  const FieldPaird src = source_field<double>();
  switch (quantity) {
    case Observable::V56: return visibility(forward_fields(frame, src));
    case Observable::IN56: return interference(forward_fields(frame, src));
    case Observable::VB: return visibility(round_trip(frame, src));
    case Observable::IN78: return interference(channel_fields(frame, src));
    case Observable::V78: return visibility(channel_fields(frame, src));
  }
  throw std::logic_error("observe: bad observable");
}

double& phase_ref(PhaseFramed& f, PhaseSymbol s) {
  switch (s) {
    case PhaseSymbol::Phi1: return f.phi1;
    case PhaseSymbol::Phi2: return f.phi2;
    case PhaseSymbol::Psi1: return f.psi1;
    case PhaseSymbol::Psi2: return f.psi2;
  }
  throw std::logic_error("phase_ref: bad symbol");
}

std::vector<double> phase_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");
  if (!(stop > start)) throw std::invalid_argument("sweep range is empty");
  const auto n = static_cast<std::size_t>(std::ceil((stop - start) / step - 1e-9));
  std::vector<double> xs(n);
  for (std::size_t k = 0; k < n; ++k) xs[k] = start + static_cast<double>(k) * step;
  return xs;
}

std::vector<SweepPoint> sweep(const SweepSpec& spec) {
  std::vector<SweepPoint> out;
  for (double x : phase_grid(spec.start, spec.stop, spec.step)) {
    PhaseFramed f = spec.base;
    phase_ref(f, spec.varying) = x;
    for (const Tie& t : spec.tied) phase_ref(f, t.symbol) = x + t.offset;
    out.push_back({x, observe(spec.quantity, f)});
  }
  return out;
}

}  // namespace okd

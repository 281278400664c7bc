#include "okd/addressing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace okd {

namespace {
constexpr double kPiD = std::numbers::pi;
constexpr double kGridSlack = 1e-9;

void check_control_phase(double p) {
  if (!std::isfinite(p) || p < -kGridSlack || p > kPiD + kGridSlack) {
    throw std::invalid_argument("control_phase must lie in [0, pi]");
  }
}
}  // namespace

double compensate_bob(double phi1_base, const Address& address) {
  return wrap_phase(phi1_base + address.control_phase);
}

double compensate_alice(double psi1_base, const Address& own_address, bool knows_remote) {
  return knows_remote ? wrap_phase(psi1_base + own_address.control_phase) : wrap_phase(psi1_base);
}

bool address_matched(const Address& bob, const Address& alice, double tol) {
  return phases_equal(bob.control_phase, alice.control_phase, tol);
}

std::size_t capacity(double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
  return static_cast<std::size_t>(std::floor(kPiD / resolution + kGridSlack)) + 1;
}

double resolution_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return std::acos(1.0 - epsilon);
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::PointToPoint: return "p2p";
    case Topology::OneToN: return "1xN";
    case Topology::NToN: return "NxN";
  }
  return "NxN";
}

Topology topology_from_string(std::string_view s) {
  if (s == "p2p") return Topology::PointToPoint;
  if (s == "1xN") return Topology::OneToN;
  if (s == "NxN") return Topology::NToN;
  throw std::invalid_argument("unknown topology: " + std::string(s));
}

AddressRegistry::AddressRegistry(Topology topology, double resolution)
    : topology_(topology), resolution_(resolution) {
  used_.assign(capacity(resolution), false);
}

std::size_t AddressRegistry::max_entries() const {
  return topology_ == Topology::PointToPoint ? 1 : used_.size();
}

const Address& AddressRegistry::allocate(std::string label) {
  if (entries_.size() >= max_entries()) {
    throw CapacityExhausted("address registry full (" + std::to_string(max_entries()) +
                            " addresses)");
  }
  const auto slot = std::find(used_.begin(), used_.end(), false);
  const auto k = static_cast<std::size_t>(slot - used_.begin());
  used_[k] = true;
  entries_.push_back(Address{std::min(kPiD, static_cast<double>(k) * resolution_), std::move(label)});
  return entries_.back();
}

void AddressRegistry::insert(Address a) {
  check_control_phase(a.control_phase);
  if (entries_.size() >= max_entries()) throw CapacityExhausted("address registry full");
  for (const auto& e : entries_) {
    if (std::abs(e.control_phase - a.control_phase) < resolution_ - kGridSlack) {
      throw std::invalid_argument("address '" + a.label + "' closer than resolution to '" +
                                  e.label + "'");
    }
  }
  const auto k = static_cast<std::size_t>(std::llround(a.control_phase / resolution_));
  if (k < used_.size() && std::abs(static_cast<double>(k) * resolution_ - a.control_phase) <
                              kGridSlack * 1e3) {
    used_[k] = true;
  }
  entries_.push_back(std::move(a));
}

double AddressRegistry::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      gap = std::min(gap, std::abs(entries_[i].control_phase - entries_[j].control_phase));
  return gap;
}

void AddressRegistry::write(std::ostream& os) const {
  os << "label,control_phase\n";
  char buf[64];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%.17g", e.control_phase);
    os << e.label << ',' << buf << '\n';
  }
}

AddressRegistry AddressRegistry::read(std::istream& is, Topology topology, double resolution) {
  AddressRegistry reg(topology, resolution);
  std::string line;
  if (!std::getline(is, line) || line != "label,control_phase") {
    throw std::invalid_argument("registry table: missing 'label,control_phase' header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw std::invalid_argument("registry table: bad row: " + line);
    Address a;
    a.label = line.substr(0, comma);
    std::istringstream num(line.substr(comma + 1));
    if (!(num >> a.control_phase)) {
      throw std::invalid_argument("registry table: bad control_phase in row: " + line);
    }
    reg.insert(std::move(a));
  }
  return reg;
}

}  // namespace okd

#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "okd/optics.hpp"

namespace okd {

/// A channel address: the control phase in [0, pi] plus a free-form label
/// (typically the wavelength slot it is bound to).
struct Address {
  double control_phase{0};
  std::string label;
};

class CapacityExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bob's encoder phase: base (0 or pi) shifted by his control phase.
double compensate_bob(double phi1_base, const Address& address);

/// Alice's encoder phase. A receiver that knows the address it is serving
/// shifts its base by its own control phase; an unknowing one sends the bare
/// base.
double compensate_alice(double psi1_base, const Address& own_address, bool knows_remote);

bool address_matched(const Address& bob, const Address& alice, double tol = kPhaseTolerance);

/// Number of addresses on [0, pi] separated by at least `resolution`.
std::size_t capacity(double resolution);

/// Smallest control-phase mismatch whose identity-slot return visibility
/// -cos(d) leaves the +-epsilon acceptance band around -1.
double resolution_for_epsilon(double epsilon);

enum class Topology { PointToPoint, OneToN, NToN };

std::string_view to_string(Topology t);
Topology topology_from_string(std::string_view s);

/// Owner of the allocated addresses for one fiber/wavelength plan. Addresses
/// are packed onto a uniform grid of pitch `resolution` starting at 0.
class AddressRegistry {
 public:
  AddressRegistry(Topology topology, double resolution);

  /// Next free grid slot. Throws CapacityExhausted when full.
  const Address& allocate(std::string label);

  const std::vector<Address>& entries() const { return entries_; }
  Topology topology() const { return topology_; }
  double resolution() const { return resolution_; }
  std::size_t max_entries() const;

  /// Smallest pairwise control-phase gap (infinity with fewer than two entries).
  double min_gap() const;

  /// CSV table `label,control_phase`.
  void write(std::ostream& os) const;
  static AddressRegistry read(std::istream& is, Topology topology, double resolution);

 private:
  void insert(Address a);

  Topology topology_;
  double resolution_;
  std::vector<Address> entries_;
  std::vector<bool> used_;
};

}  // namespace okd

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "okd/addressing.hpp"
#include "okd/detection.hpp"
#include "okd/noise.hpp"

namespace okd {

/// DualRelation: identity and inversion slots both carry key bits.
/// IdentityOnly: only identity slots are kept; the key bit is the shared basis.
enum class ProtocolVariant { DualRelation, IdentityOnly };

std::string_view to_string(ProtocolVariant v);
ProtocolVariant variant_from_string(std::string_view s);

struct ClassifierConfig {
  double epsilon{0.05};
  std::uint64_t rng_seed{0};

  void validate() const;
};

class ProtocolFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis pick for one party: the phase (0 or pi) and its bit.
struct BasisChoice {
  double phase{0};
  Bit bit{Bit::Zero};
};

BasisChoice basis_from_bit(Bit b);

BasisChoice bob_prepare(Engine& rng);
BasisChoice alice_encode(Engine& rng);

/// Alice's copy y of Bob's key from her forward visibility.
MaybeBit alice_measure(double v_a, const ClassifierConfig& cfg);

MaybeBit alice_raw_key(MaybeBit y, Bit z, ProtocolVariant variant);
MaybeBit bob_raw_key(double v_b, Bit x, const ClassifierConfig& cfg, ProtocolVariant variant);

struct SessionTrace {
  std::size_t slot_index{0};
  double phi1{0};  // base, before address compensation
  Bit x{Bit::Zero};
  double v_a{0};
  MaybeBit y;
  double psi1{0};  // base, before address compensation
  Bit z{Bit::Zero};
  MaybeBit m_a;
  double v_b{0};
  MaybeBit m_b;
  MaybeBit final;  // Bob's bit if neither party discarded the slot

  bool operator==(const SessionTrace&) const = default;
};

struct KeyMaterial {
  std::vector<MaybeBit> raw_bob;
  std::vector<MaybeBit> raw_alice;
  std::vector<Bit> final_bob;
  std::vector<Bit> final_alice;
  std::vector<std::size_t> kept_slots;  // slot index of each final bit
  double sampled_error_rate{0};

  bool operator==(const KeyMaterial&) const = default;
};

/// Public announcement of discard positions: every slot discarded by either
/// party is removed from both keys.
KeyMaterial reconcile(const std::vector<MaybeBit>& bob, const std::vector<MaybeBit>& alice);

struct PrivacyResult {
  double error_rate{0};
  std::size_t sampled{0};
  KeyMaterial key;
};

/// Compares a seeded random subset of the final keys and removes it.
PrivacyResult privacy_amplify(const KeyMaterial& key, double sample_fraction,
                              std::uint64_t rng_seed);

struct AddressConfig {
  Address bob{0.0, "bob"};
  Address alice{0.0, "alice"};
  bool alice_knows_remote{true};
};

/// Replaces a measured visibility on one slot (used to replay recorded errors).
struct VisibilityOverride {
  std::optional<double> v_a;
  std::optional<double> v_b;
};

/// Fixed basis draws; when present they replace the random draws.
struct BasisSchedule {
  std::vector<Bit> bob;
  std::vector<Bit> alice;
};

struct SessionConfig {
  std::size_t n_slots{1};
  AddressConfig address;
  NoiseConfig noise;
  ProtocolVariant variant{ProtocolVariant::DualRelation};
  ClassifierConfig classifier;
  std::optional<BasisSchedule> schedule;
  std::map<std::size_t, VisibilityOverride> overrides;
};

struct TapRecord;

struct SessionResult {
  std::vector<SessionTrace> trace;
  KeyMaterial key;
};

/// Runs the slot sequence: prepare, forward pass, Alice's measurement and
/// encoding, return pass, Bob's measurement, then reconciliation. If `taps` is
/// non-null an in-channel tap record is appended for every slot; tapping does
/// not touch any legitimate detection.
SessionResult run_session(const SessionConfig& cfg, std::vector<TapRecord>* taps = nullptr);

/// The effective shifter frame used for one slot.
PhaseFramed slot_frame(const AddressConfig& address, double phi1_base, double psi1_base,
                       double channel_offset);

}  // namespace okd

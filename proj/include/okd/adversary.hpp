#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "okd/detection.hpp"
#include "okd/optics.hpp"

namespace okd {

/// Intensity-level readout of one tapped line pair.
struct LineReadout {
  double intensity_a{0};
  double intensity_b{0};
  double interference{0};
  double visibility{0};

  bool operator==(const LineReadout&) const = default;
};

/// Everything Eve captures from one slot: outbound (E3, E4) and inbound
/// (E7, E8) readouts, and the tapped fields for her own interferometry.
struct TapRecord {
  std::size_t slot_index{0};
  LineReadout outbound;
  LineReadout inbound;
  FieldPaird outbound_fields{FieldPaird::Zero()};
  FieldPaird inbound_fields{FieldPaird::Zero()};
};

/// Non-perturbing tap on both passes of the channel.
TapRecord tap_channel(const PhaseFramed& frame, const FieldPaird& input,
                      std::size_t slot_index = 0);

enum class EveStrategy { Random, MaxVisibility };

/// Eve's knowledge of the interferometer reference phase. Unknown draws a
/// uniform offset per epoch; Granted hands her the true reference.
enum class EveReference { Unknown, Granted };

struct EveConfig {
  EveStrategy strategy{EveStrategy::MaxVisibility};
  EveReference reference{EveReference::Unknown};
  std::size_t epoch_length{1};
  std::uint64_t seed{0};
};

struct AttackOutcome {
  std::vector<Bit> guessed_bits;
  std::vector<Bit> true_bits;
  double success_rate{0};
  double mutual_information_estimate{0};  // bits per slot
};

/// Eve's guess of the round-trip relation bit (Bob's DualRelation raw key) for
/// every record. `truth` is used only for scoring.
AttackOutcome eve_guess(std::span<const TapRecord> records, std::span<const Bit> truth,
                        const EveConfig& cfg);

enum class ResetPolicy { NoReset, RandomReset };

/// Offline attack on recorded taps: Eve decodes with her (unknown) reference,
/// then keeps whichever of the two global flip hypotheses decodes best.
/// RandomReset re-randomizes the interferometer every `epoch_length` slots.
AttackOutcome offline_flip_attack(std::span<const TapRecord> records, std::span<const Bit> truth,
                                  ResetPolicy policy, std::size_t epoch_length,
                                  std::uint64_t seed);

/// Plug-in estimate of I(guess; truth) in bits per symbol.
double mutual_information(std::span<const Bit> a, std::span<const Bit> b);

std::string_view to_string(EveStrategy s);
std::string_view to_string(ResetPolicy p);

}  // namespace okd

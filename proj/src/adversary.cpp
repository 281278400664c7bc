#include "okd/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "okd/noise.hpp"

namespace okd {

namespace {

LineReadout readout(const FieldPaird& f) {
  LineReadout r;
  r.intensity_a = std::norm(f(0));
  r.intensity_b = std::norm(f(1));
  r.interference = interference(f);
  r.visibility = visibility(r.intensity_a, r.intensity_b);
  return r;
}

// Eve's copy of Bob's return interferometer, with her reference phase on the
// upper line.
Bit recombine(const FieldPaird& inbound, double reference_error) {
  const FieldPaird out =
      beam_splitter<double>() * phase_stage(reference_error, 0.0) * inbound;
  return visibility(out) < 0.0 ? Bit::One : Bit::Zero;
}

void check_inputs(std::span<const TapRecord> records, std::span<const Bit> truth) {
  if (records.empty()) throw std::invalid_argument("attack: no tap records");
  if (records.size() != truth.size()) {
    throw std::invalid_argument("attack: records and truth lengths differ");
  }
}

double success(std::span<const Bit> guess, std::span<const Bit> truth) {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < guess.size(); ++k) hits += guess[k] == truth[k];
  return static_cast<double>(hits) / static_cast<double>(guess.size());
}

AttackOutcome score(std::vector<Bit> guess, std::span<const Bit> truth) {
  AttackOutcome o;
  o.true_bits.assign(truth.begin(), truth.end());
  o.success_rate = success(guess, truth);
  o.mutual_information_estimate = mutual_information(guess, truth);
  o.guessed_bits = std::move(guess);
  return o;
}

std::vector<Bit> decode_with_epochs(std::span<const TapRecord> records, std::size_t epoch_length,
                                    Engine& rng) {
  std::uniform_real_distribution<double> ref(0.0, 2.0 * std::numbers::pi);
  std::vector<Bit> bits;
  bits.reserve(records.size());
  double u = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (k % epoch_length == 0) u = ref(rng);
    bits.push_back(recombine(records[k].inbound_fields, u));
  }
  return bits;
}

}  // namespace

TapRecord tap_channel(const PhaseFramed& frame, const FieldPaird& input, std::size_t slot_index) {
  TapRecord t;
  t.slot_index = slot_index;
  t.outbound_fields = outbound_fields(frame, input);
  t.inbound_fields = channel_fields(frame, input);
  t.outbound = readout(t.outbound_fields);
  t.inbound = readout(t.inbound_fields);
  return t;
}

AttackOutcome eve_guess(std::span<const TapRecord> records, std::span<const Bit> truth,
                        const EveConfig& cfg) {
  check_inputs(records, truth);
  if (cfg.epoch_length == 0) throw std::invalid_argument("epoch_length must be >= 1");
  Engine rng = make_engine(cfg.seed, stream::kEve);

  std::vector<Bit> guess;
  guess.reserve(records.size());
  if (cfg.strategy == EveStrategy::Random) {
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t k = 0; k < records.size(); ++k) guess.push_back(bit_from_int(coin(rng)));
  } else if (cfg.reference == EveReference::Granted) {
    for (const auto& r : records) guess.push_back(recombine(r.inbound_fields, 0.0));
  } else {
    guess = decode_with_epochs(records, cfg.epoch_length, rng);
  }
  return score(std::move(guess), truth);
}

AttackOutcome offline_flip_attack(std::span<const TapRecord> records, std::span<const Bit> truth,
                                  ResetPolicy policy, std::size_t epoch_length,
                                  std::uint64_t seed) {
  check_inputs(records, truth);
  if (epoch_length == 0) throw std::invalid_argument("epoch_length must be >= 1");
  Engine rng = make_engine(seed, stream::kEve);
  const std::size_t epoch = policy == ResetPolicy::NoReset ? records.size() : epoch_length;

  std::vector<Bit> decoded = decode_with_epochs(records, epoch, rng);
  std::vector<Bit> flipped(decoded.size());
  for (std::size_t k = 0; k < decoded.size(); ++k) flipped[k] = flip(decoded[k]);

  // Eve keeps whichever hypothesis "has meaning"; scoring against the truth
  // stands in for that judgement.
  if (success(flipped, truth) > success(decoded, truth)) return score(std::move(flipped), truth);
  return score(std::move(decoded), truth);
}

double mutual_information(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mutual_information: length mismatch");
  if (a.empty()) return 0.0;
  std::array<std::array<double, 2>, 2> joint{};
  for (std::size_t k = 0; k < a.size(); ++k) joint[to_int(a[k])][to_int(b[k])] += 1.0;
  const double n = static_cast<double>(a.size());
  std::array<double, 2> pa{}, pb{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      joint[i][j] /= n;
      pa[i] += joint[i][j];
      pb[j] += joint[i][j];
    }
  double mi = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (joint[i][j] > 0.0) mi += joint[i][j] * std::log2(joint[i][j] / (pa[i] * pb[j]));
  return std::max(0.0, mi);
}

std::string_view to_string(EveStrategy s) {
  return s == EveStrategy::Random ? "random" : "max-visibility";
}

std::string_view to_string(ResetPolicy p) {
  return p == ResetPolicy::NoReset ? "no-reset" : "random-reset";
}

}  // namespace okd

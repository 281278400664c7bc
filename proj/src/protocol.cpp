#include "okd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "okd/adversary.hpp"
#include "okd/optics.hpp"

namespace okd {

std::string_view to_string(ProtocolVariant v) {
  return v == ProtocolVariant::DualRelation ? "dual" : "identity";
}

ProtocolVariant variant_from_string(std::string_view s) {
  if (s == "dual") return ProtocolVariant::DualRelation;
  if (s == "identity") return ProtocolVariant::IdentityOnly;
  throw std::invalid_argument("variant must be 'dual' or 'identity', got '" + std::string(s) + "'");
}

void ClassifierConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

BasisChoice basis_from_bit(Bit b) {
  return {b == Bit::Zero ? 0.0 : std::numbers::pi, b};
}

namespace {
Bit coin(Engine& rng) {
  return bit_from_int(std::uniform_int_distribution<int>(0, 1)(rng));
}
}  // namespace

BasisChoice bob_prepare(Engine& rng) { return basis_from_bit(coin(rng)); }

BasisChoice alice_encode(Engine& rng) { return basis_from_bit(coin(rng)); }

MaybeBit alice_measure(double v_a, const ClassifierConfig& cfg) {
  return to_bit(classify(v_a, cfg.epsilon));
}

MaybeBit alice_raw_key(MaybeBit y, Bit z, ProtocolVariant variant) {
  if (!y) return std::nullopt;
  const int parity = (to_int(*y) + to_int(z)) % 2;
  if (variant == ProtocolVariant::DualRelation) return bit_from_int(parity ^ 1);
  if (parity != 0) return std::nullopt;
  return z;
}

MaybeBit bob_raw_key(double v_b, Bit x, const ClassifierConfig& cfg, ProtocolVariant variant) {
  const Classification c = classify(v_b, cfg.epsilon);
  if (variant == ProtocolVariant::DualRelation) return to_bit(c);
  if (c == Classification::Bit1) return x;
  return std::nullopt;
}

KeyMaterial reconcile(const std::vector<MaybeBit>& bob, const std::vector<MaybeBit>& alice) {
  if (bob.size() != alice.size()) {
    throw ProtocolFault("reconcile: raw key lengths differ (" + std::to_string(bob.size()) +
                        " vs " + std::to_string(alice.size()) + ")");
  }
  KeyMaterial km;
  km.raw_bob = bob;
  km.raw_alice = alice;
  for (std::size_t k = 0; k < bob.size(); ++k) {
    if (!bob[k] || !alice[k]) continue;
    km.final_bob.push_back(*bob[k]);
    km.final_alice.push_back(*alice[k]);
    km.kept_slots.push_back(k);
  }
  return km;
}

PrivacyResult privacy_amplify(const KeyMaterial& key, double sample_fraction,
                              std::uint64_t rng_seed) {
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in (0, 1)");
  }
  if (key.final_bob.size() != key.final_alice.size()) {
    throw ProtocolFault("privacy_amplify: final key lengths differ");
  }
  PrivacyResult out;
  out.key = key;
  const std::size_t n = key.final_bob.size();
  if (n == 0) return out;

  const auto want = static_cast<std::size_t>(std::llround(sample_fraction * static_cast<double>(n)));
  const std::size_t count = std::clamp<std::size_t>(want, 1, n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  picked.reserve(count);
  Engine rng = make_engine(rng_seed, stream::kPrivacy);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);

  std::vector<bool> drop(n, false);
  std::size_t mismatches = 0;
  for (std::size_t k : picked) {
    drop[k] = true;
    if (key.final_bob[k] != key.final_alice[k]) ++mismatches;
  }
  out.sampled = count;
  out.error_rate = static_cast<double>(mismatches) / static_cast<double>(count);

  out.key.final_bob.clear();
  out.key.final_alice.clear();
  out.key.kept_slots.clear();
  for (std::size_t k = 0; k < n; ++k) {
    if (drop[k]) continue;
    out.key.final_bob.push_back(key.final_bob[k]);
    out.key.final_alice.push_back(key.final_alice[k]);
    out.key.kept_slots.push_back(key.kept_slots[k]);
  }
  out.key.sampled_error_rate = out.error_rate;
  return out;
}

PhaseFramed slot_frame(const AddressConfig& address, double phi1_base, double psi1_base,
                       double channel_offset) {
  PhaseFramed f;
  f.phi1 = compensate_bob(phi1_base, address.bob);
  f.phi2 = address.bob.control_phase;
  f.psi1 = compensate_alice(psi1_base, address.alice, address.alice_knows_remote);
  f.psi2 = address.alice.control_phase;
  f.channel_offset = channel_offset;
  return f;
}

namespace {

Detection apply_override(Detection d, std::optional<double> v, double epsilon) {
  if (v) {
    d.visibility = *v;
    d.classification = classify(*v, epsilon);
  }
  return d;
}

}  // namespace

SessionResult run_session(const SessionConfig& cfg, std::vector<TapRecord>* taps) {
  if (cfg.n_slots == 0) throw std::invalid_argument("slots must be >= 1");
  cfg.classifier.validate();
  cfg.noise.validate();
  if (cfg.schedule && (cfg.schedule->bob.size() < cfg.n_slots ||
                       cfg.schedule->alice.size() < cfg.n_slots)) {
    throw std::invalid_argument("basis schedule shorter than slots");
  }

  const double eps = cfg.classifier.epsilon;
  Engine bases = make_engine(cfg.classifier.rng_seed, stream::kBases);
  Engine detector = make_engine(cfg.noise.rng_seed, stream::kDetector);
  const std::vector<double> drift = drift_process(cfg.noise, cfg.n_slots);
  const FieldPaird source = source_field<double>();

  SessionResult out;
  out.trace.reserve(cfg.n_slots);
  std::vector<MaybeBit> raw_bob;
  std::vector<MaybeBit> raw_alice;
  raw_bob.reserve(cfg.n_slots);
  raw_alice.reserve(cfg.n_slots);

  for (std::size_t k = 0; k < cfg.n_slots; ++k) {
    SessionTrace t;
    t.slot_index = k;

    const BasisChoice bob = cfg.schedule ? basis_from_bit(cfg.schedule->bob[k]) : bob_prepare(bases);
    const BasisChoice alice =
        cfg.schedule ? basis_from_bit(cfg.schedule->alice[k]) : alice_encode(bases);
    t.phi1 = bob.phase;
    t.x = bob.bit;

    const PhaseFramed frame = slot_frame(cfg.address, bob.phase, alice.phase, drift[k]);
    const auto ov = cfg.overrides.find(k);
    const VisibilityOverride none{};
    const VisibilityOverride& o = ov == cfg.overrides.end() ? none : ov->second;

    Detection at_alice = detect(forward_fields(frame, source), eps);
    at_alice = apply_override(perturb_detection(at_alice, cfg.noise, eps, detector), o.v_a, eps);
    t.v_a = at_alice.visibility;
    t.y = alice_measure(t.v_a, cfg.classifier);

    t.psi1 = alice.phase;
    t.z = alice.bit;
    t.m_a = alice_raw_key(t.y, t.z, cfg.variant);

    Detection at_bob = detect(round_trip(frame, source), eps);
    at_bob = apply_override(perturb_detection(at_bob, cfg.noise, eps, detector), o.v_b, eps);
    t.v_b = at_bob.visibility;
    t.m_b = bob_raw_key(t.v_b, t.x, cfg.classifier, cfg.variant);

    if (taps) taps->push_back(tap_channel(frame, source, k));

    raw_bob.push_back(t.m_b);
    raw_alice.push_back(t.m_a);
    out.trace.push_back(t);
  }

  out.key = reconcile(raw_bob, raw_alice);
  for (auto& t : out.trace) {
    if (t.m_a && t.m_b) t.final = t.m_b;
  }
  return out;
}

}  // namespace okd

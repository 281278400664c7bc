#include "okd/experiment.hpp"

#include <cerrno>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "okd/addressing.hpp"
#include "okd/adversary.hpp"
#include "okd/sweep.hpp"

namespace okd {

namespace {

constexpr double kPiD = std::numbers::pi;

struct CommandName {
  Command command;
  std::string_view name;
};

constexpr CommandName kCommands[] = {
    {Command::Session, "session"},         {Command::SweepFig2, "sweep-fig2"},
    {Command::SweepFig3, "sweep-fig3"},    {Command::SweepFig4, "sweep-fig4"},
    {Command::Table1, "table1"},           {Command::TableS1, "tableS1"},
    {Command::Attack, "attack"},           {Command::NetworkDemo, "network-demo"},
    {Command::Capacity, "capacity"},
};

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("invalid value for field '" + std::string(key) + "': '" + s + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  if (s.empty() || s.front() == '-') {
    throw ConfigError("invalid value for field '" + std::string(key) + "': '" + s + "'");
  }
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError("invalid value for field '" + std::string(key) + "': '" + s + "'");
  }
  return v;
}

bool parse_yes_no(std::string_view key, std::string_view text) {
  if (text == "yes" || text == "true" || text == "1") return true;
  if (text == "no" || text == "false" || text == "0") return false;
  throw ConfigError("invalid value for field '" + std::string(key) + "': expected yes|no");
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// ---- commands -------------------------------------------------------------

SessionConfig session_config(const ExperimentConfig& cfg) {
  SessionConfig sc;
  sc.n_slots = cfg.n_slots;
  sc.address.bob = {cfg.phi2, "bob"};
  sc.address.alice = {cfg.psi2, "alice"};
  sc.address.alice_knows_remote = cfg.alice_knows_remote;
  sc.noise = cfg.noise;
  sc.variant = cfg.variant;
  sc.classifier = cfg.classifier;
  sc.classifier.rng_seed = cfg.seed;
  sc.noise.rng_seed = cfg.seed;
  return sc;
}

std::vector<OutputFile> cmd_session(const ExperimentConfig& cfg) {
  const SessionResult r = run_session(session_config(cfg));
  const PrivacyResult pa = privacy_amplify(r.key, cfg.sample_fraction, cfg.seed);
  const std::size_t kept = r.key.final_bob.size();

  Table summary{{"slots", "reconciled_length", "discard_fraction", "sampled", "error_rate",
                 "final_length", "keys_equal"},
                {}};
  summary.rows.push_back({std::to_string(cfg.n_slots), std::to_string(kept),
                          fmt_number(1.0 - static_cast<double>(kept) / cfg.n_slots),
                          std::to_string(pa.sampled), fmt_number(pa.error_rate),
                          std::to_string(pa.key.final_bob.size()),
                          pa.key.final_bob == pa.key.final_alice ? "yes" : "no"});
  return {{"session_trace.csv", trace_table(r.trace).to_csv()},
          {"session_summary.csv", summary.to_csv()}};
}

std::vector<OutputFile> cmd_table(const ExperimentConfig& cfg, const ReferenceTrace& ref,
                                  std::string name) {
  SessionConfig sc = session_config(cfg);
  sc.n_slots = ref.schedule.bob.size();
  sc.variant = ref.variant;
  sc.schedule = ref.schedule;
  sc.overrides = ref.overrides;
  const SessionResult r = run_session(sc);
  return {{std::move(name), trace_table(r.trace).to_csv()}};
}

std::vector<OutputFile> cmd_fig2(const ExperimentConfig& cfg) {
  PhaseFramed base;
  base.phi2 = cfg.phi2;
  SweepSpec raw{Observable::V56, base, PhaseSymbol::Phi1, 0.0, 2 * kPiD, cfg.step, {}};
  SweepSpec comp = raw;
  comp.varying = PhaseSymbol::Phi1;
  comp.tied = {{PhaseSymbol::Phi1, cfg.phi2}};
  auto v = sweep(raw);
  raw.quantity = Observable::IN56;
  auto in = sweep(raw);
  auto vc = sweep(comp);
  comp.quantity = Observable::IN56;
  auto inc = sweep(comp);

  Table t{{"phi1", "V56", "IN56", "V56_comp", "IN56_comp"}, {}};
  for (std::size_t k = 0; k < v.size(); ++k) {
    t.rows.push_back({fmt_number(v[k].x), fmt_number(v[k].value), fmt_number(in[k].value),
                      fmt_number(vc[k].value), fmt_number(inc[k].value)});
  }
  return {{"sweep_fig2.csv", t.to_csv()}};
}

std::vector<OutputFile> cmd_fig3(const ExperimentConfig& cfg) {
  PhaseFramed base;
  base.phi2 = cfg.phi2;
  base.psi2 = cfg.psi2;
  SweepSpec tracked{Observable::VB, base, PhaseSymbol::Phi1, 0.0, 2 * kPiD, cfg.step,
                    {{PhaseSymbol::Psi1, 0.0}}};
  const auto vt = sweep(tracked);
  auto fixed_psi1 = [&](double psi1) {
    SweepSpec s{Observable::VB, base, PhaseSymbol::Phi1, 0.0, 2 * kPiD, cfg.step, {}};
    s.base.psi1 = psi1;
    return sweep(s);
  };
  const auto v0 = fixed_psi1(0.0);
  const auto vphi2 = fixed_psi1(cfg.phi2);
  const auto vpi = fixed_psi1(kPiD);

  Table t{{"phi1", "VB_tracked", "VB_psi1_0", "VB_psi1_phi2", "VB_psi1_pi"}, {}};
  for (std::size_t k = 0; k < vt.size(); ++k) {
    t.rows.push_back({fmt_number(vt[k].x), fmt_number(vt[k].value), fmt_number(v0[k].value),
                      fmt_number(vphi2[k].value), fmt_number(vpi[k].value)});
  }
  return {{"sweep_fig3.csv", t.to_csv()}};
}

std::vector<OutputFile> cmd_fig4(const ExperimentConfig& cfg) {
  Table t{{"phi1", "I7", "I8", "IN78", "V78"}, {}};
  for (double x : phase_grid(0.0, 2 * kPiD, cfg.step)) {
    PhaseFramed f;
    f.phi2 = cfg.phi2;
    f.psi2 = cfg.psi2;
    f.phi1 = x;
    f.psi1 = x;
    const FieldPaird e = channel_fields(f, source_field<double>());
    t.rows.push_back({fmt_number(x), fmt_number(std::norm(e(0))), fmt_number(std::norm(e(1))),
                      fmt_number(observe(Observable::IN78, f)),
                      fmt_number(observe(Observable::V78, f))});
  }
  return {{"sweep_fig4.csv", t.to_csv()}};
}

std::vector<OutputFile> cmd_attack(const ExperimentConfig& cfg) {
  std::vector<TapRecord> taps;
  const SessionResult r = run_session(session_config(cfg), &taps);
  std::vector<TapRecord> records;
  std::vector<Bit> truth;
  for (const auto& t : r.trace) {
    if (!t.final) continue;
    records.push_back(taps[t.slot_index]);
    truth.push_back(*t.final);
  }
  if (records.empty()) throw ConfigError("attack: session produced no key bits to attack");

  Table t{{"attack", "reference", "epoch_length", "slots", "success_rate", "mutual_information"},
          {}};
  auto add = [&](std::string_view name, std::string_view ref, std::size_t epoch,
                 const AttackOutcome& o) {
    t.rows.push_back({std::string(name), std::string(ref), std::to_string(epoch),
                      std::to_string(o.guessed_bits.size()), fmt_number(o.success_rate),
                      fmt_number(o.mutual_information_estimate)});
  };
  add("random", "none", 0,
      eve_guess(records, truth, {EveStrategy::Random, EveReference::Unknown, 1, cfg.seed}));
  add("max-visibility", "unknown", cfg.epoch_length,
      eve_guess(records, truth,
                {EveStrategy::MaxVisibility, EveReference::Unknown, cfg.epoch_length, cfg.seed}));
  add("max-visibility", "granted", 0,
      eve_guess(records, truth,
                {EveStrategy::MaxVisibility, EveReference::Granted, 1, cfg.seed}));
  add("offline-flip/no-reset", "unknown", records.size(),
      offline_flip_attack(records, truth, ResetPolicy::NoReset, 1, cfg.seed));
  add("offline-flip/random-reset", "unknown", cfg.epoch_length,
      offline_flip_attack(records, truth, ResetPolicy::RandomReset, cfg.epoch_length, cfg.seed));
  return {{"attack.csv", t.to_csv()}};
}

std::vector<OutputFile> cmd_network(const ExperimentConfig& cfg) {
  const double resolution = resolution_for_epsilon(cfg.classifier.epsilon);
  const std::size_t cap = capacity(resolution);
  if (cfg.network_size > cap) {
    throw ConfigError("invalid value for field 'network_size': exceeds address capacity " +
                      std::to_string(cap));
  }
  AddressRegistry registry(Topology::NToN, resolution);
  for (std::size_t i = 0; i < cfg.network_size; ++i) {
    registry.allocate("lambda" + std::to_string(i + 1));
  }

  Table t{{"pairing", "bob_label", "bob_phase", "alice_label", "alice_phase", "alice_knows",
           "matched", "reconciled_length", "discard_fraction", "accepted"},
          {}};
  auto run_pair = [&](std::string_view pairing, const Address& bob, const Address& alice,
                      bool knows) {
    SessionConfig sc = session_config(cfg);
    sc.address = {bob, alice, knows};
    const SessionResult r = run_session(sc);
    const double discard =
        1.0 - static_cast<double>(r.key.final_bob.size()) / static_cast<double>(cfg.n_slots);
    // A channel is accepted when at least half the slots survive reconciliation.
    const bool accepted = discard <= 0.5;
    t.rows.push_back({std::string(pairing), bob.label, fmt_number(bob.control_phase), alice.label,
                      fmt_number(alice.control_phase), knows ? "yes" : "no",
                      address_matched(bob, alice) ? "yes" : "no",
                      std::to_string(r.key.final_bob.size()), fmt_number(discard),
                      accepted ? "yes" : "no"});
  };

  const auto& entries = registry.entries();
  for (const auto& a : entries) run_pair("matched", a, a, true);
  if (entries.size() >= 2) run_pair("mismatched", entries.front(), entries.back(), false);

  std::ostringstream reg;
  registry.write(reg);
  return {{"network_demo.csv", t.to_csv()}, {"registry.csv", reg.str()}};
}

std::vector<OutputFile> cmd_capacity(const ExperimentConfig& cfg) {
  const double resolution = resolution_for_epsilon(cfg.classifier.epsilon);
  Table t{{"epsilon", "resolution", "capacity"}, {}};
  t.rows.push_back({fmt_number(cfg.classifier.epsilon), fmt_number(resolution),
                    std::to_string(capacity(resolution))});
  return {{"capacity.csv", t.to_csv()}};
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& e : kCommands)
    if (e.command == c) return e.name;
  return "?";
}

Command command_from_string(std::string_view s) {
  for (const auto& e : kCommands)
    if (e.name == s) return e.command;
  throw ConfigError("invalid value for field 'command': '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  auto in_control_range = [](double p) { return p >= 0.0 && p <= kPiD + 1e-9; };
  if (n_slots == 0) throw ConfigError("invalid value for field 'slots': must be >= 1");
  if (!in_control_range(phi2)) throw ConfigError("invalid value for field 'phi2': must lie in [0, pi]");
  if (!in_control_range(psi2)) throw ConfigError("invalid value for field 'psi2': must lie in [0, pi]");
  if (!(classifier.epsilon > 0.0 && classifier.epsilon < 1.0)) {
    throw ConfigError("invalid value for field 'epsilon': must lie in (0, 1)");
  }
  if (!(noise.phase_drift_sigma >= 0.0)) {
    throw ConfigError("invalid value for field 'noise_sigma': must be >= 0");
  }
  if (!(noise.detector_noise_sigma >= 0.0)) {
    throw ConfigError("invalid value for field 'detector_sigma': must be >= 0");
  }
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
    throw ConfigError("invalid value for field 'sample_fraction': must lie in (0, 1)");
  }
  if (!(step > 0.0)) throw ConfigError("invalid value for field 'step': must be > 0");
  if (epoch_length == 0) throw ConfigError("invalid value for field 'epoch_length': must be >= 1");
  if (network_size == 0) throw ConfigError("invalid value for field 'network_size': must be >= 1");
}

void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "command") {
    cfg.command = command_from_string(value);
  } else if (key == "slots") {
    cfg.n_slots = parse_unsigned(key, value);
  } else if (key == "variant") {
    try {
      cfg.variant = variant_from_string(value);
    } catch (const std::invalid_argument&) {
      throw ConfigError("invalid value for field 'variant': expected dual|identity");
    }
  } else if (key == "phi2") {
    cfg.phi2 = parse_double(key, value);
  } else if (key == "psi2") {
    cfg.psi2 = parse_double(key, value);
  } else if (key == "alice_knows" || key == "alice-knows") {
    cfg.alice_knows_remote = parse_yes_no(key, value);
  } else if (key == "epsilon") {
    cfg.classifier.epsilon = parse_double(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(key, value);
  } else if (key == "noise_sigma" || key == "noise-sigma") {
    cfg.noise.phase_drift_sigma = parse_double(key, value);
  } else if (key == "detector_sigma" || key == "detector-sigma") {
    cfg.noise.detector_noise_sigma = parse_double(key, value);
  } else if (key == "lock_interval" || key == "lock-interval") {
    cfg.noise.lock_interval = parse_unsigned(key, value);
  } else if (key == "sample_fraction" || key == "sample-fraction") {
    cfg.sample_fraction = parse_double(key, value);
  } else if (key == "step") {
    cfg.step = parse_double(key, value);
  } else if (key == "epoch_length" || key == "epoch-length") {
    cfg.epoch_length = parse_unsigned(key, value);
  } else if (key == "network_size" || key == "network-size") {
    cfg.network_size = parse_unsigned(key, value);
  } else if (key == "out") {
    cfg.output_path = std::string(value);
  } else if (key == "version") {
    // manifest provenance, not a setting
  } else {
    throw ConfigError("unknown field '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    set_field(cfg, trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "command=" << to_string(cfg.command) << '\n'
     << "slots=" << cfg.n_slots << '\n'
     << "variant=" << to_string(cfg.variant) << '\n'
     << "phi2=" << exact(cfg.phi2) << '\n'
     << "psi2=" << exact(cfg.psi2) << '\n'
     << "alice_knows=" << (cfg.alice_knows_remote ? "yes" : "no") << '\n'
     << "epsilon=" << exact(cfg.classifier.epsilon) << '\n'
     << "seed=" << cfg.seed << '\n'
     << "noise_sigma=" << exact(cfg.noise.phase_drift_sigma) << '\n'
     << "detector_sigma=" << exact(cfg.noise.detector_noise_sigma) << '\n'
     << "lock_interval=" << cfg.noise.lock_interval << '\n'
     << "sample_fraction=" << exact(cfg.sample_fraction) << '\n'
     << "step=" << exact(cfg.step) << '\n'
     << "epoch_length=" << cfg.epoch_length << '\n'
     << "network_size=" << cfg.network_size << '\n';
  return os.str();
}

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string fmt_bit(const MaybeBit& b) { return b ? std::to_string(to_int(*b)) : "X"; }

Table trace_table(const std::vector<SessionTrace>& trace) {
  Table t{{"slot", "phi1", "x", "v_a", "y", "psi1", "z", "m_a", "v_b", "m_b", "final"}, {}};
  for (const auto& s : trace) {
    t.rows.push_back({std::to_string(s.slot_index + 1), fmt_number(s.phi1),
                      std::to_string(to_int(s.x)), fmt_number(s.v_a), fmt_bit(s.y),
                      fmt_number(s.psi1), std::to_string(to_int(s.z)), fmt_bit(s.m_a),
                      fmt_number(s.v_b), fmt_bit(s.m_b), fmt_bit(s.final)});
  }
  return t;
}

std::vector<OutputFile> execute(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::Session: return cmd_session(cfg);
    case Command::SweepFig2: return cmd_fig2(cfg);
    case Command::SweepFig3: return cmd_fig3(cfg);
    case Command::SweepFig4: return cmd_fig4(cfg);
    case Command::Table1: return cmd_table(cfg, table1_reference(), "table1.csv");
    case Command::TableS1: return cmd_table(cfg, table_s1_reference(), "tableS1.csv");
    case Command::Attack: return cmd_attack(cfg);
    case Command::NetworkDemo: return cmd_network(cfg);
    case Command::Capacity: return cmd_capacity(cfg);
  }
  throw ConfigError("invalid value for field 'command'");
}

void run(const ExperimentConfig& cfg, std::ostream& console) {
  const std::vector<OutputFile> files = execute(cfg);
  if (cfg.output_path.empty()) {
    for (const auto& f : files) {
      if (files.size() > 1) console << "# " << f.name << '\n';
      console << f.content;
    }
    return;
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + cfg.output_path + "'");
  }
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << content;
    os.flush();
    if (!os) throw IoError("cannot write '" + p.string() + "'");
  };
  for (const auto& f : files) write(f.name, f.content);
  write("manifest.txt", to_config_text(cfg) + "version=" + std::string(kVersion) + '\n');
}

ReferenceTrace table1_reference() {
  using B = Bit;
  ReferenceTrace r;
  r.variant = ProtocolVariant::DualRelation;
  r.schedule.bob = {B::Zero, B::Zero, B::One, B::Zero, B::One,
                    B::One,  B::Zero, B::One, B::Zero, B::One};
  r.schedule.alice = {B::One, B::Zero, B::Zero, B::One, B::One,
                      B::One, B::Zero, B::Zero, B::One, B::Zero};
  r.overrides[2].v_b = 0.9;
  r.overrides[5].v_a = -0.8;
  return r;
}

ReferenceTrace table_s1_reference() {
  using B = Bit;
  ReferenceTrace r;
  r.variant = ProtocolVariant::IdentityOnly;
  r.schedule.bob = {B::Zero, B::Zero, B::One, B::Zero, B::One,
                    B::One,  B::Zero, B::One, B::Zero, B::Zero};
  r.schedule.alice = {B::One, B::Zero, B::Zero, B::One, B::One,
                      B::One, B::Zero, B::Zero, B::One, B::Zero};
  r.overrides[2].v_b = 0.9;
  r.overrides[5].v_a = -0.8;
  return r;
}

}  // namespace okd

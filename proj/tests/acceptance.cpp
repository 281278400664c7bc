// End-to-end acceptance checks. One line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "okd/adversary.hpp"
#include "okd/closed_form.hpp"
#include "okd/experiment.hpp"
#include "okd/optics.hpp"
#include "okd/protocol.hpp"
#include "okd/sweep.hpp"

using namespace okd;
using std::numbers::pi;

namespace {

struct Check {
  bool ok{true};
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (std::abs(got - want) > tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.15g, want %.15g", what.c_str(), got, want);
      expect(false, buf);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const Transfer2d& a, const Transfer2d& b) { return (a - b).cwiseAbs().maxCoeff(); }

PhaseFramed frame(double phi1, double phi2, double psi1, double psi2) {
  return PhaseFramed{phi1, phi2, psi1, psi2, 0.0};
}

Check closed_forms() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const PhaseFramed f = frame(u(rng), u(rng), u(rng), u(rng));
    worst = std::max(worst, max_abs_diff(forward_mzi(f), closed_form::forward_matrix(f)));
    worst = std::max(worst, max_abs_diff(channel_operator(f), closed_form::channel_matrix(f)));
    worst = std::max(worst, max_abs_diff(round_trip_operator(f), closed_form::round_trip_matrix(f)));
  }
  c.near(worst, 0.0, 1e-12, "max elementwise deviation");
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "runtime " + std::to_string(t) + " s");
  return c;
}

Check forward_directionality() {
  Check c;
  for (double phi2 : {0.0, pi / 3}) {
    for (double base : {0.0, pi}) {
      const PhaseFramed f = frame(base + phi2, phi2, 0.0, 0.0);
      const double want_v = base == 0.0 ? 1.0 : -1.0;
      c.near(observe(Observable::V56, f), want_v, 1e-12, "V56");
      c.near(observe(Observable::IN56, f), 1.0, 1e-12, "IN56");
    }
    // The same through the compensated sweep.
    SweepSpec s;
    s.quantity = Observable::V56;
    s.base.phi2 = phi2;
    s.tied = {{PhaseSymbol::Phi1, phi2}};
    s.start = 0.0;
    s.stop = 2 * pi;
    s.step = pi;
    const auto pts = sweep(s);
    c.expect(pts.size() == 2, "sweep grid size");
    if (pts.size() == 2) {
      c.near(pts[0].value, 1.0, 1e-12, "sweep V56(0)");
      c.near(pts[1].value, -1.0, 1e-12, "sweep V56(pi)");
    }
  }
  return c;
}

Check return_visibility() {
  Check c;
  const double a = 2 * pi / 5;
  for (double base : {0.0, pi}) {
    c.near(observe(Observable::VB, frame(base, a, base, a)), -1.0, 1e-12, "matched V_B");
    const double v = observe(Observable::VB, frame(base, a, base, 0.0));
    c.near(v, -0.30901699437494745, 1e-9, "mismatched V_B");
    c.expect(classify(v, 0.05) == Classification::Error, "mismatch not classified Error");
  }
  return c;
}

Check inbound_invariance() {
  Check c;
  const double a = 2 * pi / 5;
  for (double psi2 : {a, 0.0}) {
    auto values = [&](double key) {
      const PhaseFramed f = frame(key, a, key, psi2);
      const FieldPaird e = channel_fields(f, source_field<double>());
      return std::vector<double>{observe(Observable::IN78, f), std::norm(e(0)), std::norm(e(1)),
                                 observe(Observable::V78, f)};
    };
    const auto v0 = values(0.0), vpi = values(pi);
    for (std::size_t i = 0; i < v0.size(); ++i) c.near(v0[i], vpi[i], 1e-12, "key-pair invariance");
    const double want_in = psi2 == 0.0 ? 1.0 + std::sin(a) : 1.0;
    c.near(v0[0], want_in, 1e-9, "IN78");
    c.near(1.0 + std::sin(a), 1.9510565162951536, 1e-9, "1+sin(2pi/5)");
  }
  return c;
}

std::string final_string(const ReferenceTrace& ref) {
  SessionConfig sc;
  sc.n_slots = ref.schedule.bob.size();
  sc.variant = ref.variant;
  sc.schedule = ref.schedule;
  sc.overrides = ref.overrides;
  std::string s;
  for (const auto& t : run_session(sc).trace) s += fmt_bit(t.final);
  return s;
}

Check reference_traces() {
  Check c;
  const std::string t1 = final_string(table1_reference());
  const std::string s1 = final_string(table_s1_reference());
  c.expect(t1 == "01X01X1000", "table1 final key " + t1);
  c.expect(s1 == "X0XX1X0XX0", "tableS1 final key " + s1);
  return c;
}

Check no_sifting() {
  Check c;
  SessionConfig sc;
  sc.n_slots = 10000;
  sc.classifier.rng_seed = 31;
  sc.address.bob.control_phase = sc.address.alice.control_phase = 2 * pi / 5;
  const SessionResult dual = run_session(sc);
  c.expect(dual.key.final_bob.size() == 10000,
           "DualRelation length " + std::to_string(dual.key.final_bob.size()));
  c.expect(dual.key.final_bob == dual.key.final_alice, "DualRelation keys differ");

  sc.variant = ProtocolVariant::IdentityOnly;
  const SessionResult id = run_session(sc);
  const double len = static_cast<double>(id.key.final_bob.size());
  c.expect(std::abs(len - 5000.0) <= 250.0, "IdentityOnly length " + std::to_string(len));
  c.expect(id.key.final_bob == id.key.final_alice, "IdentityOnly keys differ");
  return c;
}

Check eve() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  SessionConfig sc;
  sc.n_slots = 10000;
  sc.classifier.rng_seed = 47;
  sc.address.bob.control_phase = sc.address.alice.control_phase = 2 * pi / 5;
  std::vector<TapRecord> taps;
  const SessionResult r = run_session(sc, &taps);
  std::vector<Bit> truth = r.key.final_bob;

  const AttackOutcome mv =
      eve_guess(taps, truth, {EveStrategy::MaxVisibility, EveReference::Unknown, 1, 47});
  c.expect(mv.success_rate >= 0.48 && mv.success_rate <= 0.52,
           "MaxVisibility success " + std::to_string(mv.success_rate));
  c.expect(mv.mutual_information_estimate <= 0.01,
           "mutual information " + std::to_string(mv.mutual_information_estimate));

  const AttackOutcome nr = offline_flip_attack(taps, truth, ResetPolicy::NoReset, 1, 47);
  c.expect(nr.success_rate == 1.0, "NoReset success " + std::to_string(nr.success_rate));
  const AttackOutcome rr = offline_flip_attack(taps, truth, ResetPolicy::RandomReset, 1, 47);
  c.expect(rr.success_rate >= 0.48 && rr.success_rate <= 0.52,
           "RandomReset success " + std::to_string(rr.success_rate));

  const double t = seconds_since(t0);
  c.expect(t < 10.0, "runtime " + std::to_string(t) + " s");
  return c;
}

Check physics() {
  Check c;
  const double lc = coherence_length(1e10);
  c.expect(std::abs(lc - 0.02998) <= 0.001 * 0.02998, "coherence length " + std::to_string(lc));
  return c;
}

Check noise_monotonic() {
  Check c;
  double prev = -1.0;
  for (double sigma : {0.0, 0.05, 0.1, 0.2, 0.5}) {
    SessionConfig sc;
    sc.n_slots = 1000;
    sc.classifier.rng_seed = 5;
    sc.noise = {sigma, 0.0, 0, 5};
    const SessionResult r = run_session(sc);
    const double discard = 1.0 - static_cast<double>(r.key.final_bob.size()) / 1000.0;
    c.expect(discard >= prev, "discard fraction fell at sigma " + std::to_string(sigma));
    prev = discard;
  }
  return c;
}

Check capacity_demo() {
  Check c;
  const std::size_t cap = capacity(resolution_for_epsilon(0.05));
  c.expect(cap == 10, "capacity " + std::to_string(cap));

  ExperimentConfig cfg;
  cfg.command = Command::NetworkDemo;
  cfg.network_size = 3;
  cfg.n_slots = 1000;
  const auto files = execute(cfg);
  const std::string& csv = files.at(0).content;
  std::size_t accepted_matched = 0, rejected_mismatched = 0;
  std::size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const std::string row = csv.substr(pos, end - pos);
    const bool accepted = row.ends_with(",yes");
    if (row.starts_with("matched,") && accepted) ++accepted_matched;
    if (row.starts_with("mismatched,") && !accepted) ++rejected_mismatched;
    pos = end + 1;
  }
  c.expect(accepted_matched == 3, "matched channels accepted: " + std::to_string(accepted_matched));
  c.expect(rejected_mismatched == 1, "mismatched pairing not rejected");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {"matrix products match closed forms", closed_forms},
      {"forward interferometer directionality", forward_directionality},
      {"round-trip visibility, matched and mismatched", return_visibility},
      {"inbound key-pair invariance", inbound_invariance},
      {"reference traces", reference_traces},
      {"determinism and no sifting", no_sifting},
      {"eavesdropper bound", eve},
      {"coherence length", physics},
      {"noise monotonicity", noise_monotonic},
      {"address capacity and network demo", capacity_demo},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].run();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %2zu  %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                c.ok ? "" : "  -- ", c.detail.c_str());
    failures += !c.ok;
  }
  return failures;
}

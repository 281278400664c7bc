#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "okd/noise.hpp"
#include "okd/protocol.hpp"

namespace okd {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Command {
  Session,
  SweepFig2,
  SweepFig3,
  SweepFig4,
  Table1,
  TableS1,
  Attack,
  NetworkDemo,
  Capacity
};

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

/// Invalid configuration; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Command command{Command::Session};
  std::size_t n_slots{1000};
  ProtocolVariant variant{ProtocolVariant::DualRelation};
  double phi2{0};
  double psi2{0};
  bool alice_knows_remote{true};
  NoiseConfig noise;
  ClassifierConfig classifier;
  std::string output_path;
  std::uint64_t seed{1};
  double sample_fraction{0.1};
  double step{kPi<double> / 100};
  std::size_t epoch_length{1};
  std::size_t network_size{3};

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Sets one field from its key=value spelling. Throws ConfigError.
void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat key=value text; '#' starts a comment line. Unknown keys are errors.
void apply_config_text(ExperimentConfig& cfg, std::istream& is);

/// Serialized form accepted back by apply_config_text (output_path excluded).
std::string to_config_text(const ExperimentConfig& cfg);

/// A column-labeled comma-separated table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Formats a number with 12 significant digits.
std::string fmt_number(double v);
std::string fmt_bit(const MaybeBit& b);

struct OutputFile {
  std::string name;
  std::string content;
};

/// Executes the configured command and returns its output files.
std::vector<OutputFile> execute(const ExperimentConfig& cfg);

/// execute() plus I/O: writes into cfg.output_path (a directory, created if
/// needed) together with manifest.txt, or to `console` when no path is set.
/// Throws IoError when the destination cannot be written.
void run(const ExperimentConfig& cfg, std::ostream& console);

Table trace_table(const std::vector<SessionTrace>& trace);

/// Basis draws and recorded visibility errors of the two reference traces.
struct ReferenceTrace {
  BasisSchedule schedule;
  std::map<std::size_t, VisibilityOverride> overrides;
  ProtocolVariant variant;
};

ReferenceTrace table1_reference();
ReferenceTrace table_s1_reference();

}  // namespace okd

#pragma once

// Deck model and the SPICE-subset reader/writer. The grammar is documented in
// docs/deck-format.md.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace minispice {

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

enum class Suffix { None, Femto, Pico, Nano, Micro, Milli, Kilo, Mega, Giga, Tera };

double multiplier(Suffix suffix);

struct ValueToken {
  double magnitude = 0.0;
  Suffix suffix = Suffix::None;

  double value() const { return magnitude * multiplier(suffix); }
  bool operator==(const ValueToken&) const = default;
};

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

// "<message> at line N"
std::string format_diagnostic(const Diagnostic& d);

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

ValueToken parse_value_token(std::string_view token);
std::optional<ValueToken> try_parse_value_token(std::string_view token);
double parse_value(std::string_view token);

// Shortest decimal text that reads back to exactly the same double.
std::string format_value(double v);

// ---------------------------------------------------------------------------
// Waveforms
// ---------------------------------------------------------------------------

struct DcWave {
  double value = 0.0;
  bool operator==(const DcWave&) const = default;
};

struct SinWave {
  double offset = 0.0;
  double amplitude = 0.0;
  double freq = 0.0;
  bool operator==(const SinWave&) const = default;
};

struct PulseWave {
  double v1 = 0.0;
  double v2 = 0.0;
  double delay = 0.0;
  double rise = 0.0;
  double fall = 0.0;
  double width = 0.0;
  double period = 0.0;
  bool operator==(const PulseWave&) const = default;
};

using SourceWaveform = std::variant<DcWave, SinWave, PulseWave>;

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct Resistor {
  std::string name, n1, n2;
  double ohms = 0.0;
  bool operator==(const Resistor&) const = default;
};

struct Capacitor {
  std::string name, n1, n2;
  double farads = 0.0;
  std::optional<double> ic;
  bool operator==(const Capacitor&) const = default;
};

struct Inductor {
  std::string name, n1, n2;
  double henries = 0.0;
  std::optional<double> ic;
  bool operator==(const Inductor&) const = default;
};

// Shared shape of independent V and I sources. For a current source the
// value is the current flowing from npos through the source to nneg.
struct SourceCard {
  std::string name, npos, nneg;
  SourceWaveform waveform = DcWave{};
  std::optional<double> ac_mag;
  std::optional<double> ac_phase;  // degrees
  bool operator==(const SourceCard&) const = default;
};

struct VSource : SourceCard {
  bool operator==(const VSource&) const = default;
};
struct ISource : SourceCard {
  bool operator==(const ISource&) const = default;
};

struct Diode {
  std::string name, anode, cathode, model;
  bool operator==(const Diode&) const = default;
};

struct Mosfet {
  std::string name, drain, gate, source, model;
  bool operator==(const Mosfet&) const = default;
};

using ElementBody =
    std::variant<Resistor, Capacitor, Inductor, VSource, ISource, Diode, Mosfet>;

struct Element {
  ElementBody body;
  SourceLoc loc;

  // Structural equality; the source location is diagnostic metadata only.
  bool operator==(const Element& other) const { return body == other.body; }

  template <class T>
  const T* as() const { return std::get_if<T>(&body); }
};

const std::string& element_name(const Element& e);

// Terminal nodes in card order. MOSFETs report drain, gate, source.
std::vector<std::string> element_nodes(const Element& e);

bool is_nonlinear(const Element& e);

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

enum class ModelKind { Diode, Nmos, Pmos };

std::string_view to_string(ModelKind kind);

struct ModelCard {
  std::string name;
  ModelKind kind = ModelKind::Diode;
  std::map<std::string, double> params;  // upper-case keys, as given on the card
  bool operator==(const ModelCard&) const = default;
};

// ---------------------------------------------------------------------------
// Directives
// ---------------------------------------------------------------------------

enum class AnalysisKind { Op, Dc, Tran, Ac };

std::string_view to_string(AnalysisKind kind);

struct OpDirective {
  bool operator==(const OpDirective&) const = default;
};

struct DcDirective {
  std::string source;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  bool operator==(const DcDirective&) const = default;
};

struct TranDirective {
  double tstep = 0.0;
  double tstop = 0.0;
  bool uic = false;
  bool operator==(const TranDirective&) const = default;
};

enum class AcScale { Dec, Lin };

struct AcDirective {
  AcScale scale = AcScale::Dec;
  int npoints = 1;
  double fstart = 1.0;
  double fstop = 1.0;
  bool operator==(const AcDirective&) const = default;
};

struct IcDirective {
  std::vector<std::pair<std::string, double>> voltages;
  bool operator==(const IcDirective&) const = default;
};

struct Probe {
  enum class Kind { Voltage, Current };
  Kind kind = Kind::Voltage;
  std::string target;  // node name for V(), source name for I()

  std::string label() const;
  bool operator==(const Probe&) const = default;
};

struct PrintDirective {
  std::optional<AnalysisKind> analysis;  // empty: applies to every analysis
  std::vector<Probe> probes;
  bool operator==(const PrintDirective&) const = default;
};

using Directive = std::variant<OpDirective, DcDirective, TranDirective, AcDirective,
                               IcDirective, PrintDirective>;

// ---------------------------------------------------------------------------
// Deck
// ---------------------------------------------------------------------------

struct Netlist {
  std::string title;
  std::vector<Element> elements;
  std::map<std::string, ModelCard> models;
  std::vector<Directive> directives;

  bool operator==(const Netlist&) const = default;

  // Case-insensitive lookups.
  const Element* find_element(std::string_view name) const;
  const ModelCard* find_model(std::string_view name) const;

  // Merged .IC node voltages, later cards overriding earlier ones.
  std::map<std::string, double> initial_conditions() const;

  bool has_nonlinear_devices() const;
};

// Canonical spellings: element and model names upper-case, node names
// lower-case. Ground is the node "0".
std::string canonical_element_name(std::string_view s);
std::string canonical_node_name(std::string_view s);

Netlist parse_netlist(std::string_view text);
std::string write_netlist(const Netlist& netlist);

}  // namespace minispice

#include "minispice/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace minispice {

namespace {

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

}  // namespace

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

double multiplier(Suffix suffix) {
  switch (suffix) {
    case Suffix::None: return 1.0;
    case Suffix::Femto: return 1e-15;
    case Suffix::Pico: return 1e-12;
    case Suffix::Nano: return 1e-9;
    case Suffix::Micro: return 1e-6;
    case Suffix::Milli: return 1e-3;
    case Suffix::Kilo: return 1e3;
    case Suffix::Mega: return 1e6;
    case Suffix::Giga: return 1e9;
    case Suffix::Tera: return 1e12;
  }
  return 1.0;
}

std::string format_diagnostic(const Diagnostic& d) {
  return d.message + " at line " + std::to_string(d.line);
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += '\n';
    out += format_diagnostic(d);
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::optional<ValueToken> try_parse_value_token(std::string_view token) {
  std::size_t pos = 0;
  const std::size_t n = token.size();
  if (pos < n && (token[pos] == '+' || token[pos] == '-')) ++pos;
  std::size_t digits = 0;
  while (pos < n && is_digit(token[pos])) { ++pos; ++digits; }
  if (pos < n && token[pos] == '.') {
    ++pos;
    while (pos < n && is_digit(token[pos])) { ++pos; ++digits; }
  }
  if (digits == 0) return std::nullopt;
  // Exponent only when followed by at least one digit; otherwise the 'e' is a
  // trailing unit letter.
  if (pos < n && (token[pos] == 'e' || token[pos] == 'E')) {
    std::size_t p = pos + 1;
    if (p < n && (token[p] == '+' || token[p] == '-')) ++p;
    if (p < n && is_digit(token[p])) {
      while (p < n && is_digit(token[p])) ++p;
      pos = p;
    }
  }

  // from_chars rejects a leading '+'.
  std::size_t begin = token[0] == '+' ? 1 : 0;
  double magnitude = 0.0;
  auto [ptr, ec] = std::from_chars(token.data() + begin, token.data() + pos, magnitude);
  if (ec != std::errc() || ptr != token.data() + pos || !std::isfinite(magnitude)) {
    return std::nullopt;
  }

  std::string_view rest = token.substr(pos);
  if (!std::all_of(rest.begin(), rest.end(), is_alpha)) return std::nullopt;

  ValueToken out{magnitude, Suffix::None};
  const std::string lower = to_lower(rest);
  if (lower.starts_with("meg")) {
    out.suffix = Suffix::Mega;
  } else if (!lower.empty()) {
    switch (lower[0]) {
      case 'f': out.suffix = Suffix::Femto; break;
      case 'p': out.suffix = Suffix::Pico; break;
      case 'n': out.suffix = Suffix::Nano; break;
      case 'u': out.suffix = Suffix::Micro; break;
      case 'm': out.suffix = Suffix::Milli; break;
      case 'k': out.suffix = Suffix::Kilo; break;
      case 'g': out.suffix = Suffix::Giga; break;
      case 't': out.suffix = Suffix::Tera; break;
      default: break;  // bare unit letters, e.g. "5V"
    }
  }
  return out;
}

ValueToken parse_value_token(std::string_view token) {
  if (auto v = try_parse_value_token(token)) return *v;
  throw ParseError({Diagnostic{0, 0, "malformed number '" + std::string(token) + "'"}});
}

double parse_value(std::string_view token) { return parse_value_token(token).value(); }

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Element helpers
// ---------------------------------------------------------------------------

const std::string& element_name(const Element& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, e.body);
}

std::vector<std::string> element_nodes(const Element& e) {
  struct Visitor {
    std::vector<std::string> operator()(const Resistor& r) const { return {r.n1, r.n2}; }
    std::vector<std::string> operator()(const Capacitor& c) const { return {c.n1, c.n2}; }
    std::vector<std::string> operator()(const Inductor& l) const { return {l.n1, l.n2}; }
    std::vector<std::string> operator()(const SourceCard& s) const { return {s.npos, s.nneg}; }
    std::vector<std::string> operator()(const Diode& d) const { return {d.anode, d.cathode}; }
    std::vector<std::string> operator()(const Mosfet& m) const {
      return {m.drain, m.gate, m.source};
    }
  };
  return std::visit(Visitor{}, e.body);
}

bool is_nonlinear(const Element& e) { return e.as<Diode>() || e.as<Mosfet>(); }

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Diode: return "D";
    case ModelKind::Nmos: return "NMOS";
    case ModelKind::Pmos: return "PMOS";
  }
  return "?";
}

std::string_view to_string(AnalysisKind kind) {
  switch (kind) {
    case AnalysisKind::Op: return "op";
    case AnalysisKind::Dc: return "dc";
    case AnalysisKind::Tran: return "tran";
    case AnalysisKind::Ac: return "ac";
  }
  return "?";
}

std::string Probe::label() const {
  return (kind == Kind::Voltage ? "V(" : "I(") + target + ")";
}

std::string canonical_element_name(std::string_view s) { return to_upper(s); }
std::string canonical_node_name(std::string_view s) { return to_lower(s); }

const Element* Netlist::find_element(std::string_view name) const {
  const std::string key = canonical_element_name(name);
  for (const auto& e : elements) {
    if (element_name(e) == key) return &e;
  }
  return nullptr;
}

const ModelCard* Netlist::find_model(std::string_view name) const {
  auto it = models.find(canonical_element_name(name));
  return it == models.end() ? nullptr : &it->second;
}

std::map<std::string, double> Netlist::initial_conditions() const {
  std::map<std::string, double> out;
  for (const auto& d : directives) {
    if (const auto* ic = std::get_if<IcDirective>(&d)) {
      for (const auto& [node, v] : ic->voltages) out[node] = v;
    }
  }
  return out;
}

bool Netlist::has_nonlinear_devices() const {
  return std::any_of(elements.begin(), elements.end(),
                     [](const Element& e) { return is_nonlinear(e); });
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

struct Card {
  int line = 0;
  std::vector<Token> tokens;
};

void tokenize_into(std::string_view line, int line_no, int column_offset,
                   std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')') {
      ++i;
      continue;
    }
    if (c == '=') {
      out.push_back({"=", line_no, static_cast<int>(i) + 1 + column_offset});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size()) {
      const char d = line[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ',' || d == '(' || d == ')' ||
          d == '=') {
        break;
      }
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), line_no,
                   static_cast<int>(start) + 1 + column_offset});
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

class DeckReader {
 public:
  explicit DeckReader(std::string_view text) : text_(text) {}

  Netlist read() {
    const auto lines = split_lines(text_);
    if (!lines.empty()) netlist_.title = std::string(trim(lines[0]));

    std::vector<Card> cards;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const int line_no = static_cast<int>(i) + 1;
      std::string_view raw = lines[i];
      std::string_view line = trim(raw);
      if (line.empty() || line.front() == '*') continue;
      const int offset = static_cast<int>(line.data() - raw.data());
      if (line.front() == '+') {
        if (cards.empty()) {
          error(line_no, 1, "continuation line without a preceding card");
          continue;
        }
        tokenize_into(line.substr(1), line_no, offset + 1, cards.back().tokens);
        continue;
      }
      if (to_upper(line.substr(0, std::min<std::size_t>(line.size(), 4))) == ".END" &&
          (line.size() == 4 || std::isspace(static_cast<unsigned char>(line[4])))) {
        break;
      }
      Card card{line_no, {}};
      tokenize_into(line, line_no, offset, card.tokens);
      cards.push_back(std::move(card));
    }

    for (const auto& card : cards) read_card(card);
    cross_check();

    if (!diagnostics_.empty()) {
      std::stable_sort(diagnostics_.begin(), diagnostics_.end(),
                       [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
      throw ParseError(std::move(diagnostics_));
    }
    return std::move(netlist_);
  }

 private:
  void error(int line, int column, std::string message) {
    diagnostics_.push_back({line, column, std::move(message)});
  }

  void error(const Token& t, std::string message) { error(t.line, t.column, std::move(message)); }

  std::optional<double> number(const Token& t) {
    if (auto v = try_parse_value_token(t.text)) return v->value();
    error(t, "malformed number '" + t.text + "'");
    return std::nullopt;
  }

  bool arity(const Card& card, std::size_t expected, std::string_view what) {
    if (card.tokens.size() == expected) return true;
    error(card.tokens.front(), std::string(what) + " card '" + card.tokens.front().text +
                                   "' expects " + std::to_string(expected - 1) +
                                   " fields, got " + std::to_string(card.tokens.size() - 1));
    return false;
  }

  void add_element(const Card& card, ElementBody body) {
    netlist_.elements.push_back({std::move(body), {card.line, card.tokens.front().column}});
  }

  void read_card(const Card& card) {
    if (card.tokens.empty()) return;
    const Token& head = card.tokens.front();
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(head.text[0])));
    switch (kind) {
      case 'R': return read_passive<Resistor>(card, "resistor");
      case 'C': return read_passive<Capacitor>(card, "capacitor");
      case 'L': return read_passive<Inductor>(card, "inductor");
      case 'V': return read_source<VSource>(card);
      case 'I': return read_source<ISource>(card);
      case 'D': return read_diode(card);
      case 'M': return read_mosfet(card);
      case '.': return read_directive(card);
      default:
        error(head, "unknown element '" + std::string(1, head.text[0]) + "'");
    }
  }

  template <class T>
  void read_passive(const Card& card, std::string_view what) {
    const auto& t = card.tokens;
    constexpr bool kReactive = !std::is_same_v<T, Resistor>;
    const bool has_ic = kReactive && t.size() == 7;
    if (!(has_ic || arity(card, 4, what))) return;
    auto value = number(t[3]);
    if (!value) return;
    if (!(*value > 0.0)) {
      error(t[3], std::string(what) + " '" + t[0].text + "' value must be positive");
      return;
    }
    T elem;
    elem.name = canonical_element_name(t[0].text);
    elem.n1 = canonical_node_name(t[1].text);
    elem.n2 = canonical_node_name(t[2].text);
    if constexpr (std::is_same_v<T, Resistor>) {
      elem.ohms = *value;
    } else {
      if constexpr (std::is_same_v<T, Capacitor>) elem.farads = *value;
      else elem.henries = *value;
      if (has_ic) {
        if (to_upper(t[4].text) != "IC" || t[5].text != "=") {
          error(t[4], "expected IC=<value> on '" + t[0].text + "'");
          return;
        }
        auto ic = number(t[6]);
        if (!ic) return;
        elem.ic = *ic;
      }
    }
    add_element(card, std::move(elem));
  }

  std::optional<std::vector<double>> numbers(const Card& card, std::size_t& i, std::size_t count,
                                             std::string_view what) {
    const auto& t = card.tokens;
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (i >= t.size()) {
        error(t.front(), std::string(what) + " on '" + t.front().text + "' expects " +
                             std::to_string(count) + " values, got " + std::to_string(k));
        return std::nullopt;
      }
      auto v = number(t[i]);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }

  template <class T>
  void read_source(const Card& card) {
    const auto& t = card.tokens;
    if (t.size() < 4) {
      error(t.front(), "source card '" + t.front().text + "' expects nodes and a value");
      return;
    }
    T src;
    src.name = canonical_element_name(t[0].text);
    src.npos = canonical_node_name(t[1].text);
    src.nneg = canonical_node_name(t[2].text);
    bool have_wave = false;
    std::size_t i = 3;
    while (i < t.size()) {
      const std::string key = to_upper(t[i].text);
      if (key == "DC") {
        ++i;
        auto v = numbers(card, i, 1, "DC");
        if (!v) return;
        src.waveform = DcWave{(*v)[0]};
        have_wave = true;
      } else if (key == "SIN") {
        ++i;
        auto v = numbers(card, i, 3, "SIN");
        if (!v) return;
        src.waveform = SinWave{(*v)[0], (*v)[1], (*v)[2]};
        have_wave = true;
      } else if (key == "PULSE") {
        const Token& at = t[i];
        ++i;
        auto v = numbers(card, i, 7, "PULSE");
        if (!v) return;
        PulseWave p{(*v)[0], (*v)[1], (*v)[2], (*v)[3], (*v)[4], (*v)[5], (*v)[6]};
        if (p.delay < 0 || p.rise < 0 || p.fall < 0 || p.width < 0 || p.period < 0) {
          error(at, "PULSE timing fields must be non-negative");
          return;
        }
        if (p.period > 0 && p.period < p.rise + p.fall + p.width) {
          error(at, "PULSE period shorter than rise+width+fall");
          return;
        }
        src.waveform = p;
        have_wave = true;
      } else if (key == "AC") {
        ++i;
        auto v = numbers(card, i, 1, "AC");
        if (!v) return;
        src.ac_mag = (*v)[0];
        if (i < t.size()) {
          if (auto ph = try_parse_value_token(t[i].text)) {
            src.ac_phase = ph->value();
            ++i;
          }
        }
      } else if (!have_wave && try_parse_value_token(t[i].text)) {
        src.waveform = DcWave{*number(t[i])};
        have_wave = true;
        ++i;
      } else {
        error(t[i], "unexpected token '" + t[i].text + "' on source '" + t[0].text + "'");
        return;
      }
    }
    if (!have_wave && !src.ac_mag) {
      error(t.front(), "source card '" + t.front().text + "' has no value");
      return;
    }
    add_element(card, std::move(src));
  }

  void read_diode(const Card& card) {
    if (!arity(card, 4, "diode")) return;
    const auto& t = card.tokens;
    add_element(card, Diode{canonical_element_name(t[0].text), canonical_node_name(t[1].text),
                            canonical_node_name(t[2].text), canonical_element_name(t[3].text)});
  }

  void read_mosfet(const Card& card) {
    if (!arity(card, 5, "mosfet")) return;
    const auto& t = card.tokens;
    add_element(card, Mosfet{canonical_element_name(t[0].text), canonical_node_name(t[1].text),
                             canonical_node_name(t[2].text), canonical_node_name(t[3].text),
                             canonical_element_name(t[4].text)});
  }

  void read_directive(const Card& card) {
    const auto& t = card.tokens;
    const std::string key = to_upper(t[0].text);
    if (key == ".MODEL") return read_model(card);
    if (key == ".OP") {
      if (arity(card, 1, ".OP")) push_directive(card, OpDirective{});
      return;
    }
    if (key == ".DC") return read_dc(card);
    if (key == ".TRAN") return read_tran(card);
    if (key == ".AC") return read_ac(card);
    if (key == ".IC") return read_ic(card);
    if (key == ".PRINT") return read_print(card);
    error(t[0], "unknown directive '" + t[0].text + "'");
  }

  void push_directive(const Card& card, Directive d) {
    netlist_.directives.push_back(std::move(d));
    directive_lines_.push_back(card.line);
  }

  void read_model(const Card& card) {
    const auto& t = card.tokens;
    if (t.size() < 3) {
      error(t[0], ".MODEL expects a name and a type");
      return;
    }
    ModelCard model;
    model.name = canonical_element_name(t[1].text);
    const std::string type = to_upper(t[2].text);
    if (type == "D") model.kind = ModelKind::Diode;
    else if (type == "NMOS") model.kind = ModelKind::Nmos;
    else if (type == "PMOS") model.kind = ModelKind::Pmos;
    else {
      error(t[2], "unknown model type '" + t[2].text + "'");
      return;
    }
    const std::set<std::string> allowed =
        model.kind == ModelKind::Diode ? std::set<std::string>{"IS", "N"}
                                       : std::set<std::string>{"VTO", "KP", "W", "L", "LAMBDA"};
    bool ok = true;
    for (std::size_t i = 3; i < t.size(); i += 3) {
      if (i + 2 >= t.size() || t[i + 1].text != "=") {
        error(t[i], "expected NAME=value in .MODEL " + t[1].text);
        ok = false;
        break;
      }
      const std::string pname = to_upper(t[i].text);
      if (!allowed.contains(pname)) {
        error(t[i], "parameter '" + t[i].text + "' not valid for " +
                        std::string(to_string(model.kind)) + " model");
        ok = false;
        continue;
      }
      auto v = number(t[i + 2]);
      if (!v) {
        ok = false;
        continue;
      }
      const bool must_be_positive = pname != "VTO" && pname != "LAMBDA";
      if ((must_be_positive && !(*v > 0)) || (pname == "LAMBDA" && *v < 0)) {
        error(t[i + 2], "parameter " + pname + " out of range in .MODEL " + t[1].text);
        ok = false;
        continue;
      }
      model.params[pname] = *v;
    }
    if (!ok) return;
    if (netlist_.models.contains(model.name)) {
      error(t[1], "duplicate model '" + model.name + "'");
      return;
    }
    netlist_.models.emplace(model.name, std::move(model));
  }

  void read_dc(const Card& card) {
    if (!arity(card, 5, ".DC")) return;
    const auto& t = card.tokens;
    auto start = number(t[2]);
    auto stop = number(t[3]);
    auto step = number(t[4]);
    if (!start || !stop || !step) return;
    if (!(*step > 0) || !std::isfinite((*stop - *start) / *step)) {
      error(t[4], ".DC step must be positive");
      return;
    }
    push_directive(card, DcDirective{canonical_element_name(t[1].text), *start, *stop, *step});
  }

  void read_tran(const Card& card) {
    const auto& t = card.tokens;
    const bool uic = t.size() == 4 && to_upper(t[3].text) == "UIC";
    if (!uic && !arity(card, 3, ".TRAN")) return;
    auto tstep = number(t[1]);
    auto tstop = number(t[2]);
    if (!tstep || !tstop) return;
    if (!(*tstep > 0) || *tstop < *tstep) {
      error(t[1], ".TRAN requires tstep > 0 and tstop >= tstep");
      return;
    }
    push_directive(card, TranDirective{*tstep, *tstop, uic});
  }

  void read_ac(const Card& card) {
    if (!arity(card, 5, ".AC")) return;
    const auto& t = card.tokens;
    const std::string scale = to_upper(t[1].text);
    AcDirective ac;
    if (scale == "DEC") ac.scale = AcScale::Dec;
    else if (scale == "LIN") ac.scale = AcScale::Lin;
    else {
      error(t[1], "unknown AC sweep type '" + t[1].text + "'");
      return;
    }
    auto n = number(t[2]);
    auto fstart = number(t[3]);
    auto fstop = number(t[4]);
    if (!n || !fstart || !fstop) return;
    if (*n < 1 || std::floor(*n) != *n) {
      error(t[2], ".AC point count must be a positive integer");
      return;
    }
    if (!(*fstart > 0) || *fstop < *fstart) {
      error(t[3], ".AC requires fstart > 0 and fstop >= fstart");
      return;
    }
    ac.npoints = static_cast<int>(*n);
    ac.fstart = *fstart;
    ac.fstop = *fstop;
    push_directive(card, ac);
  }

  // .IC V(node)=value ...   tokenizes to  V node = value
  void read_ic(const Card& card) {
    const auto& t = card.tokens;
    IcDirective ic;
    if (t.size() < 5 || (t.size() - 1) % 4 != 0) {
      error(t[0], ".IC expects V(node)=value entries");
      return;
    }
    for (std::size_t i = 1; i + 3 < t.size(); i += 4) {
      if (to_upper(t[i].text) != "V" || t[i + 2].text != "=") {
        error(t[i], ".IC expects V(node)=value entries");
        return;
      }
      auto v = number(t[i + 3]);
      if (!v) return;
      ic.voltages.emplace_back(canonical_node_name(t[i + 1].text), *v);
    }
    push_directive(card, std::move(ic));
  }

  void read_print(const Card& card) {
    const auto& t = card.tokens;
    PrintDirective print;
    std::size_t i = 1;
    if (i < t.size()) {
      const std::string k = to_upper(t[i].text);
      if (k == "OP") print.analysis = AnalysisKind::Op;
      else if (k == "DC") print.analysis = AnalysisKind::Dc;
      else if (k == "TRAN") print.analysis = AnalysisKind::Tran;
      else if (k == "AC") print.analysis = AnalysisKind::Ac;
      if (print.analysis) ++i;
    }
    if (i >= t.size()) {
      error(t[0], ".PRINT needs at least one probe");
      return;
    }
    for (; i < t.size(); i += 2) {
      const std::string k = to_upper(t[i].text);
      if ((k != "V" && k != "I") || i + 1 >= t.size()) {
        error(t[i], "malformed probe '" + t[i].text + "'");
        return;
      }
      Probe p;
      p.kind = k == "V" ? Probe::Kind::Voltage : Probe::Kind::Current;
      p.target = p.kind == Probe::Kind::Voltage ? canonical_node_name(t[i + 1].text)
                                                : canonical_element_name(t[i + 1].text);
      print.probes.push_back(std::move(p));
    }
    push_directive(card, std::move(print));
  }

  // Checks that need the whole deck: names, model references, probe targets.
  void cross_check() {
    std::map<std::string, int> first_seen;
    std::set<std::string> nodes{"0"};
    for (const auto& e : netlist_.elements) {
      const std::string& name = element_name(e);
      auto [it, inserted] = first_seen.emplace(name, e.loc.line);
      if (!inserted) {
        error(e.loc.line, e.loc.column,
              "duplicate element name '" + name + "' (first defined at line " +
                  std::to_string(it->second) + ")");
      }
      for (auto& n : element_nodes(e)) nodes.insert(n);

      auto check_model = [&](const std::string& model, ModelKind want_a, ModelKind want_b) {
        const ModelCard* card = netlist_.find_model(model);
        if (!card) {
          error(e.loc.line, e.loc.column,
                "unresolved model '" + model + "' on '" + name + "'");
        } else if (card->kind != want_a && card->kind != want_b) {
          error(e.loc.line, e.loc.column,
                "model '" + model + "' on '" + name + "' has the wrong type " +
                    std::string(to_string(card->kind)));
        }
      };
      if (const auto* d = e.as<Diode>()) check_model(d->model, ModelKind::Diode, ModelKind::Diode);
      if (const auto* m = e.as<Mosfet>()) check_model(m->model, ModelKind::Nmos, ModelKind::Pmos);
    }

    for (std::size_t k = 0; k < netlist_.directives.size(); ++k) {
      const int line = directive_lines_[k];
      const auto& d = netlist_.directives[k];
      if (const auto* dc = std::get_if<DcDirective>(&d)) {
        const Element* e = netlist_.find_element(dc->source);
        if (!e || !(e->as<VSource>() || e->as<ISource>())) {
          error(line, 1, ".DC sweeps unknown source '" + dc->source + "'");
        }
      } else if (const auto* ic = std::get_if<IcDirective>(&d)) {
        for (const auto& [node, v] : ic->voltages) {
          if (!nodes.contains(node)) error(line, 1, ".IC names unknown node '" + node + "'");
        }
      } else if (const auto* pr = std::get_if<PrintDirective>(&d)) {
        for (const auto& p : pr->probes) {
          if (p.kind == Probe::Kind::Voltage && !nodes.contains(p.target)) {
            error(line, 1, "probe " + p.label() + " names unknown node");
          }
          if (p.kind == Probe::Kind::Current) {
            const Element* e = netlist_.find_element(p.target);
            if (!e || !(e->as<VSource>() || e->as<Inductor>())) {
              error(line, 1, "probe " + p.label() + " must name a voltage source or inductor");
            }
          }
        }
      }
    }
  }

  std::string_view text_;
  Netlist netlist_;
  std::vector<int> directive_lines_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

Netlist parse_netlist(std::string_view text) { return DeckReader(text).read(); }

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

namespace {

std::string format_waveform(const SourceWaveform& w) {
  struct Visitor {
    std::string operator()(const DcWave& d) const { return format_value(d.value); }
    std::string operator()(const SinWave& s) const {
      return "SIN(" + format_value(s.offset) + " " + format_value(s.amplitude) + " " +
             format_value(s.freq) + ")";
    }
    std::string operator()(const PulseWave& p) const {
      std::string out = "PULSE(";
      const double fields[] = {p.v1, p.v2, p.delay, p.rise, p.fall, p.width, p.period};
      for (std::size_t i = 0; i < std::size(fields); ++i) {
        if (i) out += ' ';
        out += format_value(fields[i]);
      }
      return out + ")";
    }
  };
  return std::visit(Visitor{}, w);
}

void write_source(std::ostream& os, const SourceCard& s) {
  os << s.name << ' ' << s.npos << ' ' << s.nneg << ' ' << format_waveform(s.waveform);
  if (s.ac_mag) {
    os << " AC " << format_value(*s.ac_mag);
    if (s.ac_phase) os << ' ' << format_value(*s.ac_phase);
  }
}

void write_element(std::ostream& os, const Element& e) {
  struct Visitor {
    std::ostream& os;
    void operator()(const Resistor& r) const {
      os << r.name << ' ' << r.n1 << ' ' << r.n2 << ' ' << format_value(r.ohms);
    }
    void operator()(const Capacitor& c) const {
      os << c.name << ' ' << c.n1 << ' ' << c.n2 << ' ' << format_value(c.farads);
      if (c.ic) os << " IC=" << format_value(*c.ic);
    }
    void operator()(const Inductor& l) const {
      os << l.name << ' ' << l.n1 << ' ' << l.n2 << ' ' << format_value(l.henries);
      if (l.ic) os << " IC=" << format_value(*l.ic);
    }
    void operator()(const VSource& v) const { write_source(os, v); }
    void operator()(const ISource& i) const { write_source(os, i); }
    void operator()(const Diode& d) const {
      os << d.name << ' ' << d.anode << ' ' << d.cathode << ' ' << d.model;
    }
    void operator()(const Mosfet& m) const {
      os << m.name << ' ' << m.drain << ' ' << m.gate << ' ' << m.source << ' ' << m.model;
    }
  };
  std::visit(Visitor{os}, e.body);
  os << '\n';
}

void write_directive(std::ostream& os, const Directive& d) {
  struct Visitor {
    std::ostream& os;
    void operator()(const OpDirective&) const { os << ".OP"; }
    void operator()(const DcDirective& dc) const {
      os << ".DC " << dc.source << ' ' << format_value(dc.start) << ' ' << format_value(dc.stop)
         << ' ' << format_value(dc.step);
    }
    void operator()(const TranDirective& tr) const {
      os << ".TRAN " << format_value(tr.tstep) << ' ' << format_value(tr.tstop);
      if (tr.uic) os << " UIC";
    }
    void operator()(const AcDirective& ac) const {
      os << ".AC " << (ac.scale == AcScale::Dec ? "DEC" : "LIN") << ' ' << ac.npoints << ' '
         << format_value(ac.fstart) << ' ' << format_value(ac.fstop);
    }
    void operator()(const IcDirective& ic) const {
      os << ".IC";
      for (const auto& [node, v] : ic.voltages) os << " V(" << node << ")=" << format_value(v);
    }
    void operator()(const PrintDirective& pr) const {
      os << ".PRINT";
      if (pr.analysis) {
        std::string k(to_string(*pr.analysis));
        for (char& c : k) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        os << ' ' << k;
      }
      for (const auto& p : pr.probes) os << ' ' << p.label();
    }
  };
  std::visit(Visitor{os}, d);
  os << '\n';
}

}  // namespace

std::string write_netlist(const Netlist& netlist) {
  std::ostringstream os;
  os << netlist.title << '\n';
  for (const auto& e : netlist.elements) write_element(os, e);
  for (const auto& [name, model] : netlist.models) {
    os << ".MODEL " << model.name << ' ' << to_string(model.kind);
    if (!model.params.empty()) {
      os << " (";
      bool first = true;
      for (const auto& [k, v] : model.params) {
        if (!first) os << ' ';
        first = false;
        os << k << '=' << format_value(v);
      }
      os << ')';
    }
    os << '\n';
  }
  for (const auto& d : netlist.directives) write_directive(os, d);
  os << ".END\n";
  return os.str();
}

}  // namespace minispice

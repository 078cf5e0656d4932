#include "collatt/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "collatt/errors.hpp"

namespace collatt {

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw config_error("expected a number, got an empty value");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw config_error("malformed number: " + s);
  return v;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& s) {
  if (s.empty()) throw config_error("expected an integer, got an empty value");
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size())
    throw config_error("malformed integer: " + s);
  return v;
}

uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s[0] == '-')
    throw config_error("expected an unsigned integer: " + s);
  char* end = nullptr;
  const uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size())
    throw config_error("malformed unsigned integer: " + s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw config_error("expected 0 or 1, got: " + s);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, size_t count,
                                  const std::string& what) {
  const auto toks = split_ws(s);
  if (toks.size() != count)
    throw config_error(what + ": expected " + std::to_string(count) +
                       " numbers, got " + std::to_string(toks.size()));
  std::vector<double> out;
  out.reserve(count);
  for (const auto& t : toks) out.push_back(parse_double(t));
  return out;
}

// Key with a decimal suffix, e.g. "slot12" -> ("slot", 12).
bool split_indexed(const std::string& key, const std::string& stem, int& idx) {
  if (key.size() <= stem.size() || key.compare(0, stem.size(), stem) != 0)
    return false;
  const std::string digits = key.substr(stem.size());
  for (char c : digits)
    if (c < '0' || c > '9') return false;
  idx = static_cast<int>(parse_int(digits));
  return true;
}

std::string state_kind_name(StateSpec::Kind k) {
  switch (k) {
    case StateSpec::Kind::basis: return "basis";
    case StateSpec::Kind::product: return "product";
    case StateSpec::Kind::amplitudes: return "amplitudes";
  }
  throw std::logic_error("unreachable state kind");
}

StateSpec::Kind state_kind_from(const std::string& s) {
  if (s == "basis") return StateSpec::Kind::basis;
  if (s == "product") return StateSpec::Kind::product;
  if (s == "amplitudes") return StateSpec::Kind::amplitudes;
  throw config_error("unknown state kind: " + s);
}

std::string rmatrix_kind_name(RMatrixSpec::Kind k) {
  switch (k) {
    case RMatrixSpec::Kind::identity: return "identity";
    case RMatrixSpec::Kind::swap: return "swap";
    case RMatrixSpec::Kind::random_unitary: return "random_unitary";
    case RMatrixSpec::Kind::explicit_entries: return "explicit";
  }
  throw std::logic_error("unreachable rmatrix kind");
}

RMatrixSpec::Kind rmatrix_kind_from(const std::string& s) {
  if (s == "identity") return RMatrixSpec::Kind::identity;
  if (s == "swap") return RMatrixSpec::Kind::swap;
  if (s == "random_unitary") return RMatrixSpec::Kind::random_unitary;
  if (s == "explicit") return RMatrixSpec::Kind::explicit_entries;
  throw config_error("unknown rmatrix kind: " + s);
}

// Accumulates [state]-shaped keys; `prefix` distinguishes the main state
// section from the experiment's alt_ keys.
struct StateAccum {
  StateSpec spec;
  std::map<int, std::array<double, 4>> qubits;
  std::set<uint64_t> seen_amps;

  bool consume(const std::string& key, const std::string& value,
               const std::string& prefix) {
    if (key == prefix + "kind") {
      spec.kind = state_kind_from(value);
      return true;
    }
    if (key == prefix + "bits") {
      spec.bits = value;
      return true;
    }
    int idx = 0;
    if (split_indexed(key, prefix + "slot", idx)) {
      if (qubits.count(idx))
        throw config_error("duplicate key: " + key);
      const auto v = parse_doubles(value, 4, key);
      qubits[idx] = {v[0], v[1], v[2], v[3]};
      return true;
    }
    if (split_indexed(key, prefix + "amp", idx)) {
      const auto u = static_cast<uint64_t>(idx);
      if (!seen_amps.insert(u).second)
        throw config_error("duplicate key: " + key);
      const auto v = parse_doubles(value, 2, key);
      spec.amps.emplace_back(u, cd{v[0], v[1]});
      return true;
    }
    return false;
  }

  StateSpec finish(const std::string& where) {
    if (!qubits.empty()) {
      int expect = 0;
      for (const auto& [i, q] : qubits) {
        if (i != expect)
          throw config_error(where + ": slot entries must cover 0..k without gaps");
        spec.qubits.push_back(q);
        ++expect;
      }
    }
    const bool has_bits = !spec.bits.empty();
    const bool has_qubits = !spec.qubits.empty();
    const bool has_amps = !spec.amps.empty();
    switch (spec.kind) {
      case StateSpec::Kind::basis:
        if (has_qubits || has_amps)
          throw config_error(where + ": basis state takes only a bits entry");
        break;
      case StateSpec::Kind::product:
        if (has_bits || has_amps)
          throw config_error(where + ": product state takes only slot entries");
        break;
      case StateSpec::Kind::amplitudes:
        if (has_bits || has_qubits)
          throw config_error(where + ": amplitude state takes only amp entries");
        break;
    }
    return spec;
  }
};

RMatrixSpec::Override parse_override(const std::string& value) {
  RMatrixSpec::Override o;
  bool have_slot = false, have_ordinals = false, have_kind = false;
  for (const std::string& field : split_ws(value)) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw config_error("override field must be name=value: " + field);
    const std::string name = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (name == "slot") {
      o.slot = static_cast<int>(parse_int(val));
      have_slot = true;
    } else if (name == "ordinals") {
      const size_t dots = val.find("..");
      if (dots == std::string::npos)
        throw config_error("override ordinals must be first..last: " + val);
      o.first_ordinal = static_cast<int>(parse_int(val.substr(0, dots)));
      o.last_ordinal = static_cast<int>(parse_int(val.substr(dots + 2)));
      have_ordinals = true;
    } else if (name == "kind") {
      o.kind = rmatrix_kind_from(val);
      if (o.kind == RMatrixSpec::Kind::explicit_entries)
        throw config_error("explicit entries are not allowed in overrides");
      have_kind = true;
    } else if (name == "seed") {
      o.seed = parse_u64(val);
    } else {
      throw config_error("unknown override field: " + name);
    }
  }
  if (!have_slot || !have_ordinals || !have_kind)
    throw config_error("override needs slot=, ordinals= and kind= fields");
  return o;
}

std::string serialize_override(const RMatrixSpec::Override& o) {
  std::string s = "slot=" + std::to_string(o.slot) +
                  " ordinals=" + std::to_string(o.first_ordinal) + ".." +
                  std::to_string(o.last_ordinal) +
                  " kind=" + rmatrix_kind_name(o.kind);
  if (o.kind == RMatrixSpec::Kind::random_unitary)
    s += " seed=" + std::to_string(o.seed);
  return s;
}

std::vector<VertexOutcome> parse_filter(const std::string& value) {
  std::vector<VertexOutcome> out;
  if (value.empty()) return out;
  std::stringstream in(value);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.size() != 2 || (tok[0] != '0' && tok[0] != '1') ||
        (tok[1] != '0' && tok[1] != '1'))
      throw config_error("filter entries must be two bits each: " + tok);
    out.push_back(VertexOutcome{tok[0] - '0', tok[1] - '0'});
  }
  return out;
}

std::string serialize_filter(const std::vector<VertexOutcome>& filter) {
  std::string s;
  for (size_t i = 0; i < filter.size(); ++i) {
    if (i) s += ",";
    s += static_cast<char>('0' + filter[i].alpha_l);
    s += static_cast<char>('0' + filter[i].alpha_r);
  }
  return s;
}

ConfigFile parse_config_impl(const std::string& text, bool allow_artifacts) {
  ConfigFile cfg;
  StateAccum state, alt_state;
  std::map<int, std::array<double, 8>> rows;
  std::string section;
  std::set<std::string> seen_keys;
  bool saw_experiment = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(where + ": malformed section header: " + line);
      section = line.substr(1, line.size() - 2);
      if (section == "lattice" || section == "dynamics" ||
          section == "state" || section == "rmatrix")
        continue;
      if (allow_artifacts && (section == "output" || section == "experiment")) {
        if (section == "experiment") saw_experiment = true;
        continue;
      }
      throw config_error(where + ": unknown section [" + section + "]");
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(where + ": expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw config_error(where + ": key outside any section: " + key);
    if (!seen_keys.insert(section + "/" + key).second)
      throw config_error(where + ": duplicate key in [" + section +
                         "]: " + key);

    int idx = 0;
    if (section == "lattice") {
      if (key == "n")
        cfg.run.geometry.half_width = static_cast<int>(parse_int(value));
      else
        throw config_error(where + ": unknown key in [lattice]: " + key);
    } else if (section == "dynamics") {
      if (key == "kind")
        cfg.run.kind = dynamics_kind_from_string(value);
      else if (key == "steps")
        cfg.run.steps = static_cast<int>(parse_int(value));
      else if (key == "x")
        cfg.run.x = parse_double(value);
      else if (key == "p")
        cfg.run.p = parse_double(value);
      else if (key == "seed")
        cfg.run.seed = parse_u64(value);
      else
        throw config_error(where + ": unknown key in [dynamics]: " + key);
    } else if (section == "state") {
      if (!state.consume(key, value, ""))
        throw config_error(where + ": unknown key in [state]: " + key);
    } else if (section == "rmatrix") {
      if (key == "kind") {
        cfg.run.rmatrix.kind = rmatrix_kind_from(value);
      } else if (key == "seed") {
        cfg.run.rmatrix.seed = parse_u64(value);
      } else if (split_indexed(key, "row", idx)) {
        if (idx < 0 || idx > 3)
          throw config_error(where + ": row index must be 0..3");
        if (rows.count(idx)) throw config_error(where + ": duplicate " + key);
        const auto v = parse_doubles(value, 8, key);
        std::array<double, 8> r;
        std::copy(v.begin(), v.end(), r.begin());
        rows[idx] = r;
      } else if (split_indexed(key, "override", idx)) {
        if (idx != static_cast<int>(cfg.run.rmatrix.overrides.size()))
          throw config_error(where + ": override indices must be consecutive "
                                     "starting at 0");
        cfg.run.rmatrix.overrides.push_back(parse_override(value));
      } else {
        throw config_error(where + ": unknown key in [rmatrix]: " + key);
      }
    } else if (section == "output") {
      if (key == "dir")
        cfg.output.dir = value;
      else if (key == "final_state")
        cfg.output.final_state = parse_bool(value);
      else
        throw config_error(where + ": unknown key in [output]: " + key);
    } else if (section == "experiment") {
      if (key == "runs")
        cfg.experiment.runs = static_cast<int>(parse_int(value));
      else if (key == "samples")
        cfg.experiment.samples = static_cast<int>(parse_int(value));
      else if (key == "window")
        cfg.experiment.window = static_cast<int>(parse_int(value));
      else if (key == "exact")
        cfg.experiment.exact = parse_bool(value);
      else if (key == "filter")
        cfg.experiment.filter = parse_filter(value);
      else if (!alt_state.consume(key, value, "alt_"))
        throw config_error(where + ": unknown key in [experiment]: " + key);
    }
  }

  cfg.run.state = state.finish("[state]");
  cfg.experiment.alt_state = alt_state.finish("[experiment]");
  cfg.experiment.present = saw_experiment;

  if (cfg.run.rmatrix.kind == RMatrixSpec::Kind::explicit_entries) {
    if (rows.size() != 4)
      throw config_error("[rmatrix]: explicit kind needs rows 0..3");
    for (const auto& [r, vals] : rows)
      for (int c = 0; c < 4; ++c)
        cfg.run.rmatrix.entries[4 * r + c] = cd{vals[2 * c], vals[2 * c + 1]};
  } else if (!rows.empty()) {
    throw config_error("[rmatrix]: row entries require kind = explicit");
  }

  cfg.run.validate();
  return cfg;
}

void append_state(std::string& out, const StateSpec& s,
                  const std::string& prefix) {
  out += prefix + "kind = " + state_kind_name(s.kind) + "\n";
  if (!s.bits.empty()) out += prefix + "bits = " + s.bits + "\n";
  for (size_t i = 0; i < s.qubits.size(); ++i) {
    out += prefix + "slot" + std::to_string(i) + " =";
    for (double v : s.qubits[i]) out += " " + format_double(v);
    out += "\n";
  }
  for (const auto& [idx, a] : s.amps)
    out += prefix + "amp" + std::to_string(idx) + " = " +
           format_double(a.real()) + " " + format_double(a.imag()) + "\n";
}

}  // namespace

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  out += "[lattice]\n";
  out += "n = " + std::to_string(cfg.geometry.half_width) + "\n";
  out += "[dynamics]\n";
  out += "kind = " + to_string(cfg.kind) + "\n";
  out += "steps = " + std::to_string(cfg.steps) + "\n";
  out += "x = " + format_double(cfg.x) + "\n";
  out += "p = " + format_double(cfg.p) + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "[state]\n";
  append_state(out, cfg.state, "");
  out += "[rmatrix]\n";
  out += "kind = " + rmatrix_kind_name(cfg.rmatrix.kind) + "\n";
  if (cfg.rmatrix.kind == RMatrixSpec::Kind::random_unitary)
    out += "seed = " + std::to_string(cfg.rmatrix.seed) + "\n";
  if (cfg.rmatrix.kind == RMatrixSpec::Kind::explicit_entries) {
    for (int r = 0; r < 4; ++r) {
      out += "row" + std::to_string(r) + " =";
      for (int c = 0; c < 4; ++c) {
        const cd& e = cfg.rmatrix.entries[4 * r + c];
        out += " " + format_double(e.real()) + " " + format_double(e.imag());
      }
      out += "\n";
    }
  }
  for (size_t k = 0; k < cfg.rmatrix.overrides.size(); ++k)
    out += "override" + std::to_string(k) + " = " +
           serialize_override(cfg.rmatrix.overrides[k]) + "\n";
  return out;
}

std::string serialize_config(const ConfigFile& cfg) {
  std::string out = serialize_run_config(cfg.run);
  out += "[output]\n";
  out += "dir = " + cfg.output.dir + "\n";
  out += "final_state = " + std::string(cfg.output.final_state ? "1" : "0") +
         "\n";
  if (cfg.experiment.present) {
    out += "[experiment]\n";
    out += "runs = " + std::to_string(cfg.experiment.runs) + "\n";
    out += "samples = " + std::to_string(cfg.experiment.samples) + "\n";
    out += "window = " + std::to_string(cfg.experiment.window) + "\n";
    out += "exact = " + std::string(cfg.experiment.exact ? "1" : "0") + "\n";
    if (!cfg.experiment.filter.empty())
      out += "filter = " + serialize_filter(cfg.experiment.filter) + "\n";
    append_state(out, cfg.experiment.alt_state, "alt_");
  }
  return out;
}

ConfigFile parse_config(const std::string& text) {
  return parse_config_impl(text, true);
}

RunConfig parse_run_config(const std::string& text) {
  return parse_config_impl(text, false).run;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace collatt

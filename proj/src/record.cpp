#include "collatt/record.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "collatt/config.hpp"
#include "collatt/errors.hpp"

namespace collatt {

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex16(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string serialize_event(const Event& e) {
  std::string s = "vertex=" + std::to_string(e.vertex) +
                  " slot=" + std::to_string(e.slot) + " outcome=";
  if (e.realized) {
    s += static_cast<char>('0' + e.outcome.alpha_l);
    s += static_cast<char>('0' + e.outcome.alpha_r);
    s += " nl=" + format_double(e.norm_l) + " nr=" + format_double(e.norm_r);
  } else {
    s += "skipped";
  }
  return s;
}

Event parse_event(const std::string& value, const std::string& where) {
  Event e;
  bool have_vertex = false, have_slot = false, have_outcome = false;
  bool have_nl = false, have_nr = false;
  std::istringstream in(value);
  std::string field;
  while (in >> field) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw config_error(where + ": malformed event field: " + field);
    const std::string name = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (name == "vertex") {
      e.vertex = std::stoi(val);
      have_vertex = true;
    } else if (name == "slot") {
      e.slot = std::stoi(val);
      have_slot = true;
    } else if (name == "outcome") {
      if (val == "skipped") {
        e.realized = false;
      } else if (val.size() == 2 && (val[0] == '0' || val[0] == '1') &&
                 (val[1] == '0' || val[1] == '1')) {
        e.realized = true;
        e.outcome = VertexOutcome{val[0] - '0', val[1] - '0'};
      } else {
        throw config_error(where + ": malformed outcome: " + val);
      }
      have_outcome = true;
    } else if (name == "nl") {
      e.norm_l = parse_double(val);
      have_nl = true;
    } else if (name == "nr") {
      e.norm_r = parse_double(val);
      have_nr = true;
    } else {
      throw config_error(where + ": unknown event field: " + name);
    }
  }
  if (!have_vertex || !have_slot || !have_outcome)
    throw config_error(where + ": event needs vertex=, slot= and outcome=");
  if (e.realized != (have_nl && have_nr))
    throw config_error(where + ": realized events carry nl= and nr=, skipped "
                               "events carry neither");
  return e;
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::istringstream in(value);
  int v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw config_error("malformed integer list: " + value);
  return out;
}

}  // namespace

std::string serialize_record(const RunRecord& rec) {
  std::string out = "collatt-record " + std::to_string(kRecordVersion) + "\n";
  out += "generator = " + rec.generator + "\n";
  out += "config_begin\n";
  out += serialize_run_config(rec.config);
  out += "config_end\n";
  out += "motions =";
  for (int m : rec.motions) out += " " + std::to_string(m);
  out += "\n";
  if (rec.config.kind == DynamicsKind::samols) {
    out += "samols_initial =";
    for (int b : rec.samols_initial) out += " " + std::to_string(b);
    out += "\n";
  }
  out += "events = " + std::to_string(rec.events.size()) + "\n";
  for (size_t k = 0; k < rec.events.size(); ++k)
    out += "event" + std::to_string(k) + " = " +
           serialize_event(rec.events[k]) + "\n";
  if (rec.final_state) {
    out += "amps = " + std::to_string(rec.final_state->size()) + "\n";
    for (size_t i = 0; i < rec.final_state->size(); ++i) {
      const cd& a = (*rec.final_state)[i];
      out += "amp" + std::to_string(i) + " = " + format_double(a.real()) +
             " " + format_double(a.imag()) + "\n";
    }
  }
  out += "digest = fnv1a64:" + hex16(fnv1a64(out)) + "\n";
  return out;
}

RunRecord parse_record(const std::string& text) {
  const std::string marker = "digest = fnv1a64:";
  const size_t pos = text.rfind(marker);
  if (pos == std::string::npos || (pos != 0 && text[pos - 1] != '\n'))
    throw config_error("record has no digest line");
  const std::string body = text.substr(0, pos);
  std::string hex = text.substr(pos + marker.size());
  while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r'))
    hex.pop_back();
  if (hex.size() != 16)
    throw config_error("malformed record digest");
  const uint64_t stated = std::strtoull(hex.c_str(), nullptr, 16);
  if (stated != fnv1a64(body))
    throw config_error("record digest mismatch: file is corrupt or edited");

  std::istringstream in(body);
  std::string line;
  int lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw config_error(std::string("record ends before ") + what);
    ++lineno;
    return line;
  };

  next_line("header");
  if (line != "collatt-record " + std::to_string(kRecordVersion))
    throw config_error("unsupported record header: " + line);

  RunRecord rec;
  next_line("generator");
  const std::string gen_prefix = "generator = ";
  if (line.rfind(gen_prefix, 0) != 0)
    throw config_error("expected generator line, got: " + line);
  rec.generator = line.substr(gen_prefix.size());

  next_line("config");
  if (line != "config_begin")
    throw config_error("expected config_begin, got: " + line);
  std::string config_text;
  while (next_line("config_end") != "config_end") config_text += line + "\n";
  rec.config = parse_run_config(config_text);

  next_line("motions");
  if (line.rfind("motions =", 0) != 0)
    throw config_error("expected motions line, got: " + line);
  rec.motions = parse_int_list(line.substr(9));

  if (rec.config.kind == DynamicsKind::samols) {
    next_line("samols_initial");
    if (line.rfind("samols_initial =", 0) != 0)
      throw config_error("expected samols_initial line, got: " + line);
    rec.samols_initial = parse_int_list(line.substr(16));
  }

  next_line("events");
  if (line.rfind("events = ", 0) != 0)
    throw config_error("expected events line, got: " + line);
  const int num_events = std::stoi(line.substr(9));
  if (num_events != static_cast<int>(rec.motions.size()))
    throw config_error("record has " + std::to_string(rec.motions.size()) +
                       " motions but " + std::to_string(num_events) +
                       " events");
  for (int k = 0; k < num_events; ++k) {
    next_line("event");
    const std::string prefix = "event" + std::to_string(k) + " = ";
    if (line.rfind(prefix, 0) != 0)
      throw config_error("expected " + prefix + "..., got: " + line);
    rec.events.push_back(
        parse_event(line.substr(prefix.size()), "line " + std::to_string(lineno)));
  }

  if (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("amps = ", 0) != 0)
      throw config_error("unexpected trailing line in record: " + line);
    const size_t count = std::stoull(line.substr(7));
    std::vector<cd> amps(count);
    for (size_t i = 0; i < count; ++i) {
      next_line("amp");
      const std::string prefix = "amp" + std::to_string(i) + " = ";
      if (line.rfind(prefix, 0) != 0)
        throw config_error("expected " + prefix + "..., got: " + line);
      std::istringstream av(line.substr(prefix.size()));
      double re = 0.0, im = 0.0;
      if (!(av >> re >> im))
        throw config_error("malformed amplitude row: " + line);
      amps[i] = cd{re, im};
    }
    rec.final_state = std::move(amps);
    if (std::getline(in, line) && !line.empty())
      throw config_error("unexpected trailing line in record: " + line);
  }
  return rec;
}

RunRecord load_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open record file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_record(buf.str());
}

void save_record(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write record file: " + path);
  out << serialize_record(rec);
  if (!out) throw config_error("failed writing record file: " + path);
}

}  // namespace collatt

// SPDX-License-Identifier: Apache-2.0

#include "pvlist.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace pvmw {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& text, const char* what) {
  double v = 0;
  auto t = trim(text);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw PvError(Errc::kParse,
                  std::string("bad number '") + text + "' in " + what);
  return v;
}

std::string format_num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

constexpr const char* kLimitsPrefix = "limits:";

AlarmLimits parse_limits_field(const std::string& field) {
  const std::string body = field.substr(std::string(kLimitsPrefix).size());
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = body.find(';', start);
    if (pos == std::string::npos) {
      parts.push_back(body.substr(start));
      break;
    }
    parts.push_back(body.substr(start, pos - start));
    start = pos + 1;
  }
  if (parts.size() != 4)
    throw PvError(Errc::kParse,
                  "limits field expects lolo;low;high;hihi: '" + field + "'");
  auto l = AlarmLimits::all_enabled(
      parse_num(parts[0], "limits"), parse_num(parts[1], "limits"),
      parse_num(parts[2], "limits"), parse_num(parts[3], "limits"));
  l.validate();
  return l;
}

}  // namespace

ScanSpec parse_scan_spec(const std::string& text) {
  if (text == "event") return ScanSpec::event();
  constexpr const char* kPrefix = "periodic:";
  if (text.rfind(kPrefix, 0) == 0) {
    const double p = parse_num(text.substr(std::strlen(kPrefix)), "scan");
    if (!(p > 0))
      throw PvError(Errc::kParse, "scan period must be positive: '" + text + "'");
    return ScanSpec::periodic(p);
  }
  throw PvError(Errc::kParse, "unknown scan spec '" + text + "'");
}

std::string format_scan_spec(const ScanSpec& scan) {
  if (scan.kind == ScanSpec::Kind::kEvent) return "event";
  return "periodic:" + format_num(scan.period_s);
}

PvEntry parse_pvlist_line(const std::string& line) {
  // First four fields are fixed; the remainder is the source spec,
  // optionally followed by a trailing limits:... field. The source spec may
  // itself contain commas.
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  if (fields.size() < 4)
    throw PvError(Errc::kParse,
                  "PV list line needs name,type,direction,scan: '" + line + "'");

  PvEntry e;
  e.name = fields[0];
  validate_pv_name(e.name);
  e.type = parse_published_type(fields[1]);
  e.direction = parse_direction(fields[2]);
  e.scan = parse_scan_spec(fields[3]);

  std::vector<std::string> rest(fields.begin() + 4, fields.end());
  if (!rest.empty() && rest.back().rfind(kLimitsPrefix, 0) == 0) {
    e.limits = parse_limits_field(rest.back());
    rest.pop_back();
  }
  if (rest.empty()) {
    e.source = parse_bind_spec("const:0");
  } else {
    std::string src = rest[0];
    for (std::size_t i = 1; i < rest.size(); ++i) src += "," + rest[i];
    e.source = parse_bind_spec(src);
  }

  if (e.limits && e.type != PublishedType::kDouble)
    throw PvError(Errc::kParse,
                  "alarm limits only apply to Double variables: '" + line + "'");
  if (e.source.writable_kind() && e.direction != Direction::kOutput)
    throw PvError(Errc::kParse,
                  "writable source '" + format_bind_spec(e.source) +
                      "' requires direction=output: '" + line + "'");
  return e;
}

std::string format_pvlist_line(const PvEntry& e) {
  std::string out = e.name;
  out += e.type == PublishedType::kDouble ? ",Double" : ",Boolean";
  out += e.direction == Direction::kInput ? ",input" : ",output";
  out += "," + format_scan_spec(e.scan);
  out += "," + format_bind_spec(e.source);
  if (e.limits) {
    out += std::string(",") + kLimitsPrefix + format_num(e.limits->lolo.value) +
           ";" + format_num(e.limits->low.value) + ";" +
           format_num(e.limits->high.value) + ";" +
           format_num(e.limits->hihi.value);
  }
  return out;
}

std::vector<PvEntry> parse_pvlist(const std::string& text) {
  std::vector<PvEntry> out;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    PvEntry e;
    try {
      e = parse_pvlist_line(t);
    } catch (const PvError& err) {
      throw PvError(err.code(), "line " + std::to_string(lineno) + ": " +
                                    err.what());
    }
    if (!seen.insert(e.name).second)
      throw PvError(Errc::kDuplicateName,
                    "duplicate PV name '" + e.name + "' at line " +
                        std::to_string(lineno));
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PvEntry> load_pvlist_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PvError(Errc::kIo, "cannot open PV list '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_pvlist(ss.str());
}

std::string format_pvlist(const std::vector<PvEntry>& entries) {
  std::string out;
  out += "# name,type,direction,scan,source[,limits:LL;L;H;HH]\n";
  for (const auto& e : entries) out += format_pvlist_line(e) + "\n";
  return out;
}

}  // namespace pvmw

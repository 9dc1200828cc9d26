// SPDX-License-Identifier: Apache-2.0

#include "pvcore.hpp"

#include <chrono>
#include <cmath>
#include <cctype>

namespace pvmw {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::kInvalidArgument: return "invalid argument";
    case Errc::kParse: return "parse error";
    case Errc::kDuplicateName: return "duplicate name";
    case Errc::kReservedPrefix: return "reserved prefix";
    case Errc::kUnsupportedType: return "unsupported type";
    case Errc::kBindFailure: return "bind failure";
    case Errc::kUnreachable: return "unreachable";
    case Errc::kTimeout: return "timeout";
    case Errc::kIo: return "io failure";
    case Errc::kAccessDenied: return "access denied";
    case Errc::kTypeMismatch: return "type mismatch";
    case Errc::kDisconnected: return "disconnected";
    case Errc::kOverflow: return "overflow";
    case Errc::kInsufficientData: return "insufficient data";
    case Errc::kInternal: return "internal error";
  }
  return "unknown error";
}

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::kNone: return "NONE";
    case Severity::kMinor: return "MINOR";
    case Severity::kMajor: return "MAJOR";
    case Severity::kInvalid: return "INVALID";
  }
  return "?";
}

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::kNoAlarm: return "NO_ALARM";
    case Condition::kHigh: return "HIGH";
    case Condition::kHihi: return "HIHI";
    case Condition::kLow: return "LOW";
    case Condition::kLolo: return "LOLO";
    case Condition::kComm: return "COMM";
  }
  return "?";
}

const char* record_type_name(RecordType t) {
  switch (t) {
    case RecordType::kAi: return "ai";
    case RecordType::kAo: return "ao";
    case RecordType::kBi: return "bi";
    case RecordType::kBo: return "bo";
  }
  return "?";
}

Timestamp Timestamp::from_seconds(double s) {
  if (s < 0) s = 0;
  auto sec = static_cast<std::uint64_t>(s);
  auto ns = static_cast<std::uint32_t>((s - static_cast<double>(sec)) * 1e9);
  if (ns >= 1000000000u) {
    ns -= 1000000000u;
    ++sec;
  }
  return Timestamp{static_cast<std::uint32_t>(sec), ns};
}

Timestamp Timestamp::now() {
  const auto tp = std::chrono::system_clock::now().time_since_epoch();
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(tp);
  return Timestamp{
      static_cast<std::uint32_t>(ns.count() / 1000000000),
      static_cast<std::uint32_t>(ns.count() % 1000000000)};
}

AlarmLimits AlarmLimits::all_enabled(double lolo, double low, double high,
                                     double hihi) {
  AlarmLimits l;
  l.lolo = {lolo, true};
  l.low = {low, true};
  l.high = {high, true};
  l.hihi = {hihi, true};
  return l;
}

void AlarmLimits::validate() const {
  // Pairwise ordering among the enabled limits.
  const AlarmLimit* ordered[4] = {&lolo, &low, &high, &hihi};
  const AlarmLimit* prev = nullptr;
  for (const auto* lim : ordered) {
    if (!lim->enabled) continue;
    if (std::isnan(lim->value))
      throw PvError(Errc::kInvalidArgument, "alarm limit is NaN");
    if (prev && prev->value > lim->value)
      throw PvError(Errc::kInvalidArgument,
                    "alarm limits must satisfy lolo <= low <= high <= hihi");
    prev = lim;
  }
}

Alarm evaluate_alarm(double value, const AlarmLimits& limits) {
  if (std::isnan(value)) return {Severity::kInvalid, Condition::kComm};
  if (limits.hihi.enabled && value >= limits.hihi.value)
    return {Severity::kMajor, Condition::kHihi};
  if (limits.lolo.enabled && value <= limits.lolo.value)
    return {Severity::kMajor, Condition::kLolo};
  if (limits.high.enabled && value >= limits.high.value)
    return {Severity::kMinor, Condition::kHigh};
  if (limits.low.enabled && value <= limits.low.value)
    return {Severity::kMinor, Condition::kLow};
  return {Severity::kNone, Condition::kNoAlarm};
}

TypeMapping map_pv_type(PublishedType type, Direction direction) {
  if (type == PublishedType::kDouble) {
    return {direction == Direction::kInput ? RecordType::kAi : RecordType::kAo,
            wire::Dtype::kTimeDouble};
  }
  return {direction == Direction::kInput ? RecordType::kBi : RecordType::kBo,
          wire::Dtype::kTimeEnum};
}

PublishedType parse_published_type(const std::string& s) {
  if (s == "Double" || s == "double") return PublishedType::kDouble;
  if (s == "Boolean" || s == "boolean") return PublishedType::kBoolean;
  throw PvError(Errc::kUnsupportedType, "unsupported published type '" + s + "'");
}

Direction parse_direction(const std::string& s) {
  if (s == "input") return Direction::kInput;
  if (s == "output") return Direction::kOutput;
  throw PvError(Errc::kUnsupportedType, "unsupported direction '" + s + "'");
}

ScanSpec ScanSpec::periodic(double period_s) {
  if (!(period_s > 0))
    throw PvError(Errc::kInvalidArgument, "scan period must be positive");
  return ScanSpec{Kind::kPeriodic, period_s};
}

ScanSpec ScanSpec::event() { return ScanSpec{Kind::kEvent, 0.0}; }

void validate_pv_name(const std::string& name) {
  if (name.empty())
    throw PvError(Errc::kInvalidArgument, "PV name is empty");
  if (name.size() > 60)
    throw PvError(Errc::kInvalidArgument,
                  "PV name '" + name + "' exceeds 60 bytes");
  for (unsigned char c : name) {
    if (std::isspace(c))
      throw PvError(Errc::kInvalidArgument,
                    "PV name '" + name + "' contains whitespace");
  }
}

Record make_record(std::string name, RecordType rtype, ScanSpec scan,
                   AlarmLimits limits) {
  validate_pv_name(name);
  limits.validate();
  Record r;
  r.name = std::move(name);
  r.rtype = rtype;
  r.scan = scan;
  r.limits = limits;
  r.readable = true;
  r.writable = is_output(rtype);
  if (!is_analog(rtype)) r.value.value = std::uint16_t{0};
  return r;
}

QualifiedValue process_record(Record& rec, const EngValue& raw,
                              Timestamp now) {
  // Per-record timestamps never go backwards.
  if (now < rec.value.ts) now = rec.value.ts;

  if (is_analog(rec.rtype)) {
    const double* d = std::get_if<double>(&raw);
    if (!d)
      throw PvError(Errc::kTypeMismatch,
                    "record '" + rec.name + "' expects a double value");
    if (std::isnan(*d)) {
      rec.value.ts = now;
      rec.value.alarm = {Severity::kInvalid, Condition::kComm};
    } else {
      rec.value.value = *d;
      rec.value.ts = now;
      rec.value.alarm = evaluate_alarm(*d, rec.limits);
    }
  } else {
    const std::uint16_t* e = std::get_if<std::uint16_t>(&raw);
    if (!e)
      throw PvError(Errc::kTypeMismatch,
                    "record '" + rec.name + "' expects an enum value");
    rec.value.value = static_cast<std::uint16_t>(*e != 0 ? 1 : 0);
    rec.value.ts = now;
    rec.value.alarm = {Severity::kNone, Condition::kNoAlarm};
  }
  ++rec.process_count;
  return rec.value;
}

QualifiedValue mark_comm_fault(Record& rec, Timestamp now) {
  if (now < rec.value.ts) now = rec.value.ts;
  rec.value.ts = now;
  rec.value.alarm = {Severity::kInvalid, Condition::kComm};
  ++rec.process_count;
  return rec.value;
}

std::size_t ScanEngine::add(double period_s, double first_due_s) {
  if (!(period_s > 0))
    throw PvError(Errc::kInvalidArgument, "scan period must be positive");
  slots_.push_back(Slot{period_s, first_due_s});
  return slots_.size() - 1;
}

void ScanEngine::tick(double now_s, std::vector<std::size_t>& due) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].next_due_s <= now_s) {
      due.push_back(i);
      slots_[i].next_due_s += slots_[i].period_s;
    }
  }
}

double ScanEngine::next_due() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : slots_)
    if (s.next_due_s < best) best = s.next_due_s;
  return best;
}

}  // namespace pvmw

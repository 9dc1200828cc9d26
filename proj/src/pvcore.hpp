// SPDX-License-Identifier: Apache-2.0
//
// Record model shared by the upstream server, the gateway and the reference
// IOC: record types, alarm evaluation, qualified values and the fixed-phase
// periodic scan engine.

#ifndef PVMW_PVCORE_HPP_
#define PVMW_PVCORE_HPP_

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "wire.hpp"

namespace pvmw {

enum class Severity : std::uint16_t {
  kNone = 0,
  kMinor = 1,
  kMajor = 2,
  kInvalid = 3,
};

enum class Condition : std::uint16_t {
  kNoAlarm = 0,
  kHigh = 1,
  kHihi = 2,
  kLow = 3,
  kLolo = 4,
  kComm = 5,
};

const char* severity_name(Severity s);
const char* condition_name(Condition c);

struct Alarm {
  Severity severity = Severity::kNone;
  Condition condition = Condition::kNoAlarm;
  bool operator==(const Alarm&) const = default;
};

struct Timestamp {
  std::uint32_t sec = 0;
  std::uint32_t ns = 0;

  auto operator<=>(const Timestamp&) const = default;
  double to_seconds() const { return sec + ns * 1e-9; }
  static Timestamp from_seconds(double s);
  /// Current system (epoch) time.
  static Timestamp now();
};

struct AlarmLimit {
  double value = 0.0;
  bool enabled = false;
  bool operator==(const AlarmLimit&) const = default;
};

struct AlarmLimits {
  AlarmLimit lolo, low, high, hihi;

  static AlarmLimits all_enabled(double lolo, double low, double high,
                                 double hihi);
  bool any_enabled() const {
    return lolo.enabled || low.enabled || high.enabled || hihi.enabled;
  }
  /// Enabled limits must be ordered lolo <= low <= high <= hihi.
  /// Throws PvError(kInvalidArgument) otherwise.
  void validate() const;
  bool operator==(const AlarmLimits&) const = default;
};

/// Ordered limit checks, HIHI/LOLO before HIGH/LOW, inclusive comparisons,
/// disabled limits skipped. NaN reads as a communication fault.
Alarm evaluate_alarm(double value, const AlarmLimits& limits);

enum class RecordType { kAi, kAo, kBi, kBo };

const char* record_type_name(RecordType t);
constexpr bool is_analog(RecordType t) {
  return t == RecordType::kAi || t == RecordType::kAo;
}
constexpr bool is_output(RecordType t) {
  return t == RecordType::kAo || t == RecordType::kBo;
}

enum class PublishedType { kDouble, kBoolean };
enum class Direction { kInput, kOutput };

struct TypeMapping {
  RecordType rtype;
  wire::Dtype dtype;  // the enriched (TIME_*) dtype
  bool operator==(const TypeMapping&) const = default;
};

/// Double -> analog record + TIME_DOUBLE, Boolean -> binary record +
/// TIME_ENUM; direction picks the input/output flavor.
TypeMapping map_pv_type(PublishedType type, Direction direction);

/// Parse helpers for the textual PV list. Unknown names throw
/// PvError(kUnsupportedType).
PublishedType parse_published_type(const std::string& s);
Direction parse_direction(const std::string& s);

/// Engineering value: f64 for analog records, u16 in {0,1} for binary.
using EngValue = std::variant<double, std::uint16_t>;

struct QualifiedValue {
  EngValue value = 0.0;
  Timestamp ts{};
  Alarm alarm{Severity::kInvalid, Condition::kComm};  // until first processing

  bool operator==(const QualifiedValue&) const = default;
};

struct ScanSpec {
  enum class Kind { kPeriodic, kEvent };
  Kind kind = Kind::kPeriodic;
  double period_s = 1.0;  // > 0, meaningful for kPeriodic only

  static ScanSpec periodic(double period_s);
  static ScanSpec event();
  bool operator==(const ScanSpec&) const = default;
};

/// Non-empty, at most 60 bytes, no whitespace. Throws on violation.
void validate_pv_name(const std::string& name);

struct Record {
  std::string name;
  RecordType rtype = RecordType::kAi;
  ScanSpec scan;
  AlarmLimits limits;  // analog records only
  bool readable = true;
  bool writable = false;
  QualifiedValue value;
  std::uint64_t process_count = 0;
};

/// A record with defaults for its type (outputs writable, inputs not).
Record make_record(std::string name, RecordType rtype, ScanSpec scan,
                   AlarmLimits limits = {});

/// Process one raw sample into the record: sets value, timestamp and alarm,
/// bumps process_count and returns the new qualified value. Analog NaN keeps
/// the previous engineering value and flags (INVALID, COMM). Timestamps are
/// clamped to be non-decreasing per record.
QualifiedValue process_record(Record& rec, const EngValue& raw, Timestamp now);

/// Flag a record as unreachable: (INVALID, COMM), value retained.
QualifiedValue mark_comm_fault(Record& rec, Timestamp now);

/// Fixed-phase periodic scheduler. Each slot's next due time advances by
/// exactly one period per processing, so late ticks do not shift the phase.
class ScanEngine {
 public:
  /// Registers a slot; first due at `first_due_s`.
  std::size_t add(double period_s, double first_due_s);

  /// Appends every due slot index to `due` (once per slot) and advances
  /// their schedules by one period.
  void tick(double now_s, std::vector<std::size_t>& due);

  /// Earliest pending due time, or +infinity when empty.
  double next_due() const;

  std::size_t size() const { return slots_.size(); }

 private:
  struct Slot {
    double period_s;
    double next_due_s;
  };
  std::vector<Slot> slots_;
};

}  // namespace pvmw

#endif  // PVMW_PVCORE_HPP_

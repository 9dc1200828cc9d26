// SPDX-License-Identifier: Apache-2.0
//
// PVWire: the binary protocol spoken by every server and client in this
// project. Framed messages over TCP, one connection per client.
//
// Frame layout (all integers big-endian):
//
//   offset  size  field
//   0       2     command
//   2       2     payload_len   (unpadded byte count, <= 65528)
//   4       2     data_type     (Dtype code for value-bearing commands)
//   6       2     data_count
//   8       4     param1
//   12      4     param2
//   16      n     payload, zero-padded to a multiple of 8 bytes
//
// Value encodings:
//   PLAIN_DOUBLE  f64                                            (8 bytes)
//   PLAIN_ENUM    u16 + 6 zero bytes                             (8 bytes)
//   TIME_DOUBLE   status u16, severity u16, sec u32, ns u32, f64 (20 bytes)
//   TIME_ENUM     status u16, severity u16, sec u32, ns u32,
//                 u16 + 6 zero bytes                             (20 bytes)
//
// READ_MULTI request payload:  count u16, then count * sid u32.
// READ_MULTI_RESP payload:     per entry sid u32, status u16, then a
//                              20-byte TIME value when status == 0.
// Multi-response values are type-opaque at the codec level (the client
// knows each sid's dtype from channel creation); TimeSlot keeps the raw
// 8-byte value slot and offers typed accessors.

#ifndef PVMW_WIRE_HPP_
#define PVMW_WIRE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pvmw::wire {

inline constexpr std::size_t kHeaderSize = 16;
inline constexpr std::size_t kMaxPayload = 65528;

enum class Command : std::uint16_t {
  kHello = 0,
  kCreateChan = 1,
  kCreateOk = 2,
  kCreateFail = 3,
  kRead = 4,
  kReadResp = 5,
  kWrite = 6,
  kWriteAck = 7,
  kEventAdd = 8,
  kEvent = 9,
  kEventCancel = 10,
  kReadMulti = 11,
  kReadMultiResp = 12,
  kError = 13,
  kEcho = 14,
};
inline constexpr std::uint16_t kMaxCommandCode = 14;

enum class Dtype : std::uint16_t {
  kPlainDouble = 0,
  kPlainEnum = 1,
  kTimeDouble = 2,
  kTimeEnum = 3,
};

constexpr bool is_plain(Dtype d) {
  return d == Dtype::kPlainDouble || d == Dtype::kPlainEnum;
}
constexpr bool is_time(Dtype d) { return !is_plain(d); }
constexpr bool is_enum_dtype(Dtype d) {
  return d == Dtype::kPlainEnum || d == Dtype::kTimeEnum;
}
/// PLAIN_* <-> TIME_* counterpart with the same engineering type.
constexpr Dtype time_counterpart(Dtype d) {
  return is_enum_dtype(d) ? Dtype::kTimeEnum : Dtype::kTimeDouble;
}
constexpr Dtype plain_counterpart(Dtype d) {
  return is_enum_dtype(d) ? Dtype::kPlainEnum : Dtype::kPlainDouble;
}

/// Per-request status codes carried in ERROR param1 and READ_MULTI_RESP
/// entries.
enum class Status : std::uint16_t {
  kOk = 0,
  kUnknownChannel = 1,
  kAccessDenied = 2,
  kTypeMismatch = 3,
  kDisconnected = 4,
  kUnsupported = 5,
  kBadRequest = 6,
};

const char* status_name(Status s);

// ---------------------------------------------------------------------------
// Values

struct PlainDouble {
  double value = 0.0;
  bool operator==(const PlainDouble&) const = default;
};

struct PlainEnum {
  std::uint16_t value = 0;
  bool operator==(const PlainEnum&) const = default;
};

struct TimeDouble {
  std::uint16_t status = 0;    // alarm condition code
  std::uint16_t severity = 0;  // alarm severity code
  std::uint32_t sec = 0;       // epoch seconds
  std::uint32_t ns = 0;        // < 1e9
  double value = 0.0;
  bool operator==(const TimeDouble&) const = default;
};

struct TimeEnum {
  std::uint16_t status = 0;
  std::uint16_t severity = 0;
  std::uint32_t sec = 0;
  std::uint32_t ns = 0;
  std::uint16_t value = 0;
  bool operator==(const TimeEnum&) const = default;
};

using Value = std::variant<PlainDouble, PlainEnum, TimeDouble, TimeEnum>;

Dtype dtype_of(const Value& v);

/// A TIME_* value whose 8-byte value slot is kept raw (READ_MULTI_RESP
/// entries do not name their dtype on the wire).
struct TimeSlot {
  std::uint16_t status = 0;
  std::uint16_t severity = 0;
  std::uint32_t sec = 0;
  std::uint32_t ns = 0;
  std::array<std::uint8_t, 8> slot{};

  double as_double() const;
  std::uint16_t as_enum() const;
  static TimeSlot from(const TimeDouble& v);
  static TimeSlot from(const TimeEnum& v);
  /// Interpret under a concrete dtype (TIME_DOUBLE or TIME_ENUM).
  Value as_value(Dtype d) const;

  bool operator==(const TimeSlot&) const = default;
};

struct MultiReadRequest {
  std::vector<std::uint32_t> sids;
  bool operator==(const MultiReadRequest&) const = default;
};

struct MultiReadEntry {
  std::uint32_t sid = 0;
  std::uint16_t status = 0;  // Status code; value present iff 0
  std::optional<TimeSlot> value;
  bool operator==(const MultiReadEntry&) const = default;
};

struct MultiReadResponse {
  std::vector<MultiReadEntry> entries;
  bool operator==(const MultiReadResponse&) const = default;
};

// ---------------------------------------------------------------------------
// Messages

using Payload = std::variant<std::monostate, std::string, Value,
                             MultiReadRequest, MultiReadResponse>;

enum class PayloadKind { kNone, kName, kValue, kMultiReq, kMultiResp };

PayloadKind payload_kind(Command c);

struct Message {
  Command command = Command::kHello;
  Dtype dtype = Dtype::kPlainDouble;  // header data_type field
  std::uint16_t count = 0;            // header data_count field
  std::uint32_t param1 = 0;
  std::uint32_t param2 = 0;
  Payload payload;

  bool operator==(const Message&) const = default;
};

// Canonical constructors; they fill dtype/count consistently with what a
// decode of the encoded bytes yields.
Message make_hello();
Message make_create_chan(std::uint32_t cid, std::string name);
Message make_create_ok(std::uint32_t cid, std::uint32_t sid, Dtype dtype);
Message make_create_fail(std::uint32_t cid);
Message make_read(std::uint32_t sid, std::uint32_t ioid, Dtype expect);
Message make_read_resp(std::uint32_t sid, std::uint32_t ioid, const Value& v);
Message make_write(std::uint32_t sid, std::uint32_t ioid, const Value& v);
Message make_write_ack(std::uint32_t sid, std::uint32_t ioid);
Message make_event_add(std::uint32_t sid, std::uint32_t subid);
Message make_event(std::uint32_t subid, const Value& v);
Message make_event_cancel(std::uint32_t sid, std::uint32_t subid);
Message make_read_multi(std::uint32_t ioid, std::vector<std::uint32_t> sids);
Message make_read_multi_resp(std::uint32_t ioid,
                             std::vector<MultiReadEntry> entries);
Message make_error(Status st, std::uint32_t related_id,
                   std::string text = {});
Message make_echo(bool reply);

/// Thrown by encode_message on caller errors.
class WireError : public std::runtime_error {
 public:
  enum class Kind { kOversizePayload, kInvalidCommand, kBadValue };
  WireError(Kind k, const std::string& what)
      : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Encode one message; deterministic for equal inputs.
std::vector<std::uint8_t> encode_message(const Message& msg);
void encode_message(const Message& msg, std::vector<std::uint8_t>& out);

enum class DecodeStatus {
  kOk,
  kNeedMore,          // fewer than 16 + padded(payload_len) bytes available
  kMalformedHeader,   // unknown command code
  kBadPadding,        // nonzero padding bytes
  kBadPayload,        // payload inconsistent with command/dtype
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kNeedMore;
  std::size_t consumed = 0;  // bytes consumed from input (kOk only)
};

/// Decode one message from the front of `in`. Exact inverse of
/// encode_message on well-formed frames; tolerates partial input.
DecodeResult decode_message(std::span<const std::uint8_t> in, Message& out);

/// Incremental frame decoder for a byte stream arriving in arbitrary chunks.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// kOk fills `out`; kNeedMore means wait for more bytes; anything else is
  /// a fatal stream error.
  DecodeStatus next(Message& out);
  std::size_t buffered() const { return buf_.size() - pos_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

constexpr std::size_t padded_len(std::size_t n) { return (n + 7) & ~std::size_t{7}; }

}  // namespace pvmw::wire

#endif  // PVMW_WIRE_HPP_

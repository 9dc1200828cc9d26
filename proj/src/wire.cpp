// SPDX-License-Identifier: Apache-2.0

#include "wire.hpp"

#include <bit>
#include <cstring>

namespace pvmw::wire {

namespace {

constexpr std::uint32_t kNsPerSec = 1000000000u;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) |
         static_cast<std::uint32_t>(p[3]);
}

std::uint64_t get_u64(const std::uint8_t* p) {
  return (static_cast<std::uint64_t>(get_u32(p)) << 32) | get_u32(p + 4);
}

double get_f64(const std::uint8_t* p) {
  return std::bit_cast<double>(get_u64(p));
}

std::size_t value_encoded_size(Dtype d) {
  return is_plain(d) ? 8 : 20;
}

void encode_value(const Value& v, std::vector<std::uint8_t>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PlainDouble>) {
          put_f64(out, x.value);
        } else if constexpr (std::is_same_v<T, PlainEnum>) {
          put_u16(out, x.value);
          out.insert(out.end(), 6, 0);
        } else if constexpr (std::is_same_v<T, TimeDouble>) {
          put_u16(out, x.status);
          put_u16(out, x.severity);
          put_u32(out, x.sec);
          put_u32(out, x.ns);
          put_f64(out, x.value);
        } else {
          put_u16(out, x.status);
          put_u16(out, x.severity);
          put_u32(out, x.sec);
          put_u32(out, x.ns);
          put_u16(out, x.value);
          out.insert(out.end(), 6, 0);
        }
      },
      v);
}

bool zeros(const std::uint8_t* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] != 0) return false;
  return true;
}

// Decodes a value of known dtype from exactly value_encoded_size(d) bytes.
// Returns false on malformed contents (nonzero enum padding, ns overflow).
bool decode_value(Dtype d, const std::uint8_t* p, Value& out) {
  switch (d) {
    case Dtype::kPlainDouble:
      out = PlainDouble{get_f64(p)};
      return true;
    case Dtype::kPlainEnum: {
      if (!zeros(p + 2, 6)) return false;
      out = PlainEnum{get_u16(p)};
      return true;
    }
    case Dtype::kTimeDouble: {
      TimeDouble t;
      t.status = get_u16(p);
      t.severity = get_u16(p + 2);
      t.sec = get_u32(p + 4);
      t.ns = get_u32(p + 8);
      if (t.ns >= kNsPerSec) return false;
      t.value = get_f64(p + 12);
      out = t;
      return true;
    }
    case Dtype::kTimeEnum: {
      TimeEnum t;
      t.status = get_u16(p);
      t.severity = get_u16(p + 2);
      t.sec = get_u32(p + 4);
      t.ns = get_u32(p + 8);
      if (t.ns >= kNsPerSec) return false;
      if (!zeros(p + 14, 6)) return false;
      t.value = get_u16(p + 12);
      out = t;
      return true;
    }
  }
  return false;
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::kOk: return "ok";
    case Status::kUnknownChannel: return "unknown channel";
    case Status::kAccessDenied: return "access denied";
    case Status::kTypeMismatch: return "type mismatch";
    case Status::kDisconnected: return "disconnected";
    case Status::kUnsupported: return "unsupported";
    case Status::kBadRequest: return "bad request";
  }
  return "unknown status";
}

Dtype dtype_of(const Value& v) {
  return static_cast<Dtype>(v.index());
}

double TimeSlot::as_double() const {
  std::uint64_t u = 0;
  for (auto b : slot) u = (u << 8) | b;
  return std::bit_cast<double>(u);
}

std::uint16_t TimeSlot::as_enum() const {
  return static_cast<std::uint16_t>((slot[0] << 8) | slot[1]);
}

TimeSlot TimeSlot::from(const TimeDouble& v) {
  TimeSlot s{v.status, v.severity, v.sec, v.ns, {}};
  std::uint64_t u = std::bit_cast<std::uint64_t>(v.value);
  for (int i = 7; i >= 0; --i) {
    s.slot[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(u);
    u >>= 8;
  }
  return s;
}

TimeSlot TimeSlot::from(const TimeEnum& v) {
  TimeSlot s{v.status, v.severity, v.sec, v.ns, {}};
  s.slot[0] = static_cast<std::uint8_t>(v.value >> 8);
  s.slot[1] = static_cast<std::uint8_t>(v.value);
  return s;
}

Value TimeSlot::as_value(Dtype d) const {
  if (d == Dtype::kTimeEnum)
    return TimeEnum{status, severity, sec, ns, as_enum()};
  return TimeDouble{status, severity, sec, ns, as_double()};
}

PayloadKind payload_kind(Command c) {
  switch (c) {
    case Command::kCreateChan:
    case Command::kError:
      return PayloadKind::kName;
    case Command::kReadResp:
    case Command::kWrite:
    case Command::kEvent:
      return PayloadKind::kValue;
    case Command::kReadMulti:
      return PayloadKind::kMultiReq;
    case Command::kReadMultiResp:
      return PayloadKind::kMultiResp;
    default:
      return PayloadKind::kNone;
  }
}

Message make_hello() { return Message{}; }

Message make_create_chan(std::uint32_t cid, std::string name) {
  Message m;
  m.command = Command::kCreateChan;
  m.param1 = cid;
  m.payload = std::move(name);
  return m;
}

Message make_create_ok(std::uint32_t cid, std::uint32_t sid, Dtype dtype) {
  Message m;
  m.command = Command::kCreateOk;
  m.dtype = dtype;
  m.count = 1;
  m.param1 = cid;
  m.param2 = sid;
  return m;
}

Message make_create_fail(std::uint32_t cid) {
  Message m;
  m.command = Command::kCreateFail;
  m.param1 = cid;
  return m;
}

Message make_read(std::uint32_t sid, std::uint32_t ioid, Dtype expect) {
  Message m;
  m.command = Command::kRead;
  m.dtype = expect;
  m.count = 1;
  m.param1 = sid;
  m.param2 = ioid;
  return m;
}

Message make_read_resp(std::uint32_t sid, std::uint32_t ioid, const Value& v) {
  Message m;
  m.command = Command::kReadResp;
  m.dtype = dtype_of(v);
  m.count = 1;
  m.param1 = sid;
  m.param2 = ioid;
  m.payload = v;
  return m;
}

Message make_write(std::uint32_t sid, std::uint32_t ioid, const Value& v) {
  Message m;
  m.command = Command::kWrite;
  m.dtype = dtype_of(v);
  m.count = 1;
  m.param1 = sid;
  m.param2 = ioid;
  m.payload = v;
  return m;
}

Message make_write_ack(std::uint32_t sid, std::uint32_t ioid) {
  Message m;
  m.command = Command::kWriteAck;
  m.param1 = sid;
  m.param2 = ioid;
  return m;
}

Message make_event_add(std::uint32_t sid, std::uint32_t subid) {
  Message m;
  m.command = Command::kEventAdd;
  m.param1 = sid;
  m.param2 = subid;
  return m;
}

Message make_event(std::uint32_t subid, const Value& v) {
  Message m;
  m.command = Command::kEvent;
  m.dtype = dtype_of(v);
  m.count = 1;
  m.param1 = subid;
  m.payload = v;
  return m;
}

Message make_event_cancel(std::uint32_t sid, std::uint32_t subid) {
  Message m;
  m.command = Command::kEventCancel;
  m.param1 = sid;
  m.param2 = subid;
  return m;
}

Message make_read_multi(std::uint32_t ioid, std::vector<std::uint32_t> sids) {
  Message m;
  m.command = Command::kReadMulti;
  m.count = static_cast<std::uint16_t>(sids.size());
  m.param1 = ioid;
  m.payload = MultiReadRequest{std::move(sids)};
  return m;
}

Message make_read_multi_resp(std::uint32_t ioid,
                             std::vector<MultiReadEntry> entries) {
  Message m;
  m.command = Command::kReadMultiResp;
  m.count = static_cast<std::uint16_t>(entries.size());
  m.param1 = ioid;
  m.payload = MultiReadResponse{std::move(entries)};
  return m;
}

Message make_error(Status st, std::uint32_t related_id, std::string text) {
  Message m;
  m.command = Command::kError;
  m.param1 = static_cast<std::uint32_t>(st);
  m.param2 = related_id;
  m.payload = std::move(text);
  return m;
}

Message make_echo(bool reply) {
  Message m;
  m.command = Command::kEcho;
  m.param1 = reply ? 1 : 0;
  return m;
}

void encode_message(const Message& msg, std::vector<std::uint8_t>& out) {
  const auto cmd = static_cast<std::uint16_t>(msg.command);
  if (cmd > kMaxCommandCode)
    throw WireError(WireError::Kind::kInvalidCommand,
                    "invalid command code " + std::to_string(cmd));

  const PayloadKind kind = payload_kind(msg.command);
  std::vector<std::uint8_t> body;
  switch (kind) {
    case PayloadKind::kNone:
      if (!std::holds_alternative<std::monostate>(msg.payload))
        throw WireError(WireError::Kind::kBadValue,
                        "command carries no payload");
      break;
    case PayloadKind::kName: {
      const auto* s = std::get_if<std::string>(&msg.payload);
      if (!s)
        throw WireError(WireError::Kind::kBadValue,
                        "command requires a string payload");
      body.assign(s->begin(), s->end());
      break;
    }
    case PayloadKind::kValue: {
      const auto* v = std::get_if<Value>(&msg.payload);
      if (!v)
        throw WireError(WireError::Kind::kBadValue,
                        "command requires a value payload");
      if (dtype_of(*v) != msg.dtype)
        throw WireError(WireError::Kind::kBadValue,
                        "header dtype does not match value payload");
      std::visit(
          [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TimeDouble> ||
                          std::is_same_v<T, TimeEnum>) {
              if (x.ns >= kNsPerSec)
                throw WireError(WireError::Kind::kBadValue,
                                "nanoseconds out of range");
            }
          },
          *v);
      encode_value(*v, body);
      break;
    }
    case PayloadKind::kMultiReq: {
      const auto* r = std::get_if<MultiReadRequest>(&msg.payload);
      if (!r)
        throw WireError(WireError::Kind::kBadValue,
                        "command requires a multi-read request payload");
      put_u16(body, static_cast<std::uint16_t>(r->sids.size()));
      for (auto sid : r->sids) put_u32(body, sid);
      break;
    }
    case PayloadKind::kMultiResp: {
      const auto* r = std::get_if<MultiReadResponse>(&msg.payload);
      if (!r)
        throw WireError(WireError::Kind::kBadValue,
                        "command requires a multi-read response payload");
      for (const auto& e : r->entries) {
        if ((e.status == 0) != e.value.has_value())
          throw WireError(WireError::Kind::kBadValue,
                          "entry value presence must match status");
        put_u32(body, e.sid);
        put_u16(body, e.status);
        if (e.value) {
          if (e.value->ns >= kNsPerSec)
            throw WireError(WireError::Kind::kBadValue,
                            "nanoseconds out of range");
          put_u16(body, e.value->status);
          put_u16(body, e.value->severity);
          put_u32(body, e.value->sec);
          put_u32(body, e.value->ns);
          body.insert(body.end(), e.value->slot.begin(), e.value->slot.end());
        }
      }
      break;
    }
  }

  if (body.size() > kMaxPayload)
    throw WireError(WireError::Kind::kOversizePayload,
                    "payload of " + std::to_string(body.size()) +
                        " bytes exceeds " + std::to_string(kMaxPayload));

  out.reserve(out.size() + kHeaderSize + padded_len(body.size()));
  put_u16(out, cmd);
  put_u16(out, static_cast<std::uint16_t>(body.size()));
  put_u16(out, static_cast<std::uint16_t>(msg.dtype));
  put_u16(out, msg.count);
  put_u32(out, msg.param1);
  put_u32(out, msg.param2);
  out.insert(out.end(), body.begin(), body.end());
  out.insert(out.end(), padded_len(body.size()) - body.size(), 0);
}

std::vector<std::uint8_t> encode_message(const Message& msg) {
  std::vector<std::uint8_t> out;
  encode_message(msg, out);
  return out;
}

DecodeResult decode_message(std::span<const std::uint8_t> in, Message& out) {
  if (in.size() < kHeaderSize) return {DecodeStatus::kNeedMore, 0};

  const std::uint16_t cmd = get_u16(in.data());
  const std::uint16_t payload_len = get_u16(in.data() + 2);
  const std::uint16_t dtype_raw = get_u16(in.data() + 4);
  const std::uint16_t count = get_u16(in.data() + 6);
  const std::uint32_t param1 = get_u32(in.data() + 8);
  const std::uint32_t param2 = get_u32(in.data() + 12);

  if (cmd > kMaxCommandCode) return {DecodeStatus::kMalformedHeader, 0};
  if (payload_len > kMaxPayload) return {DecodeStatus::kMalformedHeader, 0};

  const std::size_t need = kHeaderSize + padded_len(payload_len);
  if (in.size() < need) return {DecodeStatus::kNeedMore, 0};

  const std::uint8_t* body = in.data() + kHeaderSize;
  if (!zeros(body + payload_len, padded_len(payload_len) - payload_len))
    return {DecodeStatus::kBadPadding, 0};

  Message m;
  m.command = static_cast<Command>(cmd);
  m.count = count;
  m.param1 = param1;
  m.param2 = param2;

  switch (payload_kind(m.command)) {
    case PayloadKind::kNone: {
      if (payload_len != 0) return {DecodeStatus::kBadPayload, 0};
      break;
    }
    case PayloadKind::kName: {
      m.payload = std::string(reinterpret_cast<const char*>(body),
                              payload_len);
      break;
    }
    case PayloadKind::kValue: {
      if (dtype_raw > 3) return {DecodeStatus::kBadPayload, 0};
      const Dtype d = static_cast<Dtype>(dtype_raw);
      if (payload_len != value_encoded_size(d))
        return {DecodeStatus::kBadPayload, 0};
      Value v;
      if (!decode_value(d, body, v)) return {DecodeStatus::kBadPayload, 0};
      m.payload = v;
      break;
    }
    case PayloadKind::kMultiReq: {
      if (payload_len < 2) return {DecodeStatus::kBadPayload, 0};
      const std::uint16_t n = get_u16(body);
      if (payload_len != 2 + 4 * static_cast<std::size_t>(n))
        return {DecodeStatus::kBadPayload, 0};
      MultiReadRequest req;
      req.sids.reserve(n);
      for (std::uint16_t i = 0; i < n; ++i)
        req.sids.push_back(get_u32(body + 2 + 4 * i));
      m.payload = std::move(req);
      break;
    }
    case PayloadKind::kMultiResp: {
      MultiReadResponse resp;
      std::size_t off = 0;
      while (off < payload_len) {
        if (payload_len - off < 6) return {DecodeStatus::kBadPayload, 0};
        MultiReadEntry e;
        e.sid = get_u32(body + off);
        e.status = get_u16(body + off + 4);
        off += 6;
        if (e.status == 0) {
          if (payload_len - off < 20) return {DecodeStatus::kBadPayload, 0};
          TimeSlot s;
          s.status = get_u16(body + off);
          s.severity = get_u16(body + off + 2);
          s.sec = get_u32(body + off + 4);
          s.ns = get_u32(body + off + 8);
          if (s.ns >= kNsPerSec) return {DecodeStatus::kBadPayload, 0};
          std::memcpy(s.slot.data(), body + off + 12, 8);
          e.value = s;
          off += 20;
        }
        resp.entries.push_back(std::move(e));
      }
      m.payload = std::move(resp);
      break;
    }
  }

  // Preserve the dtype field bit-for-bit so decode is encode's exact inverse.
  m.dtype = static_cast<Dtype>(dtype_raw);
  out = std::move(m);
  return {DecodeStatus::kOk, need};
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  // Compact lazily once consumed bytes dominate the buffer.
  if (pos_ > 4096 && pos_ > buf_.size() / 2) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

DecodeStatus FrameDecoder::next(Message& out) {
  auto res = decode_message(
      std::span<const std::uint8_t>(buf_.data() + pos_, buf_.size() - pos_),
      out);
  if (res.status == DecodeStatus::kOk) pos_ += res.consumed;
  return res.status;
}

}  // namespace pvmw::wire

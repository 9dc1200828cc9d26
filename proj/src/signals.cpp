// SPDX-License-Identifier: Apache-2.0

#include "signals.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace pvmw {

PlantState plant_step(const PlantState& state, double dt_s) {
  if (!(dt_s > 0) || !(dt_s < state.tau_s))
    throw PvError(Errc::kInvalidArgument,
                  "plant step requires 0 < dt < tau");
  PlantState next = state;
  if (state.kp != 0.0 || state.ki != 0.0) {
    const double e = state.setpoint - state.x;
    next.integrator = state.integrator + e * dt_s;
    next.u = state.kp * e + state.ki * next.integrator;
  }
  next.x = state.x + dt_s * (-state.x + state.k_gain * next.u) / state.tau_s;
  return next;
}

FsmPhase fsm_step(FsmPhase state, FsmEvent event) {
  if (event == FsmEvent::kFault) return FsmPhase::kFault;
  switch (state) {
    case FsmPhase::kIdle:
      return event == FsmEvent::kStart ? FsmPhase::kRunning : FsmPhase::kIdle;
    case FsmPhase::kRunning:
      return event == FsmEvent::kStop ? FsmPhase::kIdle : FsmPhase::kRunning;
    case FsmPhase::kFault:
      return event == FsmEvent::kReset ? FsmPhase::kIdle : FsmPhase::kFault;
  }
  return state;
}

const char* fsm_phase_name(FsmPhase s) {
  switch (s) {
    case FsmPhase::kIdle: return "Idle";
    case FsmPhase::kRunning: return "Running";
    case FsmPhase::kFault: return "Fault";
  }
  return "?";
}

FsmEvent parse_fsm_event(const std::string& s) {
  if (s == "start") return FsmEvent::kStart;
  if (s == "stop") return FsmEvent::kStop;
  if (s == "fault") return FsmEvent::kFault;
  if (s == "reset") return FsmEvent::kReset;
  throw PvError(Errc::kParse, "unknown FSM event '" + s + "'");
}

const char* fsm_event_name(FsmEvent e) {
  switch (e) {
    case FsmEvent::kStart: return "start";
    case FsmEvent::kStop: return "stop";
    case FsmEvent::kFault: return "fault";
    case FsmEvent::kReset: return "reset";
  }
  return "?";
}

bool BindSpec::writable_kind() const {
  switch (kind) {
    case Kind::kCell:
    case Kind::kSetpoint:
    case Kind::kKp:
    case Kind::kKi:
    case Kind::kFsmCmd:
      return true;
    default:
      return false;
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double u01(std::uint64_t bits) {
  // (0, 1]: never zero so log() below is safe.
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double parse_num(const std::string& text, const std::string& field) {
  double v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw PvError(Errc::kParse,
                  "bad number '" + text + "' in source spec " + field);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

double normal_draw(std::uint64_t seed, std::uint64_t index) {
  // Box-Muller on two splitmix64 streams keyed by (seed, index).
  const std::uint64_t base = splitmix64(seed ^ splitmix64(index));
  const double u1 = u01(splitmix64(base));
  const double u2 = u01(splitmix64(base + 0x632BE59BD9B4E019ull));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

BindSpec parse_bind_spec(const std::string& text) {
  BindSpec b;
  std::string head = text;
  std::string args;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    args = text.substr(pos + 1);
  }
  auto need = [&](std::size_t n) {
    auto parts = split(args, ',');
    if (args.empty() || parts.size() != n)
      throw PvError(Errc::kParse, "source '" + head + "' expects " +
                                      std::to_string(n) + " argument(s): '" +
                                      text + "'");
    return parts;
  };

  if (head == "sine") {
    auto a = need(4);
    b.kind = BindSpec::Kind::kSine;
    b.amplitude = parse_num(a[0], "sine");
    b.frequency_hz = parse_num(a[1], "sine");
    b.phase = parse_num(a[2], "sine");
    b.offset = parse_num(a[3], "sine");
    if (!(b.frequency_hz > 0))
      throw PvError(Errc::kParse, "sine frequency must be positive");
  } else if (head == "noise") {
    auto a = need(3);
    b.kind = BindSpec::Kind::kNoise;
    b.mean = parse_num(a[0], "noise");
    b.stddev = parse_num(a[1], "noise");
    b.seed = static_cast<std::uint64_t>(parse_num(a[2], "noise"));
    if (b.stddev < 0)
      throw PvError(Errc::kParse, "noise stddev must be >= 0");
  } else if (head == "toggle") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kToggle;
    b.period_s = parse_num(a[0], "toggle");
    if (!(b.period_s > 0))
      throw PvError(Errc::kParse, "toggle period must be positive");
  } else if (head == "const") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kConst;
    b.init = parse_num(a[0], "const");
  } else if (head == "counter") {
    b.kind = BindSpec::Kind::kCounter;
  } else if (head == "plant") {
    b.kind = BindSpec::Kind::kPlantOut;
  } else if (head == "ctrl") {
    b.kind = BindSpec::Kind::kCtrlOut;
  } else if (head == "fsm") {
    b.kind = BindSpec::Kind::kFsmState;
  } else if (head == "cell") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kCell;
    b.init = parse_num(a[0], "cell");
  } else if (head == "setpoint") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kSetpoint;
    b.init = parse_num(a[0], "setpoint");
  } else if (head == "kp") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kKp;
    b.init = parse_num(a[0], "kp");
  } else if (head == "ki") {
    auto a = need(1);
    b.kind = BindSpec::Kind::kKi;
    b.init = parse_num(a[0], "ki");
  } else if (head == "fsmcmd") {
    if (args.empty())
      throw PvError(Errc::kParse, "fsmcmd expects an event name");
    b.kind = BindSpec::Kind::kFsmCmd;
    b.fsm_event = parse_fsm_event(args);
  } else {
    throw PvError(Errc::kParse, "unknown source spec '" + text + "'");
  }
  return b;
}

std::string format_bind_spec(const BindSpec& b) {
  using K = BindSpec::Kind;
  switch (b.kind) {
    case K::kSine:
      return "sine:" + format_num(b.amplitude) + "," +
             format_num(b.frequency_hz) + "," + format_num(b.phase) + "," +
             format_num(b.offset);
    case K::kNoise:
      return "noise:" + format_num(b.mean) + "," + format_num(b.stddev) +
             "," + format_num(static_cast<double>(b.seed));
    case K::kToggle:
      return "toggle:" + format_num(b.period_s);
    case K::kConst:
      return "const:" + format_num(b.init);
    case K::kCounter:
      return "counter";
    case K::kPlantOut:
      return "plant";
    case K::kCtrlOut:
      return "ctrl";
    case K::kFsmState:
      return "fsm";
    case K::kCell:
      return "cell:" + format_num(b.init);
    case K::kSetpoint:
      return "setpoint:" + format_num(b.init);
    case K::kKp:
      return "kp:" + format_num(b.init);
    case K::kKi:
      return "ki:" + format_num(b.init);
    case K::kFsmCmd:
      return std::string("fsmcmd:") + fsm_event_name(b.fsm_event);
  }
  return "const:0";
}

double sample_bind(const BindSpec& spec, double t_s, std::uint64_t draw_index,
                   const SimContext& sim) {
  using K = BindSpec::Kind;
  switch (spec.kind) {
    case K::kSine:
      return spec.offset +
             spec.amplitude *
                 std::sin(2.0 * std::numbers::pi * spec.frequency_hz * t_s +
                          spec.phase);
    case K::kNoise:
      return spec.mean + spec.stddev * normal_draw(spec.seed, draw_index);
    case K::kToggle:
      return static_cast<double>(
          static_cast<std::uint64_t>(std::floor(t_s / spec.period_s)) % 2);
    case K::kCounter:
      return static_cast<double>(draw_index);
    case K::kPlantOut:
      return sim.plant.x;
    case K::kCtrlOut:
      return sim.plant.u;
    case K::kFsmState:
      return static_cast<double>(static_cast<std::uint16_t>(sim.fsm));
    case K::kConst:
    case K::kCell:
    case K::kSetpoint:
    case K::kKp:
    case K::kKi:
    case K::kFsmCmd:
      return spec.init;
  }
  return 0.0;
}

}  // namespace pvmw

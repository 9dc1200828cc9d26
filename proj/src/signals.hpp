// SPDX-License-Identifier: Apache-2.0
//
// Simulated signal sources, the first-order HIL plant with PI control, and
// the controller finite state machine. Everything here is deterministic
// given (seed, draw index, logical sample time) so that two servers driving
// identical bindings produce identical value sequences.

#ifndef PVMW_SIGNALS_HPP_
#define PVMW_SIGNALS_HPP_

#include <cstdint>
#include <string>

#include "error.hpp"

namespace pvmw {

// ---------------------------------------------------------------------------
// Plant: first-order lag under PI control, explicit Euler integration.

struct PlantState {
  double x = 0.0;          // plant output
  double u = 0.0;          // control input
  double setpoint = 0.0;
  double kp = 0.0;
  double ki = 0.0;
  double integrator = 0.0;
  double tau_s = 1.0;      // plant time constant, > 0
  double k_gain = 1.0;     // plant DC gain
};

/// One Euler step of dt_s seconds (requires 0 < dt_s < tau_s). With both
/// gains zero the controller is in manual mode: u and the integrator are
/// left untouched and only the plant dynamics advance.
PlantState plant_step(const PlantState& state, double dt_s);

// ---------------------------------------------------------------------------
// Finite state machine.

enum class FsmPhase : std::uint16_t { kIdle = 0, kRunning = 1, kFault = 2 };
enum class FsmEvent { kStart, kStop, kFault, kReset };

/// Idle+start->Running, Running+stop->Idle, any+fault->Fault,
/// Fault+reset->Idle; every other pair is a no-op.
FsmPhase fsm_step(FsmPhase state, FsmEvent event);

const char* fsm_phase_name(FsmPhase s);
FsmEvent parse_fsm_event(const std::string& s);
const char* fsm_event_name(FsmEvent e);

// ---------------------------------------------------------------------------
// Signal bindings.

/// How a shared variable or a directly-served record obtains (or consumes)
/// its raw value. Readback kinds sample a waveform or the simulation;
/// writable kinds (kCell, kSetpoint, kKp, kKi, kFsmCmd) hold a cell that
/// network writes update.
struct BindSpec {
  enum class Kind {
    kSine,      // offset + amplitude * sin(2*pi*f*t + phase)
    kNoise,     // seeded normal draws, reproducible per (seed, draw index)
    kToggle,    // floor(t / period) mod 2
    kConst,     // fixed value (writable cell when direction is output)
    kCounter,   // the draw index itself; carries sequence numbers
    kPlantOut,  // plant x
    kCtrlOut,   // controller u
    kFsmState,  // FSM phase index
    kCell,      // writable holding cell
    kSetpoint,  // writable, feeds plant setpoint
    kKp,        // writable, feeds proportional gain
    kKi,        // writable, feeds integral gain
    kFsmCmd,    // writable, nonzero write fires the bound FSM event
  };

  Kind kind = Kind::kConst;
  double amplitude = 1.0;
  double frequency_hz = 1.0;
  double phase = 0.0;
  double offset = 0.0;
  double mean = 0.0;
  double stddev = 1.0;
  std::uint64_t seed = 0;
  double period_s = 1.0;
  double init = 0.0;  // kConst value / writable cell initial value
  FsmEvent fsm_event = FsmEvent::kStart;

  bool writable_kind() const;
};

/// Parse the textual source spec used in PV lists and database SRC fields,
/// e.g. "sine:1,0.2,0,5", "noise:0,1,42", "toggle:2", "const:3.5",
/// "counter", "plant", "ctrl", "fsm", "cell:0", "setpoint:1.0", "kp:0.5",
/// "ki:0.1", "fsmcmd:start". Throws PvError(kParse) on malformed input.
BindSpec parse_bind_spec(const std::string& text);

/// Canonical text for a BindSpec; parse_bind_spec(format_bind_spec(b))
/// reproduces b.
std::string format_bind_spec(const BindSpec& spec);

/// Deterministic standard normal draw for (seed, index); the generator is
/// self-contained so sequences are stable across platforms and runs.
double normal_draw(std::uint64_t seed, std::uint64_t index);

struct SimContext {
  PlantState plant;
  FsmPhase fsm = FsmPhase::kIdle;
};

/// Raw sample for a binding at logical time t_s / draw index. Writable kinds
/// return the current cell value (held in spec.init by the owning server).
double sample_bind(const BindSpec& spec, double t_s, std::uint64_t draw_index,
                   const SimContext& sim);

}  // namespace pvmw

#endif  // PVMW_SIGNALS_HPP_

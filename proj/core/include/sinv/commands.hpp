#pragma once

#include <iosfwd>
#include <string>

#include "sinv/config.hpp"

namespace sinv {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // config/schema/input-format problems
inline constexpr int kExitSynth = 3;   // controller synthesis failed
inline constexpr int kExitSim = 4;     // simulation invariant violated
inline constexpr int kExitFit = 5;     // identification fit failed

/// Synthesizes the configured controller (feedforward, plus feedback when
/// enabled) for the configured gripper.
Controller build_controller(const Config& cfg);

int cmd_synth(const Config& cfg, const std::string& out_dir, std::ostream& log);
int cmd_simulate(const Config& cfg, const std::string& out_dir, std::ostream& log);
int cmd_analyze(const Config& cfg, const std::string& out_dir, std::ostream& log);
int cmd_identify(const std::string& trace_path, double gain, double u_step,
                 const std::string& out_dir, std::ostream& log);

}  // namespace sinv

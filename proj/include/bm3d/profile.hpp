#pragma once

#include "bm3d/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bm3d {

enum class Mode { Baseline, Improved, Satellite };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

// Hard-threshold stage tunables.
struct HtParams {
  int n1 = 8;               // block side
  int n2 = 16;              // maximum group depth, power of two
  int nstep = 3;            // reference-grid stride
  int ns = 39;              // search-window side
  Real tau_match = 2500.0;  // similarity bound, intensity^2 per pixel
  std::optional<Real> lambda_2d;  // prefiltered matching when present
  Real lambda_3d = 2.7;     // shrinkage threshold multiplier
};

// Wiener stage tunables.
struct WienerParams {
  int n1 = 8;
  int n2 = 32;
  int nstep = 3;
  int ns = 39;
  Real tau_match = 400.0;
};

// Every tunable of one two-stage run.
struct ParameterProfile {
  HtParams ht;
  WienerParams wie;
  Real window_beta = 2.0;
};

// Throws on malformed profiles (counts < 1, non-power-of-two n2, negative tau).
void validate_profile(const ParameterProfile& profile);

// Noise-band profile lookup. sigma must be positive; sigma > 100 clamps to the
// top band and appends a note to `warnings` when given.
ParameterProfile select_profile(Real sigma, Mode mode, std::vector<std::string>* warnings = nullptr);

// Flat "key = value" override syntax shared by --profile-file and print-profile.
// An absent ht.lambda_2d round-trips as the value `none`.
ParameterProfile parse_profile_overrides(const ParameterProfile& base, const std::string& text);
ParameterProfile load_profile_overrides(const ParameterProfile& base, const std::string& path);
std::string format_profile(const ParameterProfile& profile);

}  // namespace bm3d

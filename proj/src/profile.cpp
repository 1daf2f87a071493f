#include "bm3d/profile.hpp"

#include "bm3d/transforms.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bm3d {

namespace {

enum class Band { Low, Medium, High, VeryHigh };

Band band_of(Real sigma) {
  if (sigma < 30.0) return Band::Low;
  if (sigma < 50.0) return Band::Medium;
  if (sigma < 80.0) return Band::High;
  return Band::VeryHigh;
}

void check_count(long value, const char* name) {
  require(value >= 1, std::string("profile: ") + name + " must be >= 1");
}

std::string format_real(Real value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  require(ec == std::errc(), "format_real: conversion failed");
  return std::string(buf, end);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_count(const std::string& value, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0') {
    throw ContractError("profile: expected an integer for " + key + ", got '" + value + "'");
  }
  return static_cast<int>(v);
}

Real parse_real(const std::string& value, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const Real v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0') {
    throw ContractError("profile: expected a number for " + key + ", got '" + value + "'");
  }
  return v;
}

void apply_override(ParameterProfile& p, const std::string& key, const std::string& value) {
  if (key == "ht.n1") p.ht.n1 = parse_count(value, key);
  else if (key == "ht.n2") p.ht.n2 = parse_count(value, key);
  else if (key == "ht.nstep") p.ht.nstep = parse_count(value, key);
  else if (key == "ht.ns") p.ht.ns = parse_count(value, key);
  else if (key == "ht.tau_match") p.ht.tau_match = parse_real(value, key);
  else if (key == "ht.lambda_2d") {
    if (value == "none") p.ht.lambda_2d.reset();
    else p.ht.lambda_2d = parse_real(value, key);
  }
  else if (key == "ht.lambda_3d") p.ht.lambda_3d = parse_real(value, key);
  else if (key == "wie.n1") p.wie.n1 = parse_count(value, key);
  else if (key == "wie.n2") p.wie.n2 = parse_count(value, key);
  else if (key == "wie.nstep") p.wie.nstep = parse_count(value, key);
  else if (key == "wie.ns") p.wie.ns = parse_count(value, key);
  else if (key == "wie.tau_match") p.wie.tau_match = parse_real(value, key);
  else if (key == "window_beta") p.window_beta = parse_real(value, key);
  else throw ContractError("profile: unknown key '" + key + "'");
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "baseline") return Mode::Baseline;
  if (name == "improved") return Mode::Improved;
  if (name == "satellite") return Mode::Satellite;
  throw ContractError("unknown mode '" + name + "' (expected baseline, improved, or satellite)");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Baseline: return "baseline";
    case Mode::Improved: return "improved";
    case Mode::Satellite: return "satellite";
  }
  throw ContractError("mode_name: invalid mode value");
}

void validate_profile(const ParameterProfile& profile) {
  check_count(profile.ht.n1, "ht.n1");
  check_count(profile.ht.n2, "ht.n2");
  check_count(profile.ht.nstep, "ht.nstep");
  check_count(profile.ht.ns, "ht.ns");
  check_count(profile.wie.n1, "wie.n1");
  check_count(profile.wie.n2, "wie.n2");
  check_count(profile.wie.nstep, "wie.nstep");
  check_count(profile.wie.ns, "wie.ns");
  require(is_power_of_two(profile.ht.n2), "profile: ht.n2 must be a power of two");
  require(is_power_of_two(profile.wie.n2), "profile: wie.n2 must be a power of two");
  require(profile.ht.tau_match >= 0.0, "profile: ht.tau_match must be >= 0");
  require(profile.wie.tau_match >= 0.0, "profile: wie.tau_match must be >= 0");
  require(profile.ht.lambda_3d >= 0.0, "profile: ht.lambda_3d must be >= 0");
  require(!profile.ht.lambda_2d || *profile.ht.lambda_2d >= 0.0,
          "profile: ht.lambda_2d must be >= 0");
  require(profile.window_beta >= 0.0, "profile: window_beta must be >= 0");
  require(profile.ht.ns >= profile.ht.n1, "profile: ht.ns must be >= ht.n1");
  require(profile.wie.ns >= profile.wie.n1, "profile: wie.ns must be >= wie.n1");
}

ParameterProfile select_profile(Real sigma, Mode mode, std::vector<std::string>* warnings) {
  require(sigma > 0.0, "select_profile: sigma must be positive");
  Real banded = sigma;
  if (sigma > 100.0) {
    banded = 100.0;
    if (warnings) {
      warnings->push_back("sigma " + format_real(sigma) +
                          " exceeds 100; using the top-band profile");
    }
  }
  const Band band = band_of(banded);

  ParameterProfile p;
  if (mode == Mode::Baseline) {
    if (band == Band::Low || band == Band::Medium) {
      p.ht.tau_match = 2500.0;
      p.wie.nstep = 3;
    } else {
      p.ht.n1 = 11;
      p.ht.n2 = 16;
      p.ht.tau_match = 5000.0;
    }
    if (banded >= 40.0) p.ht.lambda_2d = 2.0;
  } else {
    switch (band) {
      case Band::Low:
        p.ht.tau_match = 3000.0;
        p.wie.nstep = 2;
        break;
      case Band::Medium:
        p.ht.tau_match = 6500.0;
        p.wie.nstep = 2;
        break;
      case Band::High:
        p.ht.n1 = 8;
        p.ht.n2 = 32;
        p.ht.tau_match = 15000.0;
        break;
      case Band::VeryHigh:
        p.ht.n1 = 8;
        p.ht.n2 = 64;
        p.ht.tau_match = 30000.0;
        break;
    }
    if (mode == Mode::Satellite) {
      p.ht.tau_match += 3000.0;
      p.ht.n1 = 8;
      p.ht.ns = 99;
    }
  }
  validate_profile(p);
  return p;
}

ParameterProfile parse_profile_overrides(const ParameterProfile& base, const std::string& text) {
  ParameterProfile p = base;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ContractError("profile: line " + std::to_string(lineno) +
                          " is not 'key = value': '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ContractError("profile: line " + std::to_string(lineno) +
                          " is missing a key or value");
    }
    apply_override(p, key, value);
  }
  validate_profile(p);
  return p;
}

ParameterProfile load_profile_overrides(const ParameterProfile& base, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open profile file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_profile_overrides(base, buf.str());
}

std::string format_profile(const ParameterProfile& profile) {
  std::ostringstream out;
  out << "ht.n1 = " << profile.ht.n1 << '\n';
  out << "ht.n2 = " << profile.ht.n2 << '\n';
  out << "ht.nstep = " << profile.ht.nstep << '\n';
  out << "ht.ns = " << profile.ht.ns << '\n';
  out << "ht.tau_match = " << format_real(profile.ht.tau_match) << '\n';
  out << "ht.lambda_2d = "
      << (profile.ht.lambda_2d ? format_real(*profile.ht.lambda_2d) : "none") << '\n';
  out << "ht.lambda_3d = " << format_real(profile.ht.lambda_3d) << '\n';
  out << "wie.n1 = " << profile.wie.n1 << '\n';
  out << "wie.n2 = " << profile.wie.n2 << '\n';
  out << "wie.nstep = " << profile.wie.nstep << '\n';
  out << "wie.ns = " << profile.wie.ns << '\n';
  out << "wie.tau_match = " << format_real(profile.wie.tau_match) << '\n';
  out << "window_beta = " << format_real(profile.window_beta) << '\n';
  return out.str();
}

}  // namespace bm3d

#include "optocool/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "optocool/errors.hpp"

namespace optocool::units {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::pair<std::string_view, double>, 4> kFrequency{{
    {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}};
constexpr std::array<std::pair<std::string_view, double>, 3> kEnergy{{
    {"ueV", 1.0}, {"\xce\xbc" "eV", 1.0}, {"meV", 1e3}}};

}  // namespace

std::string_view to_string(EnergyScale s) {
  return s == EnergyScale::h_gamma ? "h_gamma" : "hbar_gamma";
}

EnergyScale energy_scale_from_string(std::string_view name) {
  if (name == "h_gamma") return EnergyScale::h_gamma;
  if (name == "hbar_gamma") return EnergyScale::hbar_gamma;
  throw ConfigError("unknown energy_scale '" + std::string(name) + "' (h_gamma|hbar_gamma)");
}

double UnitSystem::frequency_to_internal(double hz) const { return hz / gamma_hz; }
double UnitSystem::frequency_to_si(double internal) const { return internal * gamma_hz; }

double UnitSystem::energy_ueV_to_internal(double ueV) const {
  const double joules = ueV * 1e-6 * kElementaryCharge;
  double unit = kPlanck * gamma_hz;  // hbar * (2 pi f)
  if (energy_scale == EnergyScale::h_gamma) unit *= kTwoPi;
  return joules / unit;
}

double UnitSystem::energy_to_ueV(double internal) const {
  double unit = kPlanck * gamma_hz;
  if (energy_scale == EnergyScale::h_gamma) unit *= kTwoPi;
  return internal * unit / (1e-6 * kElementaryCharge);
}

double parse_quantity(std::string_view text, Dimension dim, const UnitSystem& system,
                      const std::string& key) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end == text.data()) {
    throw ConfigError("'" + key + "': expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw ConfigError("'" + key + "': value must be finite");
  const std::string_view unit = trim(text.substr(static_cast<std::size_t>(end - text.data())));
  if (unit.empty()) return value;

  auto needs_scale = [&] {
    if (!system.has_scale()) {
      throw ConfigError("'" + key + "': unit '" + std::string(unit) +
                        "' needs cavity.gamma to be set");
    }
  };
  if (dim == Dimension::frequency) {
    if (unit == "*gamma") return value;
    for (const auto& [name, factor] : kFrequency) {
      if (unit == name) {
        needs_scale();
        return system.frequency_to_internal(value * factor);
      }
    }
  } else if (dim == Dimension::energy) {
    if (unit == "*hgamma") return value;
    for (const auto& [name, factor] : kEnergy) {
      if (unit == name) {
        needs_scale();
        return system.energy_ueV_to_internal(value * factor);
      }
    }
  }
  throw ConfigError("'" + key + "': unit '" + std::string(unit) + "' not valid here");
}

}  // namespace optocool::units

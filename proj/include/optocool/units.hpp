#pragma once

#include <string>
#include <string_view>

namespace optocool::units {

inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kTwoPi = 6.283185307179586476925;

// How an energy is made dimensionless. h_gamma divides by h * gamma with
// gamma the angular linewidth (= 2 pi hbar gamma); hbar_gamma divides by
// hbar * gamma literally. The first is what reproduces the reference design.
enum class EnergyScale { h_gamma, hbar_gamma };

std::string_view to_string(EnergyScale s);
EnergyScale energy_scale_from_string(std::string_view name);

enum class Dimension { frequency, energy, dimensionless };

// Conversions between SI inputs and internal gamma units. Frequencies are
// ordinary frequencies in Hz (the 2 pi cancels against gamma's).
struct UnitSystem {
  double gamma_hz = 0.0;  // cavity linewidth / 2 pi; 0 = not given
  EnergyScale energy_scale = EnergyScale::h_gamma;

  bool has_scale() const { return gamma_hz > 0.0; }

  double frequency_to_internal(double hz) const;
  double frequency_to_si(double internal) const;
  double energy_ueV_to_internal(double ueV) const;
  double energy_to_ueV(double internal) const;

  friend bool operator==(const UnitSystem&, const UnitSystem&) = default;
};

// Parses "<number> [unit]" for a quantity of the given dimension.
// Accepted units: Hz kHz MHz GHz *gamma (frequency); ueV, μeV, meV,
// *hgamma (energy). No unit means an internal value. `key` names the entry
// in error messages.
double parse_quantity(std::string_view text, Dimension dim, const UnitSystem& system,
                      const std::string& key);

}  // namespace optocool::units

#pragma once

#include <stdexcept>
#include <string>

namespace spinent {

// Energies are in meV, temperatures in kelvin, fields in tesla.
inline constexpr double kBoltzmannMeVPerK = 0.0861733;
inline constexpr double kBohrMagnetonMeVPerT = 0.05788381806;

// CGS-emu constants for molar susceptibility conversion.
namespace cgs {
inline constexpr double kAvogadro = 6.02214076e23;         // 1/mol
inline constexpr double kBohrMagneton = 9.2740100783e-21;  // erg/G
inline constexpr double kBoltzmann = 1.380649e-16;         // erg/K
/// N_A mu_B^2 / k_B in emu K / mol (about 0.3751).
inline constexpr double kMolarCurieUnit = kAvogadro * kBohrMagneton * kBohrMagneton / kBoltzmann;
}  // namespace cgs

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical procedure fails (eigensolver, non-convergent fit).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinent

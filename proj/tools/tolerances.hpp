#pragma once

#include "json.hpp"

namespace kaclab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Baked-in checks. Bump kVersion whenever a value changes.
namespace tol {
inline constexpr int kVersion = 1;
inline constexpr double kMeanSigmas = 3.0;          // moments: |mean - sqrt d| / se
inline constexpr double kAnalyticMeanRel = 1e-6;    // kacrice: integral of rho_1 vs sqrt d
inline constexpr double kBridgeSigmas = 3.0;        // compare: |MC - quadrature| / combined se
inline constexpr double kConcentrationC = 0.5;      // concentration: deviation level checked
inline constexpr double kBergmanRadius = 3.0;       // bergman: sup over [-R, R]^2
inline constexpr double kFactorizationMax = 0.05;   // neardiag: far-pair defect
inline constexpr double kVanishingFraction = 0.05;  // neardiag: rho_2 at eps = 1e-4 vs rho_1^2
inline constexpr double kCrossSigmas = 5.0;         // neardiag: two formulations, in se
inline constexpr double kA1Lo = 0.98, kA1Hi = 1.02; // fit: leading coefficient of E[n]
inline constexpr double kA2Lo = 0.95, kA2Hi = 1.05; // fit: leading coefficient of E[n^2]
inline constexpr double kChiSquarePValue = 0.01;    // complex: uniformity of zero counts
}  // namespace tol

inline nlohmann::json toleranceTable() {
  return {{"version", tol::kVersion},
          {"meanSigmas", tol::kMeanSigmas},
          {"analyticMeanRel", tol::kAnalyticMeanRel},
          {"bridgeSigmas", tol::kBridgeSigmas},
          {"concentrationC", tol::kConcentrationC},
          {"bergmanRadius", tol::kBergmanRadius},
          {"factorizationMax", tol::kFactorizationMax},
          {"vanishingFraction", tol::kVanishingFraction},
          {"crossSigmas", tol::kCrossSigmas},
          {"a1", {tol::kA1Lo, tol::kA1Hi}},
          {"a2", {tol::kA2Lo, tol::kA2Hi}},
          {"chiSquarePValue", tol::kChiSquarePValue}};
}

}  // namespace kaclab::cli

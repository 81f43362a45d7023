#pragma once

#include <cstddef>

namespace ellbandit {

// 1 + ln(max(x, 1)).
double logbar(double x);

// Regret bound of E2TC(3) on a centered ellipsoid:
//   6dσ√T + 984σ²d²/B·logbar(TB²/(σ²d²)) + 290dB + 2TB·exp((2d/3 − (2/9)√T·B/σ)⁻)
// where (·)⁻ = min(·, 0) and B = ‖θ‖_A. With σ = 0 it returns 2dB.
double centered_regret_rhs(std::size_t d, double sigma, double horizon, double norm_a_theta);

// Same for the reduced policy on a translated ellipsoid:
//   7dσ√T + 2622σ²d²/B·logbar(TB²/(4σ²d²)) + 2TB·exp((2d/3 − (1/9)√T·B/σ)⁻) + 392dB
double translated_regret_rhs(std::size_t d, double sigma, double horizon, double norm_a_theta);

// Warm-up guarantees for α = 3:
//   P[B̂ ∉ [B/2, 3B/2]] ≤ 164σ²d²/(TB²)·logbar(TB²/(d²σ²)) + 48d/T
//   E[warm-up length] ≤ 164σ²d²/B²·logbar(TB²/(σ²d²)) + 48d
double warmup_failure_rhs(std::size_t d, double sigma, double horizon, double norm_a_theta);
double warmup_length_rhs(std::size_t d, double sigma, double horizon, double norm_a_theta);

// min(σd√T/16, BT/4): regret floor of the hard family.
double minimax_lower_bound(std::size_t d, double sigma, double horizon, double b);

}  // namespace ellbandit

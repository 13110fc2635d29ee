#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace clutter {

/// K-factors at or beyond these bounds (dB) behave as the K = inf / K = 0 limits.
inline constexpr double k_db_cap = 60.0;

/// Unit-mean-power Rician fluctuation for one direction.
struct FluctuationSeries {
    double dt_s = 0.6;
    std::vector<std::complex<double>> samples;
};

/// sqrt(K/(K+1)) e^{i psi} + sqrt(1/(K+1)) eta_t with eta_t i.i.d. CN(0, 1)
/// and K = 10^(k_db/10). Deterministic in `seed`.
FluctuationSeries sample_fluctuation(double k_db, double psi_rad, int n_steps, std::uint64_t seed, double dt_s = 0.6);

/// Outcome of the moment-method K estimate.
struct KFactorEstimate {
    enum class Kind {
        Finite,
        Rayleigh, // Var[P] >= E[P]^2, K = 0
        Constant, // Var[P] = 0, K = inf
    };

    Kind kind = Kind::Finite;
    double k_db = 0.0; // -inf for Rayleigh, +inf for Constant

    bool finite() const noexcept { return kind == Kind::Finite; }
};

/// Moment-method Rician K estimate from a power series:
/// gamma = sqrt(1 - Var[P]/E[P]^2), K = gamma / (1 - gamma), with the
/// population (1/N) variance. Needs >= 8 finite nonnegative samples with a
/// positive mean.
KFactorEstimate k_moment_estimate(std::span<const double> powers);

} // namespace clutter

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cirfilter/model.hpp"
#include "cirfilter/simulation.hpp"

namespace cirfilter {

/// Monte Carlo estimate of a filtered quantity with its standard error.
struct OracleEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Estimates at one query time: posterior mean of the intensity and the mgf
/// at the requested transform points.
struct PfQuery {
    double t = 0.0;
    OracleEstimate lambda_hat;
    std::vector<OracleEstimate> mgf;
    double ess = 0.0;
};

/// Weighted particle ensemble (exposed mainly for tests).
struct ParticleCloud {
    std::vector<double> lambda;
    std::vector<double> weight;  // normalised
    double time = 0.0;
    double ess = 0.0;
};

struct PfOptions {
    std::size_t particles = 100000;
    double substep = 0.01;          // weight-integration step between events
    double resample_fraction = 0.5; // systematic resampling when ESS < fraction * N
    std::uint64_t seed = 1;
    unsigned threads = 0;           // 0: library default / CIRFILTER_THREADS
};

/// Bootstrap filter for point-process observations of the square-root
/// intensity. Particles move by exact transitions; log-weights accumulate
/// -int lambda dt (trapezoidal per substep) between events and log(lambda)
/// at each observed jump. Estimates are weight-averaged statistics with
/// standard errors from the weighted second moment (se^2 = sum w_i^2 (x_i -
/// xbar)^2, i.e. sample std / sqrt(ESS)). Query times coinciding with a jump
/// report the post-jump posterior. Throws Degeneracy if every weight
/// underflows despite log-space arithmetic.
std::vector<PfQuery> particle_filter(const JumpRecord& jumps, const ModelParams& params,
                                     const GammaLaw& prior,
                                     const std::vector<double>& query_times,
                                     const std::vector<double>& mgf_points,
                                     const PfOptions& options,
                                     ParticleCloud* final_cloud = nullptr);

/// Same filter for a constant unobserved intensity (the all-zero-parameter
/// model): no propagation, exact exponential weight decay between events.
std::vector<PfQuery> particle_filter_constant(const JumpRecord& jumps, const GammaLaw& prior,
                                              const std::vector<double>& query_times,
                                              const std::vector<double>& mgf_points,
                                              const PfOptions& options,
                                              ParticleCloud* final_cloud = nullptr);

}  // namespace cirfilter

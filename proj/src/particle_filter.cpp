#include "cirfilter/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cirfilter/errors.hpp"
#include "cirfilter/parallel.hpp"
#include "cirfilter/rng.hpp"

namespace cirfilter {

namespace {

struct Event {
    double t;
    bool jump;
    std::size_t query_slot;  // index into the output, or npos
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Jumps sort before queries at the same instant, so queries see the
// post-jump posterior.
std::vector<Event> build_timeline(const JumpRecord& jumps, const std::vector<double>& queries) {
    std::vector<Event> events;
    events.reserve(jumps.count() + queries.size());
    for (double t : jumps.times) events.push_back({t, true, Event::npos});
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (!(queries[i] >= 0.0)) throw OutOfDomain("query times must be nonnegative");
        events.push_back({queries[i], false, i});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.jump && !b.jump;
    });
    return events;
}

class WeightedCloud {
  public:
    WeightedCloud(std::size_t n) : lambda_(n), logw_(n, 0.0), norm_(n) {}

    std::vector<double>& lambda() { return lambda_; }
    std::vector<double>& logw() { return logw_; }
    std::size_t size() const { return lambda_.size(); }

    // Normalised weights + effective sample size; log-space arithmetic.
    double normalise() {
        const double peak = *std::max_element(logw_.begin(), logw_.end());
        if (!std::isfinite(peak)) {
            throw Degeneracy("all particle weights underflowed");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < logw_.size(); ++i) {
            norm_[i] = std::exp(logw_[i] - peak);
            sum += norm_[i];
        }
        if (!(sum > 0.0)) {
            throw Degeneracy("all particle weights underflowed");
        }
        double sum_sq = 0.0;
        for (double& w : norm_) {
            w /= sum;
            sum_sq += w * w;
        }
        return 1.0 / sum_sq;
    }

    const std::vector<double>& weights() const { return norm_; }

    void systematic_resample(std::mt19937_64& rng) {
        const std::size_t n = size();
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const double u = uniform(rng);
        std::vector<double> resampled(n);
        double cum = norm_[0];
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double target = (static_cast<double>(k) + u) / static_cast<double>(n);
            while (cum < target && idx + 1 < n) {
                ++idx;
                cum += norm_[idx];
            }
            resampled[k] = lambda_[idx];
        }
        lambda_.swap(resampled);
        std::fill(logw_.begin(), logw_.end(), 0.0);
    }

  private:
    std::vector<double> lambda_;
    std::vector<double> logw_;
    std::vector<double> norm_;
};

OracleEstimate weighted_estimate(const std::vector<double>& w, const std::vector<double>& x) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += w[i] * x[i];
    double var = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        var += w[i] * w[i] * d * d;
    }
    return OracleEstimate{mean, std::sqrt(var)};
}

PfQuery make_query(double t, double ess, const WeightedCloud& cloud,
                   const std::vector<double>& lambda, const std::vector<double>& mgf_points) {
    PfQuery out;
    out.t = t;
    out.ess = ess;
    out.lambda_hat = weighted_estimate(cloud.weights(), lambda);
    out.mgf.reserve(mgf_points.size());
    std::vector<double> transformed(lambda.size());
    for (double s : mgf_points) {
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            transformed[i] = std::exp(s * lambda[i]);
        }
        out.mgf.push_back(weighted_estimate(cloud.weights(), transformed));
    }
    return out;
}

template <class Propagate>
std::vector<PfQuery> run_filter(const JumpRecord& jumps, const GammaLaw& prior,
                                const std::vector<double>& query_times,
                                const std::vector<double>& mgf_points, const PfOptions& options,
                                Propagate&& propagate, ParticleCloud* final_cloud) {
    if (options.particles < 1000) {
        throw OutOfDomain("particle filter needs at least 1000 particles");
    }
    const std::size_t n = options.particles;
    WeightedCloud cloud(n);
    {
        auto rng = make_engine(options.seed, 0);
        for (std::size_t i = 0; i < n; ++i) {
            cloud.lambda()[i] = draw_initial_intensity(prior, rng);
        }
    }
    auto resample_rng = make_engine(options.seed, 1);

    std::vector<PfQuery> results(query_times.size());
    const auto events = build_timeline(jumps, query_times);

    double t = 0.0;
    std::size_t segment = 0;
    for (const Event& ev : events) {
        if (ev.t > t) {
            propagate(cloud, t, ev.t, segment++);
            const double ess = cloud.normalise();
            if (ess < options.resample_fraction * static_cast<double>(n)) {
                cloud.systematic_resample(resample_rng);
            }
            t = ev.t;
        }
        if (ev.jump) {
            auto& lambda = cloud.lambda();
            auto& logw = cloud.logw();
            for (std::size_t i = 0; i < n; ++i) {
                logw[i] += std::log(lambda[i]);
            }
            const double ess = cloud.normalise();
            if (ess < options.resample_fraction * static_cast<double>(n)) {
                cloud.systematic_resample(resample_rng);
            }
        } else {
            const double ess = cloud.normalise();
            results[ev.query_slot] = make_query(ev.t, ess, cloud, cloud.lambda(), mgf_points);
        }
    }
    if (final_cloud != nullptr) {
        final_cloud->lambda = cloud.lambda();
        final_cloud->ess = cloud.normalise();
        final_cloud->weight = cloud.weights();
        final_cloud->time = t;
    }
    return results;
}

}  // namespace

std::vector<PfQuery> particle_filter(const JumpRecord& jumps, const ModelParams& params,
                                     const GammaLaw& prior,
                                     const std::vector<double>& query_times,
                                     const std::vector<double>& mgf_points,
                                     const PfOptions& options, ParticleCloud* final_cloud) {
    const CirTransition transition(params);
    auto propagate = [&](WeightedCloud& cloud, double t0, double t1, std::size_t segment) {
        const double span = t1 - t0;
        const auto substeps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / options.substep)));
        const double h = span / static_cast<double>(substeps);
        const std::uint64_t segment_seed = derive_stream(options.seed, 2 + segment);
        auto& lambda = cloud.lambda();
        auto& logw = cloud.logw();
        parallel_for(
            cloud.size(),
            [&](std::size_t i) {
                auto rng = make_engine(segment_seed, i);
                double value = lambda[i];
                double hazard = 0.0;
                for (std::size_t k = 0; k < substeps; ++k) {
                    const double next = transition.step(value, h, rng);
                    hazard += 0.5 * (value + next) * h;
                    value = next;
                }
                lambda[i] = value;
                logw[i] -= hazard;
            },
            options.threads);
    };
    return run_filter(jumps, prior, query_times, mgf_points, options, propagate, final_cloud);
}

std::vector<PfQuery> particle_filter_constant(const JumpRecord& jumps, const GammaLaw& prior,
                                              const std::vector<double>& query_times,
                                              const std::vector<double>& mgf_points,
                                              const PfOptions& options,
                                              ParticleCloud* final_cloud) {
    auto propagate = [&](WeightedCloud& cloud, double t0, double t1, std::size_t) {
        const double span = t1 - t0;
        auto& lambda = cloud.lambda();
        auto& logw = cloud.logw();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            logw[i] -= lambda[i] * span;
        }
    };
    return run_filter(jumps, prior, query_times, mgf_points, options, propagate, final_cloud);
}

}  // namespace cirfilter

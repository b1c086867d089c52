#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nkspin/quat.hpp"

namespace nkspin {

/// Seeded, reproducible point cloud on S^3. Point i depends only on
/// (seed, i), never on how many threads generated it.
struct SampleSet {
    std::uint64_t seed{0};
    std::vector<UnitQuat> points;
    double fd_step{1e-4};

    std::size_t size() const { return points.size(); }
    const UnitQuat& operator[](std::size_t i) const { return points[i]; }
    auto begin() const { return points.begin(); }
    auto end() const { return points.end(); }
};

struct MCEstimate {
    double mean{0.0};
    double standard_error{0.0};
    std::size_t n{0};
};

/// Counter-based 64-bit stream: splitmix64 keyed by (seed, stream).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    /// Uniform on (0, 1), never exactly 0.
    double next_uniform();
    /// Standard normal via Box-Muller (pairs cached).
    double next_gaussian();

private:
    std::uint64_t state_;
    bool have_spare_{false};
    double spare_{0.0};
};

/// The i-th point of uniform_s3(seed, n): four standard Gaussians, normalized.
UnitQuat uniform_s3_point(std::uint64_t seed, std::uint64_t index);

/// n >= 1 uniformly distributed points (DomainError otherwise).
SampleSet uniform_s3(std::uint64_t seed, std::size_t n, double fd_step = 1e-4);

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error (sample stdev / sqrt(n)) of F over the points.
/// The samples are uniform on S^3, so the mean estimates the integral of F
/// divided by vol(S^3) = 2 pi^2. A non-finite value raises EvaluationError
/// naming the offending point.
MCEstimate mc_integrate(const std::function<double(const UnitQuat&)>& F, const SampleSet& samples);

/// Same reduction applied to precomputed values.
MCEstimate mean_and_error(std::span<const double> values);

/// Uniform random unit imaginary quaternion (a point on S^2 in Im H).
ImQuat random_unit_im(CounterRng& rng);

}  // namespace nkspin

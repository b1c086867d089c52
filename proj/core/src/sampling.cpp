#include "nkspin/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nkspin/errors.hpp"
#include "nkspin/parallel.hpp"

namespace nkspin {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t k = seed;
    const std::uint64_t a = splitmix64(k);
    k = stream ^ 0xd1b54a32d192ed03ULL;
    const std::uint64_t b = splitmix64(k);
    state_ = a ^ (b * 0x2545f4914f6cdd1dULL);
}

std::uint64_t CounterRng::next_u64() { return splitmix64(state_); }

double CounterRng::next_uniform() {
    // 53 random mantissa bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

UnitQuat uniform_s3_point(std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, index);
    for (;;) {
        const Quat q{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        if (q.norm2() > 1e-24) return UnitQuat(q);
    }
}

SampleSet uniform_s3(std::uint64_t seed, std::size_t n, double fd_step) {
    if (n < 1) throw DomainError("uniform_s3: need at least one sample");
    SampleSet s;
    s.seed = seed;
    s.fd_step = fd_step;
    s.points = parallel_map<UnitQuat>(n, [seed](std::size_t i) { return uniform_s3_point(seed, i); });
    return s;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MCEstimate mean_and_error(std::span<const double> values) {
    MCEstimate est;
    est.n = values.size();
    if (values.empty()) return est;
    const double n = static_cast<double>(values.size());
    est.mean = pairwise_sum(values) / n;
    if (values.size() < 2) return est;
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - est.mean) * (values[i] - est.mean);
    const double var = pairwise_sum(dev) / (n - 1.0);
    est.standard_error = std::sqrt(var / n);
    return est;
}

MCEstimate mc_integrate(const std::function<double(const UnitQuat&)>& F, const SampleSet& samples) {
    const auto values = parallel_map<double>(samples.size(), [&](std::size_t i) {
        const double v = F(samples[i]);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "mc_integrate: non-finite integrand " << v << " at sample " << i << " g = " << samples[i];
            throw EvaluationError(msg.str());
        }
        return v;
    });
    return mean_and_error(values);
}

ImQuat random_unit_im(CounterRng& rng) {
    for (;;) {
        const ImQuat v{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

}  // namespace nkspin

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irg/statespace.hpp"

namespace irg {

enum class Family { Constant, HardDisk, SoftDisk, Profile, KernelCapped, Partition };
enum class ProfileShape { Rayleigh, Exponential };
enum class KernelShape { Gaussian, Product };

std::string to_string(Family family);
std::string to_string(ProfileShape shape);
std::string to_string(KernelShape shape);

// A region of the state space on which the mean field g is constant.
struct MeanFieldLevel {
    double mass; // mu-measure of the region
    double value; // g on the region
};

// Symmetric connection function phi: X x X -> [0,1] from one of the built-in
// families. Distances use the metric of the space the function is bound to
// (see bind()); unbound functions use the Euclidean metric.
class ConnectionFunction {
public:
    static ConnectionFunction constant(double p);
    static ConnectionFunction hard_disk(double r);
    static ConnectionFunction soft_disk(double p, double r);
    // p * psi(dist / r), psi(t) = exp(-t^2) (rayleigh) or exp(-t) (exponential).
    static ConnectionFunction profile(ProfileShape shape, double p, double r);
    // min(a * kappa(x, y), cap).
    static ConnectionFunction kernel_capped(double a, KernelShape kernel, double cap);
    // 1 if both first coordinates are <= 1/s or both are > 1/s, else 0.
    static ConnectionFunction partition(double s);

    // Copy that measures distances with the metric of `measure`'s space.
    ConnectionFunction bind(const ProbabilityMeasure& measure) const;
    ConnectionFunction with_metric(SpaceKind metric) const;

    Family family() const noexcept { return family_; }
    SpaceKind metric() const noexcept { return metric_; }
    double p() const noexcept { return p_; }
    double r() const noexcept { return r_; }
    double a() const noexcept { return a_; }
    double cap() const noexcept { return cap_; }
    double s() const noexcept { return s_; }
    ProfileShape profile_shape() const noexcept { return profile_; }
    KernelShape kernel_shape() const noexcept { return kernel_; }

    double operator()(const Point& x, const Point& y) const noexcept;

    // Upper bound on phi over X x X. Exact for every family except
    // kernel-capped, where it is the cap.
    double sup_phi() const noexcept;

    // Radius outside of which phi vanishes (infinite if not compactly supported).
    double support_radius() const noexcept;

    // True when phi takes only the values 0 and 1.
    bool is_binary() const noexcept;

    // Scalar parameter used for calibration: p (constant), r (disk and profile
    // families), a (kernel-capped). Partition has none.
    bool has_knob() const noexcept { return family_ != Family::Partition; }
    std::string knob_name() const;
    double knob() const;
    ConnectionFunction with_knob(double value) const;

    // Closed-form g(x) = int phi(x, y) mu(dy), when known for this measure.
    std::optional<double> exact_mean_field(const ProbabilityMeasure& measure, const Point& x) const;

    // When g takes finitely many values, the level sets with their masses.
    std::optional<std::vector<MeanFieldLevel>> mean_field_levels(
        const ProbabilityMeasure& measure) const;

    std::string describe() const;

private:
    ConnectionFunction() = default;

    Family family_ = Family::Constant;
    SpaceKind metric_ = SpaceKind::Euclidean;
    ProfileShape profile_ = ProfileShape::Rayleigh;
    KernelShape kernel_ = KernelShape::Gaussian;
    double p_ = 0.0;
    double r_ = 0.0;
    double r_sq_ = 0.0;
    double a_ = 0.0;
    double cap_ = 1.0;
    double s_ = 1.0;
};

// g(x) with a standard error: exact when a closed form exists, otherwise the
// mean over inner_samples draws from mu.
Estimate mean_field(const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                    const Point& x, std::size_t inner_samples, RandomState& rng);

// 1 - prod_{i,j} (1 - phi(x_i, y_j)): probability of at least one cross edge.
double group_connect_prob(const ConnectionFunction& phi, std::span<const Point> xs,
                          std::span<const Point> ys);

// Probability that no edge joins points of different groups.
double no_cross_edge_prob(const ConnectionFunction& phi,
                          std::span<const std::vector<Point>> groups);

enum class ConnectednessMethod { Enumerate, SubsetRecursion, MonteCarlo };

inline constexpr std::size_t kEnumerateLimit = 5;
inline constexpr std::size_t kSubsetRecursionLimit = 14;

struct ConnectednessOptions {
    ConnectednessMethod method = ConnectednessMethod::SubsetRecursion;
    std::size_t samples = 100000; // monte-carlo only
    std::uint64_t seed = 0xC0FFEE; // monte-carlo only
};

// Symmetric k x k matrix of pairwise edge probabilities (diagonal ignored).
class PairProbabilities {
public:
    explicit PairProbabilities(std::size_t k) : k_(k), values_(k * k, 0.0) {}
    PairProbabilities(const ConnectionFunction& phi, std::span<const Point> xs);

    std::size_t size() const noexcept { return k_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * k_ + j]; }
    void set(std::size_t i, std::size_t j, double p) noexcept
    {
        values_[i * k_ + j] = p;
        values_[j * k_ + i] = p;
    }

private:
    std::size_t k_;
    std::vector<double> values_;
};

// Probability that the random graph with independent edges of the given
// probabilities is connected.
double connectedness_prob(const PairProbabilities& probs, const ConnectednessOptions& options = {});

// h_phi(x_1, ..., x_k).
double connectedness_prob(const ConnectionFunction& phi, std::span<const Point> xs,
                          const ConnectednessOptions& options = {});

struct HomogeneityReport {
    double inf_g = 0.0;
    double sup_g = 0.0;
    double epsilon_hat = 0.0;
    double sup_phi_hat = 0.0;
    std::size_t probe_count = 0;
    std::size_t inner_samples = 0;
    // True when every g value came from a closed form; the report is still
    // an estimate of inf/sup over probes, not a certificate over all of X.
    bool exact_mean_field = false;
};

HomogeneityReport homogeneity(const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                              std::size_t probe_count, std::size_t inner_samples,
                              std::uint64_t seed = 0x40D0);

} // namespace irg

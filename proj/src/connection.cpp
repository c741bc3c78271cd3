#include "irg/connection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "irg/error.hpp"

namespace irg {

std::string to_string(Family family)
{
    switch (family) {
    case Family::Constant: return "constant";
    case Family::HardDisk: return "hard-disk";
    case Family::SoftDisk: return "soft-disk";
    case Family::Profile: return "profile";
    case Family::KernelCapped: return "kernel-capped";
    case Family::Partition: return "partition-counterexample";
    }
    return "unknown";
}

std::string to_string(ProfileShape shape)
{
    return shape == ProfileShape::Rayleigh ? "rayleigh" : "exponential";
}

std::string to_string(KernelShape shape)
{
    return shape == KernelShape::Gaussian ? "gaussian" : "product";
}

namespace {

void require_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(what) + " must lie in [0,1]");
    }
}

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string(what) + " must be positive and finite");
    }
}

double norm(const Point& x) noexcept
{
    double acc = 0.0;
    for (int i = 0; i < x.dim; ++i) {
        acc += x[i] * x[i];
    }
    return std::sqrt(acc);
}

double distance_sq(SpaceKind metric, const Point& a, const Point& b) noexcept
{
    double acc = 0.0;
    if (metric == SpaceKind::Torus) {
        for (int i = 0; i < a.dim; ++i) {
            double d = std::fabs(a[i] - b[i]);
            d -= std::floor(d);
            d = std::min(d, 1.0 - d);
            acc += d * d;
        }
    } else {
        for (int i = 0; i < a.dim; ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
    }
    return acc;
}

} // namespace

ConnectionFunction ConnectionFunction::constant(double p)
{
    require_probability(p, "constant connection probability p");
    ConnectionFunction f;
    f.family_ = Family::Constant;
    f.p_ = p;
    return f;
}

ConnectionFunction ConnectionFunction::hard_disk(double r)
{
    require_positive(r, "hard-disk radius r");
    ConnectionFunction f;
    f.family_ = Family::HardDisk;
    f.p_ = 1.0;
    f.r_ = r;
    f.r_sq_ = r * r;
    return f;
}

ConnectionFunction ConnectionFunction::soft_disk(double p, double r)
{
    require_probability(p, "soft-disk probability p");
    require_positive(r, "soft-disk radius r");
    ConnectionFunction f;
    f.family_ = Family::SoftDisk;
    f.p_ = p;
    f.r_ = r;
    f.r_sq_ = r * r;
    return f;
}

ConnectionFunction ConnectionFunction::profile(ProfileShape shape, double p, double r)
{
    require_probability(p, "profile amplitude p");
    require_positive(r, "profile scale r");
    ConnectionFunction f;
    f.family_ = Family::Profile;
    f.profile_ = shape;
    f.p_ = p;
    f.r_ = r;
    f.r_sq_ = r * r;
    return f;
}

ConnectionFunction ConnectionFunction::kernel_capped(double a, KernelShape kernel, double cap)
{
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ConfigError("kernel-capped scale a must be nonnegative and finite");
    }
    require_probability(cap, "kernel-capped cap");
    ConnectionFunction f;
    f.family_ = Family::KernelCapped;
    f.kernel_ = kernel;
    f.a_ = a;
    f.cap_ = cap;
    return f;
}

ConnectionFunction ConnectionFunction::partition(double s)
{
    require_positive(s, "partition parameter s");
    ConnectionFunction f;
    f.family_ = Family::Partition;
    f.s_ = s;
    return f;
}

ConnectionFunction ConnectionFunction::bind(const ProbabilityMeasure& measure) const
{
    return with_metric(measure.space());
}

ConnectionFunction ConnectionFunction::with_metric(SpaceKind metric) const
{
    ConnectionFunction f = *this;
    f.metric_ = metric;
    return f;
}

double ConnectionFunction::operator()(const Point& x, const Point& y) const noexcept
{
    switch (family_) {
    case Family::Constant:
        return p_;
    case Family::HardDisk:
        return distance_sq(metric_, x, y) <= r_sq_ ? 1.0 : 0.0;
    case Family::SoftDisk:
        return distance_sq(metric_, x, y) <= r_sq_ ? p_ : 0.0;
    case Family::Profile: {
        const double d2 = distance_sq(metric_, x, y);
        if (profile_ == ProfileShape::Rayleigh) {
            return p_ * std::exp(-d2 / r_sq_);
        }
        return p_ * std::exp(-std::sqrt(d2) / r_);
    }
    case Family::KernelCapped: {
        double kappa = 0.0;
        if (kernel_ == KernelShape::Gaussian) {
            kappa = std::exp(-distance_sq(metric_, x, y));
        } else {
            kappa = (1.0 + norm(x)) * (1.0 + norm(y));
        }
        return std::min(a_ * kappa, cap_);
    }
    case Family::Partition: {
        const double threshold = 1.0 / s_;
        const double hi = std::max(x[0], y[0]);
        const double lo = std::min(x[0], y[0]);
        return (hi <= threshold || lo > threshold) ? 1.0 : 0.0;
    }
    }
    return 0.0;
}

double ConnectionFunction::sup_phi() const noexcept
{
    switch (family_) {
    case Family::Constant:
    case Family::SoftDisk:
    case Family::Profile:
        return p_;
    case Family::HardDisk:
    case Family::Partition:
        return 1.0;
    case Family::KernelCapped:
        return cap_;
    }
    return 1.0;
}

double ConnectionFunction::support_radius() const noexcept
{
    if (family_ == Family::HardDisk || family_ == Family::SoftDisk) {
        return r_;
    }
    if (family_ == Family::Constant && p_ == 0.0) {
        return 0.0;
    }
    return std::numeric_limits<double>::infinity();
}

bool ConnectionFunction::is_binary() const noexcept
{
    switch (family_) {
    case Family::HardDisk:
    case Family::Partition:
        return true;
    case Family::Constant:
    case Family::SoftDisk:
        return p_ == 0.0 || p_ == 1.0;
    case Family::Profile:
        return p_ == 0.0;
    case Family::KernelCapped:
        return a_ == 0.0 || cap_ == 0.0;
    }
    return false;
}

std::string ConnectionFunction::knob_name() const
{
    switch (family_) {
    case Family::Constant: return "p";
    case Family::HardDisk:
    case Family::SoftDisk:
    case Family::Profile: return "r";
    case Family::KernelCapped: return "a";
    case Family::Partition: break;
    }
    throw CalibrationError("the partition family has no calibration knob");
}

double ConnectionFunction::knob() const
{
    switch (family_) {
    case Family::Constant: return p_;
    case Family::HardDisk:
    case Family::SoftDisk:
    case Family::Profile: return r_;
    case Family::KernelCapped: return a_;
    case Family::Partition: break;
    }
    throw CalibrationError("the partition family has no calibration knob");
}

ConnectionFunction ConnectionFunction::with_knob(double value) const
{
    ConnectionFunction f;
    switch (family_) {
    case Family::Constant: f = constant(value); break;
    case Family::HardDisk: f = hard_disk(value); break;
    case Family::SoftDisk: f = soft_disk(p_, value); break;
    case Family::Profile: f = profile(profile_, p_, value); break;
    case Family::KernelCapped: f = kernel_capped(value, kernel_, cap_); break;
    case Family::Partition: throw CalibrationError("the partition family has no calibration knob");
    }
    f.metric_ = metric_;
    return f;
}

std::optional<double> ConnectionFunction::exact_mean_field(const ProbabilityMeasure& measure,
                                                           const Point& x) const
{
    switch (family_) {
    case Family::Constant:
        return p_;
    case Family::HardDisk:
    case Family::SoftDisk: {
        if (p_ == 0.0) {
            return 0.0;
        }
        if (!measure.is_uniform_box()) {
            return std::nullopt;
        }
        if (r_ >= measure.diameter()) {
            return p_;
        }
        if (measure.space() == SpaceKind::Torus && r_ < 0.5) {
            return p_ * unit_ball_volume(measure.dimension()) * std::pow(r_, measure.dimension());
        }
        if (measure.space() == SpaceKind::UnitCube && measure.dimension() == 1) {
            const double lo = std::max(0.0, x[0] - r_);
            const double hi = std::min(1.0, x[0] + r_);
            return p_ * std::max(0.0, hi - lo);
        }
        return std::nullopt;
    }
    case Family::Profile:
    case Family::KernelCapped:
        if (sup_phi() == 0.0) {
            return 0.0;
        }
        return std::nullopt;
    case Family::Partition: {
        if (!measure.is_uniform_box()) {
            return std::nullopt;
        }
        const double threshold = 1.0 / s_;
        if (threshold >= 1.0) {
            return 1.0;
        }
        return x[0] <= threshold ? threshold : 1.0 - threshold;
    }
    }
    return std::nullopt;
}

std::optional<std::vector<MeanFieldLevel>> ConnectionFunction::mean_field_levels(
    const ProbabilityMeasure& measure) const
{
    switch (family_) {
    case Family::Constant:
        return std::vector<MeanFieldLevel>{{1.0, p_}};
    case Family::HardDisk:
    case Family::SoftDisk:
        if (p_ == 0.0) {
            return std::vector<MeanFieldLevel>{{1.0, 0.0}};
        }
        if (measure.is_uniform_box() && r_ >= measure.diameter()) {
            return std::vector<MeanFieldLevel>{{1.0, p_}};
        }
        if (measure.is_uniform_torus() && r_ < 0.5) {
            Point origin(measure.dimension());
            return std::vector<MeanFieldLevel>{{1.0, *exact_mean_field(measure, origin)}};
        }
        return std::nullopt;
    case Family::Profile:
    case Family::KernelCapped:
        if (sup_phi() == 0.0) {
            return std::vector<MeanFieldLevel>{{1.0, 0.0}};
        }
        return std::nullopt;
    case Family::Partition: {
        if (!measure.is_uniform_box()) {
            return std::nullopt;
        }
        const double threshold = 1.0 / s_;
        if (threshold >= 1.0) {
            return std::vector<MeanFieldLevel>{{1.0, 1.0}};
        }
        return std::vector<MeanFieldLevel>{{threshold, threshold},
                                           {1.0 - threshold, 1.0 - threshold}};
    }
    }
    return std::nullopt;
}

std::string ConnectionFunction::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << to_string(family_) << '(';
    switch (family_) {
    case Family::Constant: os << "p=" << p_; break;
    case Family::HardDisk: os << "r=" << r_; break;
    case Family::SoftDisk: os << "p=" << p_ << ", r=" << r_; break;
    case Family::Profile: os << to_string(profile_) << ", p=" << p_ << ", r=" << r_; break;
    case Family::KernelCapped:
        os << "a=" << a_ << ", kernel=" << to_string(kernel_) << ", cap=" << cap_;
        break;
    case Family::Partition: os << "s=" << s_; break;
    }
    os << ')';
    return os.str();
}

Estimate mean_field(const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                    const Point& x, std::size_t inner_samples, RandomState& rng)
{
    if (auto exact = phi.exact_mean_field(measure, x)) {
        return {*exact, 0.0, 0, true};
    }
    if (inner_samples == 0) {
        throw DomainError("mean_field needs inner_samples >= 1 without a closed form");
    }
    const ConnectionFunction bound = phi.bind(measure);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < inner_samples; ++i) {
        const double v = bound(x, measure.sample(rng));
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(inner_samples);
    const double mean = sum / n;
    double se = 0.0;
    if (inner_samples > 1) {
        se = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
    }
    return {mean, se, inner_samples, false};
}

double group_connect_prob(const ConnectionFunction& phi, std::span<const Point> xs,
                          std::span<const Point> ys)
{
    if (xs.empty() || ys.empty()) {
        throw DomainError("group_connect_prob needs two nonempty point lists");
    }
    double none = 1.0;
    for (const Point& x : xs) {
        for (const Point& y : ys) {
            none *= 1.0 - phi(x, y);
        }
    }
    return 1.0 - none;
}

double no_cross_edge_prob(const ConnectionFunction& phi, std::span<const std::vector<Point>> groups)
{
    if (groups.size() < 2) {
        throw DomainError("no_cross_edge_prob needs at least two groups");
    }
    double none = 1.0;
    for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            for (const Point& x : groups[a]) {
                for (const Point& y : groups[b]) {
                    none *= 1.0 - phi(x, y);
                }
            }
        }
    }
    return none;
}

PairProbabilities::PairProbabilities(const ConnectionFunction& phi, std::span<const Point> xs)
    : PairProbabilities(xs.size())
{
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = i + 1; j < k_; ++j) {
            set(i, j, phi(xs[i], xs[j]));
        }
    }
}

namespace {

bool mask_connected(std::uint32_t full, std::span<const std::uint32_t> adjacency)
{
    std::uint32_t seen = full & (~full + 1); // lowest vertex
    std::uint32_t frontier = seen;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f != 0; f &= f - 1) {
            next |= adjacency[static_cast<std::size_t>(std::countr_zero(f))];
        }
        next &= full & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen == full;
}

double connected_by_enumeration(const PairProbabilities& probs)
{
    const std::size_t k = probs.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    const std::uint32_t full = (1u << k) - 1u;
    std::vector<std::uint32_t> adjacency(k);
    double total = 0.0;
    for (std::uint32_t graph = 0; graph < (1u << pairs.size()); ++graph) {
        std::fill(adjacency.begin(), adjacency.end(), 0u);
        double weight = 1.0;
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            const auto [i, j] = pairs[e];
            if (graph & (1u << e)) {
                weight *= probs(i, j);
                adjacency[i] |= 1u << j;
                adjacency[j] |= 1u << i;
            } else {
                weight *= 1.0 - probs(i, j);
            }
        }
        if (weight != 0.0 && mask_connected(full, adjacency)) {
            total += weight;
        }
    }
    return total;
}

// P_conn(S) = 1 - sum_{T strict subset of S, min(S) in T} P_conn(T) * cross(T, S \ T).
double connected_by_subset_recursion(const PairProbabilities& probs)
{
    const std::size_t k = probs.size();
    const std::size_t subsets = std::size_t{1} << k;
    // no_edge[T * k + w] = prod_{u in T} (1 - phi(u, w))
    std::vector<double> no_edge(subsets * k, 1.0);
    for (std::size_t t = 1; t < subsets; ++t) {
        const auto low = static_cast<std::size_t>(std::countr_zero(t));
        const std::size_t rest = t & (t - 1);
        for (std::size_t w = 0; w < k; ++w) {
            no_edge[t * k + w] = no_edge[rest * k + w] * (1.0 - probs(low, w));
        }
    }
    std::vector<double> connected(subsets, 0.0);
    for (std::size_t set = 1; set < subsets; ++set) {
        const std::size_t low_bit = set & (~set + 1);
        if (set == low_bit) {
            connected[set] = 1.0;
            continue;
        }
        const std::size_t others = set ^ low_bit;
        double disconnected = 0.0;
        // proper subsets T of `set` that contain the lowest vertex
        for (std::size_t sub = (others - 1) & others;; sub = (sub - 1) & others) {
            const std::size_t t = sub | low_bit;
            double cross = connected[t];
            for (std::size_t rest = set ^ t; rest != 0 && cross != 0.0; rest &= rest - 1) {
                cross *= no_edge[t * k + static_cast<std::size_t>(std::countr_zero(rest))];
            }
            disconnected += cross;
            if (sub == 0) {
                break;
            }
        }
        connected[set] = 1.0 - disconnected;
    }
    return connected[subsets - 1];
}

double connected_by_monte_carlo(const PairProbabilities& probs, std::size_t samples,
                                std::uint64_t seed)
{
    const std::size_t k = probs.size();
    RandomState rng(derive_key(seed, stream::kProbe));
    std::vector<std::size_t> parent(k);
    std::size_t hits = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t v) {
            while (parent[v] != v) {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            return v;
        };
        std::size_t components = k;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                if (rng.uniform() <= probs(i, j)) {
                    const std::size_t a = find(i);
                    const std::size_t b = find(j);
                    if (a != b) {
                        parent[a] = b;
                        --components;
                    }
                }
            }
        }
        if (components == 1) {
            ++hits;
        }
    }
    return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace

double connectedness_prob(const PairProbabilities& probs, const ConnectednessOptions& options)
{
    const std::size_t k = probs.size();
    if (k == 0) {
        throw DomainError("connectedness_prob needs at least one point");
    }
    if (k == 1) {
        return 1.0;
    }
    switch (options.method) {
    case ConnectednessMethod::Enumerate:
        if (k > kEnumerateLimit) {
            throw CapabilityError("enumeration supports k <= " + std::to_string(kEnumerateLimit) +
                                  ", got k = " + std::to_string(k));
        }
        return connected_by_enumeration(probs);
    case ConnectednessMethod::SubsetRecursion:
        if (k > kSubsetRecursionLimit) {
            throw CapabilityError("subset recursion supports k <= " +
                                  std::to_string(kSubsetRecursionLimit) +
                                  ", got k = " + std::to_string(k));
        }
        return connected_by_subset_recursion(probs);
    case ConnectednessMethod::MonteCarlo:
        return connected_by_monte_carlo(probs, options.samples, options.seed);
    }
    return 0.0;
}

double connectedness_prob(const ConnectionFunction& phi, std::span<const Point> xs,
                          const ConnectednessOptions& options)
{
    return connectedness_prob(PairProbabilities(phi, xs), options);
}

namespace {

std::vector<Point> extreme_probes(const ConnectionFunction& phi, const ProbabilityMeasure& measure)
{
    const int d = measure.dimension();
    std::vector<Point> probes;
    auto filled = [d](double v) {
        Point p(d);
        for (int i = 0; i < d; ++i) {
            p[i] = v;
        }
        return p;
    };
    if (measure.space() != SpaceKind::Euclidean) {
        probes.push_back(filled(0.0));
        probes.push_back(filled(std::nextafter(1.0, 0.0)));
        probes.push_back(filled(0.5));
        if (phi.family() == Family::Partition && 1.0 / phi.s() < 1.0) {
            const double threshold = 1.0 / phi.s();
            Point low = filled(0.5);
            low[0] = 0.5 * threshold;
            Point high = filled(0.5);
            high[0] = 0.5 * (1.0 + threshold);
            probes.push_back(low);
            probes.push_back(high);
        }
    } else if (measure.density_kind() == DensityKind::Gaussian) {
        probes.push_back(filled(0.0));
        Point far = filled(0.0);
        far[0] = 3.0;
        probes.push_back(far);
    } else {
        probes.push_back(filled(0.01 * measure.weibull_scale()));
        probes.push_back(filled(measure.weibull_scale()));
        probes.push_back(filled(3.0 * measure.weibull_scale()));
    }
    return probes;
}

} // namespace

HomogeneityReport homogeneity(const ConnectionFunction& phi_in, const ProbabilityMeasure& measure,
                              std::size_t probe_count, std::size_t inner_samples,
                              std::uint64_t seed)
{
    if (probe_count < 2) {
        throw DomainError("homogeneity needs probe_count >= 2");
    }
    const ConnectionFunction phi = phi_in.bind(measure);
    RandomState probe_rng(derive_key(seed, stream::kProbe, 0));
    std::vector<Point> probes = extreme_probes(phi, measure);
    for (std::size_t i = 0; i < probe_count; ++i) {
        probes.push_back(measure.sample(probe_rng));
    }

    // One shared inner sample for all probes (common random numbers).
    std::vector<Point> inner;
    RandomState inner_rng(derive_key(seed, stream::kProbe, 1));

    HomogeneityReport report;
    report.probe_count = probes.size();
    report.inner_samples = inner_samples;
    report.inf_g = std::numeric_limits<double>::infinity();
    report.sup_g = 0.0;
    report.exact_mean_field = true;
    for (const Point& x : probes) {
        double g = 0.0;
        if (auto exact = phi.exact_mean_field(measure, x)) {
            g = *exact;
        } else {
            report.exact_mean_field = false;
            if (inner.empty()) {
                const std::size_t m = std::max<std::size_t>(inner_samples, 1);
                inner.reserve(m);
                for (std::size_t i = 0; i < m; ++i) {
                    inner.push_back(measure.sample(inner_rng));
                }
            }
            double sum = 0.0;
            for (const Point& y : inner) {
                sum += phi(x, y);
            }
            g = sum / static_cast<double>(inner.size());
        }
        report.inf_g = std::min(report.inf_g, g);
        report.sup_g = std::max(report.sup_g, g);
    }
    report.epsilon_hat = report.sup_g > 0.0 ? report.inf_g / report.sup_g : 0.0;

    if (phi.family() == Family::KernelCapped) {
        double best = 0.0;
        for (const Point& x : probes) {
            for (const Point& y : probes) {
                best = std::max(best, phi(x, y));
            }
        }
        report.sup_phi_hat = best;
    } else {
        report.sup_phi_hat = phi.sup_phi();
    }
    return report;
}

} // namespace irg

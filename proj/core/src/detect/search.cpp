#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofp/detect.hpp"
#include "ofp/parallel.hpp"
#include "ofp/random.hpp"

namespace ofp {
namespace {

// Smallest magnitude reached by the signed-log axis, relative to the bound.
constexpr double kSignedLogDecades = 16.0;

// Monotone map from the unit interval onto one search-box coordinate.
class Axis {
 public:
  explicit Axis(const Interval& iv) : iv_(iv), lo_(iv.lo.value), hi_(iv.hi.value) {
    if (lo_ > 0.0 && hi_ / lo_ > 10.0) {
      kind_ = Kind::LogPositive;
    } else if (hi_ < 0.0 && lo_ / hi_ > 10.0) {
      kind_ = Kind::LogNegative;
    } else if (lo_ <= 0.0 && hi_ >= 0.0 && lo_ < hi_) {
      kind_ = Kind::SignedLog;
    }
  }

  double map(double u) const noexcept {
    u = std::clamp(u, 0.0, 1.0);
    double x = 0.0;
    switch (kind_) {
      case Kind::Uniform:
        x = lo_ + u * (hi_ - lo_);
        break;
      case Kind::LogPositive:
        x = std::exp(std::log(lo_) + u * (std::log(hi_) - std::log(lo_)));
        break;
      case Kind::LogNegative:
        x = -std::exp(std::log(-lo_) + (1.0 - u) * (std::log(-hi_) - std::log(-lo_)));
        break;
      case Kind::SignedLog:
        x = signed_log(u);
        break;
    }
    return clamp_inside(x);
  }

 private:
  enum class Kind { Uniform, LogPositive, LogNegative, SignedLog };

  double signed_log(double u) const noexcept {
    const bool neg = lo_ < 0.0;
    const bool pos = hi_ > 0.0;
    if (neg && pos) {
      if (u < 0.5) return -(-lo_) * std::pow(10.0, -kSignedLogDecades * (2.0 * u));
      return hi_ * std::pow(10.0, -kSignedLogDecades * (2.0 - 2.0 * u));
    }
    if (pos) return hi_ * std::pow(10.0, -kSignedLogDecades * (1.0 - u));
    return lo_ * std::pow(10.0, -kSignedLogDecades * u);
  }

  double clamp_inside(double x) const noexcept {
    x = std::clamp(x, lo_, hi_);
    if (!iv_.lo.inclusive && x <= lo_) x = std::nextafter(lo_, hi_);
    if (!iv_.hi.inclusive && x >= hi_) x = std::nextafter(hi_, lo_);
    return x;
  }

  Interval iv_;
  double lo_;
  double hi_;
  Kind kind_ = Kind::Uniform;
};

struct Sample {
  std::vector<double> unit;
  std::vector<double> point;
  AtomicPeak peak;
};

class Searcher {
 public:
  Searcher(const FunctionDef& f, const SearchOptions& options) : f_(f), options_(options) {
    std::vector<Interval> box;
    if (options.box) {
      box = *options.box;
      if (box.size() != f.arity()) throw Error("search box has " + std::to_string(box.size()) +
                                               " intervals, function has " + std::to_string(f.arity()) + " parameters");
    } else {
      for (const auto& p : f.params()) box.push_back(p.domain);
    }
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (box[i].empty()) throw Error("empty search box for parameter " + f.params()[i].name);
      if (!box[i].bounded()) {
        throw Error("parameter " + f.params()[i].name + " has an unbounded domain; supply a search box");
      }
      axes_.emplace_back(box[i]);
    }
    if (options.budget == 0) throw Error("search budget must be positive");
  }

  std::vector<Finding> run() {
    std::vector<Sample> samples = stratified();
    parallel_for(samples.size(), options_.threads, [&](std::size_t i) { score(samples[i]); });

    std::vector<std::size_t> hot;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].peak.value >= options_.theta_atomic) hot.push_back(i);
    }
    std::stable_sort(hot.begin(), hot.end(),
                     [&](std::size_t a, std::size_t b) { return samples[a].peak.value > samples[b].peak.value; });

    std::vector<Sample> seeds = cluster(samples, hot);
    parallel_for(seeds.size(), options_.threads, [&](std::size_t i) { refine(seeds[i]); });

    std::vector<Finding> out;
    for (auto& s : seeds) out.push_back({std::move(s.point), s.peak.value, s.peak.node, s.peak.op});
    std::stable_sort(out.begin(), out.end(),
                     [](const Finding& a, const Finding& b) { return a.max_atomic > b.max_atomic; });
    return out;
  }

 private:
  std::vector<Sample> stratified() const {
    const std::size_t n = options_.budget;
    const std::size_t dims = axes_.size();
    Rng rng(options_.seed);
    std::vector<Sample> samples(n);
    for (auto& s : samples) s.unit.resize(dims);
    std::vector<std::size_t> strata(n);
    for (std::size_t d = 0; d < dims; ++d) {
      std::iota(strata.begin(), strata.end(), std::size_t{0});
      rng.shuffle(strata);
      for (std::size_t i = 0; i < n; ++i) {
        samples[i].unit[d] = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(n);
      }
    }
    return samples;
  }

  void place(Sample& s) const {
    s.point.resize(axes_.size());
    for (std::size_t d = 0; d < axes_.size(); ++d) s.point[d] = axes_[d].map(s.unit[d]);
  }

  AtomicPeak peak_at(const std::vector<double>& point) const {
    return max_atomic_condition(trace_expr(f_.body(), point));
  }

  void score(Sample& s) const {
    place(s);
    s.peak = peak_at(s.point);
  }

  // Greedy: each hot sample, strongest first, joins the first seed within
  // the cluster radius (Chebyshev distance in unit space) or starts a new one.
  std::vector<Sample> cluster(const std::vector<Sample>& samples, const std::vector<std::size_t>& hot) const {
    constexpr double kRadius = 0.05;
    std::vector<Sample> seeds;
    for (std::size_t idx : hot) {
      const Sample& s = samples[idx];
      bool joined = false;
      for (const Sample& seed : seeds) {
        double dist = 0.0;
        for (std::size_t d = 0; d < s.unit.size(); ++d) dist = std::max(dist, std::fabs(s.unit[d] - seed.unit[d]));
        if (dist <= kRadius) {
          joined = true;
          break;
        }
      }
      if (!joined) {
        seeds.push_back(s);
        if (seeds.size() >= options_.max_clusters) break;
      }
    }
    return seeds;
  }

  // Coordinate-wise golden-section ascent on the max atomic condition. The
  // bracket spans one stratum width around the seed; the best point seen
  // anywhere during the search is kept.
  void refine(Sample& best) const {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double half_width = 1.0 / static_cast<double>(options_.budget);
    Sample probe = best;
    auto eval_at = [&](std::size_t d, double u) {
      probe.unit = best.unit;
      probe.unit[d] = u;
      place(probe);
      probe.peak = peak_at(probe.point);
      if (probe.peak.value > best.peak.value) best = probe;
      return probe.peak.value;
    };
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      double a = std::max(0.0, best.unit[d] - half_width);
      double b = std::min(1.0, best.unit[d] + half_width);
      double c = b - inv_phi * (b - a);
      double e = a + inv_phi * (b - a);
      double fc = eval_at(d, c);
      double fe = eval_at(d, e);
      for (int it = 0; it < options_.refine_iterations; ++it) {
        if (fc > fe) {
          b = e;
          e = c;
          fe = fc;
          c = b - inv_phi * (b - a);
          fc = eval_at(d, c);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + inv_phi * (b - a);
          fe = eval_at(d, e);
        }
      }
    }
  }

  const FunctionDef& f_;
  const SearchOptions& options_;
  std::vector<Axis> axes_;
};

}  // namespace

std::vector<Finding> search_error_inputs(const FunctionDef& f, const SearchOptions& options) {
  return Searcher(f, options).run();
}

}  // namespace ofp

#include "fsketch/sampler.hpp"

#include <cmath>
#include <functional>
#include <string_view>
#include <unordered_set>

#include "fsketch/error.hpp"

namespace fsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Truncation keeps seeds within this relative distance of the bound, so that
// rounding in r * B * tau never drops a seed the final merge could use.
constexpr double kTruncSlack = 1e-12;

}  // namespace

// Direct-mapped cache of per-(key, i) data. Zipf streams repeat a few keys a
// lot, and each repetition otherwise re-hashes up to r structured keys.
//
// `cut` is the smallest upper-range draw already rejected for (key, i). The
// SumMax admission bound of a key never increases and A is non-increasing,
// so every later draw at or above the cut is rejected too.
class SamplerSketch::HashMemo {
 public:
  static constexpr std::size_t kSlots = 1024;
  struct Row {
    std::string key;
    std::vector<double> h;
    std::vector<double> cut;
  };

  Row& row(const std::string& key, std::uint32_t r) {
    if (rows_.empty()) rows_.resize(kSlots);
    Row& row = rows_[std::hash<std::string>{}(key) & (kSlots - 1)];
    if (row.h.size() != r || row.key != key) {
      row.key = key;
      row.h.assign(r, std::numeric_limits<double>::quiet_NaN());
      row.cut.assign(r, kInf);
    }
    return row;
  }

 private:
  std::vector<Row> rows_;
};

std::uint32_t replica_count(std::size_t k, double eps) {
  const double q = static_cast<double>(k) / eps;
  const double nearest = std::round(q);
  const double r = std::abs(q - nearest) <= 1e-9 * q ? nearest : std::ceil(q);
  if (!(r >= 1.0) || r > 1e9) throw Error(ErrorKind::kInvalidParameter, "replica count k/eps out of range");
  return static_cast<std::uint32_t>(r);
}

SamplerSketch::SamplerSketch(std::size_t k, double eps, FunctionSpec spec, RandomSource rng, ExpHash hash,
                             SketchOptions options)
    : k_(k),
      eps_(eps),
      r_(0),
      spec_(std::move(spec)),
      options_(options),
      ppswor_(k == 0 ? 1 : k, rng),
      summax_(k == 0 ? 1 : k, hash),
      rng_(rng),
      memo_(std::make_unique<HashMemo>()) {
  if (k < 3) throw Error(ErrorKind::kInvalidParameter, "k must be at least 3");
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorKind::kInvalidParameter, "eps must be in (0, 1/2]");
  r_ = replica_count(k, eps);
}

SamplerSketch::SamplerSketch(std::size_t k, double eps, FunctionSpec spec, std::uint64_t seed,
                             SketchOptions options)
    : SamplerSketch(k, eps, std::move(spec), RandomSource(seed), ExpHash(mix64(seed ^ 0xa0761d6478bd642fULL)),
                    options) {}

SamplerSketch::SamplerSketch(const SamplerSketch& o)
    : k_(o.k_),
      eps_(o.eps_),
      r_(o.r_),
      spec_(o.spec_),
      options_(o.options_),
      ppswor_(o.ppswor_),
      summax_(o.summax_),
      sideline_(o.sideline_),
      rng_(o.rng_),
      sum_(o.sum_),
      gamma_(o.gamma_),
      ppswor_bound_(o.ppswor_bound_),
      summax_dirty_(o.summax_dirty_),
      version_(o.version_),
      memo_(std::make_unique<HashMemo>()) {}

SamplerSketch& SamplerSketch::operator=(const SamplerSketch& o) {
  if (this != &o) *this = SamplerSketch(o);
  return *this;
}

SamplerSketch::SamplerSketch(SamplerSketch&&) noexcept = default;
SamplerSketch& SamplerSketch::operator=(SamplerSketch&&) noexcept = default;
SamplerSketch::~SamplerSketch() = default;

double SamplerSketch::sideline_score(const std::string& key, std::uint32_t replica, double y) {
  const double a = spec_.A(y);
  return a > 0.0 ? summax_.hash()(key, replica) / a : kInf;
}

void SamplerSketch::process(const Element& e, RandomSource& rng) {
  require_valid(e);
  const double seed = rng.exponential(e.val);
  // Seeds at or above the truncation bound would be dropped again right away.
  if (seed < ppswor_bound_ && ppswor_.sample().process(e.key, seed)) ++version_;
  sum_ += e.val;
  gamma_ = 2.0 * eps_ / sum_;
  replicate(e, rng);
  flush();
  optimize();
}

void SamplerSketch::replicate(const Element& e, RandomSource& rng) {
  if (!memo_) memo_ = std::make_unique<HashMemo>();
  const std::string& key = e.key;
  const BottomK& sm = summax_.sample();
  HashMemo::Row& row = memo_->row(key, r_);
  double* cut = row.cut.data();
  auto h = [&](std::uint32_t i) {
    double& v = row.h[i];
    if (std::isnan(v)) v = summax_.hash()(key, i);
    return v;
  };
  auto score = [&](std::uint32_t i, double y) {
    const double a = spec_.A(y);
    return a > 0.0 ? h(i) / a : kInf;
  };

  // Scores strictly above this bound cannot modify the SumMax sample.
  double bound = sm.admission_bound(key);
  const Sideline::Group* group = sideline_.group(key);

  for (std::uint32_t i = 0; i < r_; ++i) {
    const double y = rng.exponential(e.val);
    if (group) {
      if (const Sideline::Slot* slot = group->find(i)) {
        if (y < slot->value) {
          sideline_.put(key, i, y, score(i, y));
          ++version_;
        }
        continue;
      }
    }
    if (y >= gamma_ && y >= cut[i]) continue;
    const double s = score(i, y);
    if (y >= gamma_) {
      if (!std::isfinite(s) || s > bound) {
        cut[i] = y;
        continue;
      }
      if (summax_.process_score(key, s)) {
        ++version_;
        summax_dirty_ = true;
        bound = sm.admission_bound(key);
      }
      continue;
    }
    if (options_.prune_sideline) {
      if (!std::isfinite(s) || s > bound) continue;
      if (s == bound && !sm.would_modify(key, s)) continue;
    }
    sideline_.put(key, i, y, s);
    ++version_;
    if (!group) group = sideline_.group(key);
  }
}

void SamplerSketch::flush() {
  while (!sideline_.empty() && sideline_.max_value() >= gamma_) {
    const Sideline::Item item = sideline_.pop_max();
    ++version_;
    if (std::isfinite(item.score) && summax_.process_score(item.key, item.score)) {
      ++version_;
      summax_dirty_ = true;
    }
  }
}

void SamplerSketch::optimize() {
  if (options_.prune_sideline && summax_dirty_) {
    const BottomK& sm = summax_.sample();
    const std::size_t removed = sideline_.remove_if([&](const std::string& key, const Sideline::Slot& slot) {
      return !(std::isfinite(slot.score) && sm.would_modify(key, slot.score));
    });
    if (removed) ++version_;
  }
  summax_dirty_ = false;

  if (!options_.truncate_ppswor) return;
  const double tau = summax_.sample().threshold();
  const double b = spec_.B(gamma_);
  if (!(b > 0.0)) {
    ppswor_bound_ = 0.0;
  } else if (std::isinf(tau)) {
    ppswor_bound_ = kInf;
  } else {
    ppswor_bound_ = static_cast<double>(r_) * b * tau * (1.0 + kTruncSlack);
  }
  BottomK& pp = ppswor_.sample();
  while (!pp.empty() && pp.max_value() >= ppswor_bound_) {
    pp.pop_max();
    ++version_;
  }
}

void SamplerSketch::check_compatible(const SamplerSketch& o) const {
  if (k_ != o.k_ || eps_ != o.eps_ || !(spec_ == o.spec_) || !(hash() == o.hash()) || !(options_ == o.options_)) {
    throw Error(ErrorKind::kIncompatibleSketch, "sketches differ in k, eps, function, hash seed or options");
  }
}

void SamplerSketch::merge(const SamplerSketch& other) {
  check_compatible(other);
  sum_ += other.sum_;
  gamma_ = sum_ > 0.0 ? 2.0 * eps_ / sum_ : kInf;
  sideline_.merge(other.sideline_);
  ppswor_.merge(other.ppswor_);
  summax_.merge(other.summax_);
  ++version_;
  summax_dirty_ = true;
  flush();
  optimize();
}

SketchSize SamplerSketch::size() const {
  if (size_version_ == version_) return size_cache_;
  std::unordered_set<std::string_view> keys;
  auto add = [&](const std::string& key, double) { keys.insert(key); };
  ppswor_.sample().for_each(add);
  summax_.sample().for_each(add);
  sideline_.for_each([&](const std::string& key, const Sideline::Slot&) { keys.insert(key); });
  size_cache_ = SketchSize{keys.size(), ppswor_.sample().size() + summax_.sample().size() + sideline_.size()};
  size_version_ = version_;
  return size_cache_;
}

SamplerSketch SamplerSketch::restore(std::size_t k, double eps, FunctionSpec spec, RandomSource rng, ExpHash hash,
                                     SketchOptions options, double sum, const std::vector<BottomK::Entry>& ppswor,
                                     const std::vector<BottomK::Entry>& summax,
                                     const std::vector<Sideline::Item>& sideline) {
  SamplerSketch s(k, eps, std::move(spec), rng, hash, options);
  if (!(sum >= 0.0) || !std::isfinite(sum)) throw Error(ErrorKind::kFormat, "sketch sum must be finite and >= 0");
  s.sum_ = sum;
  s.gamma_ = sum > 0.0 ? 2.0 * eps / sum : kInf;
  for (const auto& e : ppswor) s.ppswor_.sample().process(e.key, e.value);
  for (const auto& e : summax) s.summax_.process_score(e.key, e.value);
  for (const auto& item : sideline) {
    if (item.replica >= s.r_) throw Error(ErrorKind::kFormat, "sideline replica index out of range");
    s.sideline_.offer(item.key, item.replica, item.value, s.sideline_score(item.key, item.replica, item.value));
  }
  ++s.version_;
  s.summax_dirty_ = true;
  s.flush();
  s.optimize();
  return s;
}

bool operator==(const SamplerSketch& a, const SamplerSketch& b) {
  return a.k_ == b.k_ && a.eps_ == b.eps_ && a.r_ == b.r_ && a.spec_ == b.spec_ && a.sum_ == b.sum_ &&
         a.gamma_ == b.gamma_ && a.ppswor_.sample() == b.ppswor_.sample() &&
         a.summax_.sample() == b.summax_.sample() && a.sideline_ == b.sideline_;
}

}  // namespace fsketch

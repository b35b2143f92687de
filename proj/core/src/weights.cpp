#include "bundle_lab/weights.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

namespace bundle_lab {

namespace {

// Above this index beta is accumulated as a sum of logarithms.
constexpr std::size_t kLogSpaceThreshold = 10000;

double nln_exponent(std::size_t k) {
  const double kk = static_cast<double>(k);
  // ln^2(k+3) - ln^2(k+2) = ln(1 + 1/(k+2)) (ln(k+3) + ln(k+2))
  return std::log1p(1.0 / (kk + 2.0)) * (std::log(kk + 3.0) + std::log(kk + 2.0));
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

struct WeightSequence::Impl {
  Kind kind = Kind::Hardy;
  double param = 0.0;
  std::vector<double> list;
  std::string source;
  std::shared_ptr<Impl> of;

  mutable std::mutex mutex;
  mutable std::vector<double> w{1.0};  // w[0] unused
  mutable std::vector<double> beta{1.0};
  mutable std::vector<double> log_beta{0.0};
  mutable double log_comp = 0.0;  // Neumaier compensation for log_beta

  double raw_weight(std::size_t k) const {
    const double kk = static_cast<double>(k);
    switch (kind) {
      case Kind::Hardy:
        return 1.0;
      case Kind::Bergman:
        return std::sqrt((kk + 1.0) / (kk + 2.0 * param + 1.0));
      case Kind::PolyGrowth:
        return (kk + param + 1.0) / (kk + 1.0);
      case Kind::Nln:
        return std::exp(nln_exponent(k)) * (kk + 2.0) / (kk + 1.0);
      case Kind::Explicit:
        if (k > list.size()) {
          throw TruncationRangeError("explicit weight list (" + source + ") has " + std::to_string(list.size()) +
                                     " entries; index " + std::to_string(k) + " requested");
        }
        return list[k - 1];
      case Kind::Reciprocal:
        return 1.0 / of->raw_weight(k);
    }
    return 1.0;
  }

  double raw_weight_minus_one(std::size_t k) const {
    const double kk = static_cast<double>(k);
    switch (kind) {
      case Kind::Hardy:
        return 0.0;
      case Kind::Bergman: {
        const double r = (kk + 1.0) / (kk + 2.0 * param + 1.0);
        return (-2.0 * param / (kk + 2.0 * param + 1.0)) / (std::sqrt(r) + 1.0);
      }
      case Kind::PolyGrowth:
        return param / (kk + 1.0);
      case Kind::Nln:
        return ((kk + 2.0) * std::expm1(nln_exponent(k)) + 1.0) / (kk + 1.0);
      case Kind::Explicit:
        return raw_weight(k) - 1.0;
      case Kind::Reciprocal: {
        const double wm1 = of->raw_weight_minus_one(k);
        return -wm1 / (1.0 + wm1);
      }
    }
    return 0.0;
  }

  void extend_locked(std::size_t k) const {
    if (kind == Kind::Explicit && k > list.size()) {
      raw_weight(k);  // throws
    }
    while (w.size() <= k) {
      const std::size_t i = w.size();
      const double wi = raw_weight(i);
      w.push_back(wi);
      const double lw = std::log(wi);
      // Neumaier summation of log w_i.
      const double prev = log_beta.back();
      const double sum = prev + lw;
      if (std::abs(prev) >= std::abs(lw)) {
        log_comp += (prev - sum) + lw;
      } else {
        log_comp += (lw - sum) + prev;
      }
      if (i <= kLogSpaceThreshold) {
        beta.push_back(beta.back() * wi);
        log_beta.push_back(std::log(beta.back()));
        log_comp = 0.0;
      } else {
        log_beta.push_back(sum);
        beta.push_back(std::exp(sum + log_comp));
      }
    }
  }

  void extend(std::size_t k) const {
    std::lock_guard lock(mutex);
    extend_locked(k);
  }
};

WeightSequence::WeightSequence(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

WeightSequence WeightSequence::hardy() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Hardy;
  return WeightSequence(impl);
}

WeightSequence WeightSequence::bergman(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("bergman: alpha must be a finite nonnegative real");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Bergman;
  impl->param = alpha;
  return WeightSequence(impl);
}

WeightSequence WeightSequence::polygrowth(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw DomainError("polygrowth: M must be a finite positive real");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::PolyGrowth;
  impl->param = M;
  return WeightSequence(impl);
}

WeightSequence WeightSequence::nln() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Nln;
  return WeightSequence(impl);
}

WeightSequence WeightSequence::explicit_list(std::vector<double> weights, std::string source) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("explicit weights: w_" + std::to_string(i + 1) + " is not a finite positive real");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Explicit;
  impl->list = std::move(weights);
  impl->source = std::move(source);
  return WeightSequence(impl);
}

WeightSequence WeightSequence::reciprocal(const WeightSequence& of) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Reciprocal;
  impl->of = of.impl_;
  return WeightSequence(impl);
}

WeightSequence WeightSequence::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open weight file '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t");
    std::string field = line.substr(start, end - start + 1);
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
      field = field.substr(1, field.size() - 2);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      throw ParseError("weight file: not a number", line_no, static_cast<int>(start) + 1);
    }
    if (used != field.size()) {
      throw ParseError("weight file: trailing characters", line_no, static_cast<int>(start + used) + 1);
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParseError("weight file: weights must be positive", line_no, static_cast<int>(start) + 1);
    }
    values.push_back(v);
  }
  return explicit_list(std::move(values), path);
}

WeightSequence WeightSequence::parse(std::string_view id) {
  auto param_of = [&](std::string_view rest, std::string_view key) -> double {
    const std::string prefix = std::string(key) + "=";
    if (rest.substr(0, prefix.size()) != prefix) {
      throw ParseError("weight preset '" + std::string(id) + "': expected '" + prefix + "'");
    }
    const std::string value(rest.substr(prefix.size()));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      throw ParseError("weight preset '" + std::string(id) + "': bad number");
    }
    if (used != value.size()) {
      throw ParseError("weight preset '" + std::string(id) + "': bad number");
    }
    return v;
  };

  const std::size_t colon = id.find(':');
  const std::string_view head = id.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
  if (head == "hardy" && colon == std::string_view::npos) return hardy();
  if (head == "nln" && colon == std::string_view::npos) return nln();
  if (head == "bergman") return bergman(param_of(rest, "alpha"));
  if (head == "polygrowth") return polygrowth(param_of(rest, "M"));
  if (head == "reciprocal" && !rest.empty()) return reciprocal(parse(rest));
  if (head == "explicit") {
    if (rest.substr(0, 5) != "path=") {
      throw ParseError("weight preset '" + std::string(id) + "': expected 'path='");
    }
    return from_csv(std::string(rest.substr(5)));
  }
  throw ParseError("unknown weight preset '" + std::string(id) + "'");
}

WeightSequence::Kind WeightSequence::kind() const { return impl_->kind; }

double WeightSequence::parameter() const { return impl_->param; }

std::optional<WeightSequence> WeightSequence::base() const {
  if (impl_->kind != Kind::Reciprocal) return std::nullopt;
  return WeightSequence(impl_->of);
}

std::string WeightSequence::id() const {
  switch (impl_->kind) {
    case Kind::Hardy:
      return "hardy";
    case Kind::Bergman:
      return "bergman:alpha=" + format_number(impl_->param);
    case Kind::PolyGrowth:
      return "polygrowth:M=" + format_number(impl_->param);
    case Kind::Nln:
      return "nln";
    case Kind::Explicit:
      return "explicit:path=" + impl_->source;
    case Kind::Reciprocal:
      return "reciprocal:" + WeightSequence(impl_->of).id();
  }
  return "";
}

double WeightSequence::weight(std::size_t k) const {
  if (k == 0) throw DomainError("weights are indexed from k = 1");
  std::lock_guard lock(impl_->mutex);
  impl_->extend_locked(k);
  return impl_->w[k];
}

double WeightSequence::weight_minus_one(std::size_t k) const {
  if (k == 0) throw DomainError("weights are indexed from k = 1");
  return impl_->raw_weight_minus_one(k);
}

double WeightSequence::beta(std::size_t k) const {
  std::lock_guard lock(impl_->mutex);
  impl_->extend_locked(k);
  return impl_->beta[k];
}

double WeightSequence::log_beta(std::size_t k) const {
  std::lock_guard lock(impl_->mutex);
  impl_->extend_locked(k);
  return impl_->log_beta[k];
}

std::vector<double> WeightSequence::betas(std::size_t count) const {
  if (count == 0) return {};
  std::lock_guard lock(impl_->mutex);
  impl_->extend_locked(count - 1);
  return {impl_->beta.begin(), impl_->beta.begin() + static_cast<std::ptrdiff_t>(count)};
}

void WeightSequence::reserve(std::size_t k) const { impl_->extend(k); }

std::optional<std::size_t> WeightSequence::max_index() const {
  const Impl* p = impl_.get();
  while (p->kind == Kind::Reciprocal) p = p->of.get();
  if (p->kind == Kind::Explicit) return p->list.size();
  return std::nullopt;
}

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::Polynomial:
      return "polynomial";
    case GrowthClass::Intermediate:
      return "intermediate";
    case GrowthClass::Undetermined:
      return "empirical-undetermined";
  }
  return "";
}

double beta(const WeightSequence& w, std::size_t k) { return w.beta(k); }

namespace {

std::optional<GrowthClass> certified_class(const WeightSequence& w) {
  switch (w.kind()) {
    case WeightSequence::Kind::Hardy:
    case WeightSequence::Kind::Bergman:
    case WeightSequence::Kind::PolyGrowth:
      return GrowthClass::Polynomial;
    case WeightSequence::Kind::Nln:
      return GrowthClass::Intermediate;
    case WeightSequence::Kind::Explicit:
      return std::nullopt;
    case WeightSequence::Kind::Reciprocal:
      // (k+1)|1/w_k - 1| = (k+1)|w_k - 1| / w_k with w_k -> 1.
      return certified_class(*w.base());
  }
  return std::nullopt;
}

}  // namespace

GrowthReport growth_classify(const WeightSequence& w, std::size_t K) {
  if (K < 10) throw DomainError("growth_classify: probe limit must be at least 10");
  GrowthReport report;
  std::size_t limit = K;
  if (auto max = w.max_index()) limit = std::min(limit, *max);
  report.probe_limit = limit;

  const std::size_t lo = std::max<std::size_t>(1, limit / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 1; k <= limit; ++k) {
    const double y = static_cast<double>(k + 1) * w.weight_minus_one(k);
    if (std::abs(y) > report.sup_val) {
      report.sup_val = std::abs(y);
      report.sup_index = k;
    }
    if (k >= lo) {
      const double x = std::log10(static_cast<double>(k));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (k == limit) report.last_val = y;
  }
  if (n >= 2) {
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    report.tail_trend = denom > 0 ? (static_cast<double>(n) * sxy - sx * sy) / denom : 0.0;
  }
  if (auto c = certified_class(w)) {
    report.classification = *c;
    report.certified = true;
  } else {
    report.classification = GrowthClass::Undetermined;
    report.certified = false;
  }
  return report;
}

WeightSequence dual_weights(const WeightSequence& w) {
  if (w.kind() == WeightSequence::Kind::Hardy) return w;
  if (auto b = w.base()) return *b;
  return WeightSequence::reciprocal(w);
}

std::optional<double> power_law_exponent(const WeightSequence& w) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (w.kind()) {
    case WeightSequence::Kind::Hardy:
      return 0.0;
    case WeightSequence::Kind::Bergman:
      return -w.parameter();
    case WeightSequence::Kind::PolyGrowth:
      return w.parameter();
    case WeightSequence::Kind::Nln:
      return inf;
    case WeightSequence::Kind::Explicit:
      return std::nullopt;
    case WeightSequence::Kind::Reciprocal: {
      auto e = power_law_exponent(*w.base());
      if (!e) return std::nullopt;
      return -*e;
    }
  }
  return std::nullopt;
}

EquivalenceReport equivalent(const WeightSequence& a, const WeightSequence& b, std::size_t K) {
  if (K < 1) throw DomainError("equivalent: probe limit must be positive");
  EquivalenceReport r;
  r.k1 = std::numeric_limits<double>::infinity();
  r.k2 = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double ratio = std::exp(b.log_beta(k) - a.log_beta(k));
    r.k1 = std::min(r.k1, ratio);
    r.k2 = std::max(r.k2, ratio);
  }
  r.exponent_a = power_law_exponent(a);
  r.exponent_b = power_law_exponent(b);
  r.analytic = r.exponent_a.has_value() && r.exponent_b.has_value();
  const bool bounded = std::isfinite(r.k2) && r.k1 > 0.0;
  r.equivalent = bounded && r.analytic && std::isfinite(*r.exponent_a) && *r.exponent_a == *r.exponent_b;
  return r;
}

}  // namespace bundle_lab

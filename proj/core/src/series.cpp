#include "bundle_lab/series.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <variant>

namespace bundle_lab {

// ---------------------------------------------------------------- PowerSeries

PowerSeries::PowerSeries(std::vector<cplx> coeffs, bool terminates)
    : c_(std::move(coeffs)), terminates_(terminates) {
  if (c_.empty()) c_.resize(1);
  for (auto c : c_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("power series coefficients must be finite");
    }
  }
}

PowerSeries PowerSeries::monomial(std::size_t n, std::size_t K) {
  std::vector<cplx> c(K + 1);
  if (n <= K) c[n] = 1.0;
  return PowerSeries(std::move(c), n <= K);
}

PowerSeries PowerSeries::geom(cplx a, std::size_t K) {
  std::vector<cplx> c(K + 1);
  const cplx r = std::conj(a);
  cplx p = 1.0;
  for (std::size_t k = 0; k <= K; ++k) {
    c[k] = p;
    p *= r;
  }
  return PowerSeries(std::move(c), a == cplx{});
}

PowerSeries PowerSeries::truncated(std::size_t K) const {
  std::vector<cplx> c(K + 1);
  for (std::size_t k = 0; k <= K && k < c_.size(); ++k) c[k] = c_[k];
  bool term = terminates_;
  for (std::size_t k = K + 1; k < c_.size(); ++k)
    if (c_[k] != cplx{}) term = false;
  return PowerSeries(std::move(c), term);
}

PowerSeries PowerSeries::star() const {
  std::vector<cplx> c(c_.size());
  std::transform(c_.begin(), c_.end(), c.begin(), [](cplx x) { return std::conj(x); });
  return PowerSeries(std::move(c), terminates_);
}

std::size_t PowerSeries::effective_length(double rel_tol) const {
  double m = 0.0;
  for (auto c : c_) m = std::max(m, std::abs(c));
  std::size_t len = 0;
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (std::abs(c_[k]) > rel_tol * m) len = k + 1;
  return std::max<std::size_t>(len, 1);
}

PowerSeries PowerSeries::times_moebius_factor(cplx a) const {
  const std::size_t n = c_.size();
  std::vector<cplx> out(n);
  const cplx ab = std::conj(a);
  cplx prev{};
  for (std::size_t k = 0; k < n; ++k) {
    // g = (a - z) f, then h = g / (1 - conj(a) z)
    const cplx g = a * c_[k] - (k > 0 ? c_[k - 1] : cplx{});
    prev = g + ab * prev;
    out[k] = prev;
  }
  return PowerSeries(std::move(out), false);
}

PowerSeries PowerSeries::times_blaschke(const BlaschkeProduct& b) const {
  PowerSeries r = std::polar(1.0, b.theta()) * (*this);
  for (auto a : b.zeros()) r = r.times_moebius_factor(a);
  return r;
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  const std::size_t K = std::min(a.order(), b.order());
  std::vector<cplx> c(K + 1);
  for (std::size_t k = 0; k <= K; ++k) c[k] = a[k] + b[k];
  return PowerSeries(std::move(c), a.terminates() && b.terminates());
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return a + (-1.0) * b; }

PowerSeries operator*(cplx s, const PowerSeries& a) {
  std::vector<cplx> c(a.coeffs());
  for (auto& x : c) x *= s;
  return PowerSeries(std::move(c), a.terminates());
}

PowerSeries multiply(const PowerSeries& f, const PowerSeries& g) {
  const std::size_t K = std::min(f.order(), g.order());
  std::vector<cplx> c(K + 1);
  const auto& fc = f.coeffs();
  const auto& gc = g.coeffs();
  // Skip structural zeros of f (common for sparse polynomials).
  for (std::size_t i = 0; i <= K; ++i) {
    if (fc[i] == cplx{}) continue;
    const cplx fi = fc[i];
    for (std::size_t j = 0; i + j <= K; ++j) c[i + j] += fi * gc[j];
  }
  bool term = f.terminates() && g.terminates();
  if (term) {
    // Exact only if no product term was cut off.
    std::size_t df = 0, dg = 0;
    for (std::size_t i = 0; i < fc.size(); ++i)
      if (fc[i] != cplx{}) df = i;
    for (std::size_t i = 0; i < gc.size(); ++i)
      if (gc[i] != cplx{}) dg = i;
    term = df + dg <= K;
  }
  return PowerSeries(std::move(c), term);
}

PowerSeries divide(const PowerSeries& f, const PowerSeries& g) {
  if (g[0] == cplx{}) throw DomainError("series division by a series vanishing at 0");
  const std::size_t K = std::min(f.order(), g.order());
  std::size_t gd = 0;
  for (std::size_t i = 0; i <= K; ++i)
    if (g[i] != cplx{}) gd = i;
  std::vector<cplx> q(K + 1);
  const cplx inv0 = 1.0 / g[0];
  for (std::size_t k = 0; k <= K; ++k) {
    cplx s = f[k];
    const std::size_t lim = std::min(k, gd);
    for (std::size_t i = 1; i <= lim; ++i) s -= g[i] * q[k - i];
    q[k] = s * inv0;
  }
  return PowerSeries(std::move(q), false);
}

PowerSeries derivative(const PowerSeries& f) {
  const std::size_t K = f.order();
  if (K == 0) return PowerSeries(std::vector<cplx>{0.0}, true);
  std::vector<cplx> c(K);
  for (std::size_t k = 0; k + 1 <= K; ++k) c[k] = static_cast<double>(k + 1) * f[k + 1];
  return PowerSeries(std::move(c), f.terminates());
}

cplx eval(const PowerSeries& f, cplx z) {
  cplx acc{};
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<cplx, cplx> eval_with_derivative(const PowerSeries& f, cplx z) {
  cplx p{}, dp{};
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

double sup_on_circle(const PowerSeries& g, std::size_t samples) {
  double sup = 0.0, dsup = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const cplx z = std::polar(1.0, 2.0 * kPi * static_cast<double>(s) / static_cast<double>(samples));
    auto [v, d] = eval_with_derivative(g, z);
    sup = std::max(sup, std::abs(v));
    dsup = std::max(dsup, std::abs(d));
  }
  return sup + dsup * kPi / static_cast<double>(samples);
}

Composition compose(const PowerSeries& f, const PowerSeries& g, std::size_t K, double margin) {
  Composition out;
  out.sup_inner = sup_on_circle(g);
  std::size_t kf = f.order();
  while (kf > 0 && f[kf] == cplx{}) --kf;
  if (!f.terminates()) {
    if (out.sup_inner >= 1.0 - margin) {
      throw DomainError("compose: sup|g| on the circle is " + std::to_string(out.sup_inner) +
                        ", too close to 1 for a truncated outer series");
    }
    const double s = out.sup_inner;
    out.tail_bound = std::abs(f[kf]) * std::pow(s, static_cast<double>(kf)) / (1.0 - s);
  }
  const PowerSeries gk = g.truncated(K);
  PowerSeries acc(std::vector<cplx>(K + 1), true);
  acc[0] = f[kf];
  for (std::size_t k = kf; k-- > 0;) {
    acc = multiply(acc, gk);
    acc[0] += f[k];
  }
  out.series = PowerSeries(acc.coeffs(), f.terminates() && gk.terminates() && acc.terminates());
  return out;
}

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

cplx inner(const PowerSeries& f, const PowerSeries& g, const WeightSequence& w) {
  const std::size_t K = std::max(f.order(), g.order());
  const auto b = w.betas(K + 1);
  Neumaier re, im;
  for (std::size_t k = 0; k <= K; ++k) {
    const cplx t = b[k] * b[k] * std::conj(g[k]) * f[k];
    re.add(t.real());
    im.add(t.imag());
  }
  return {re.value(), im.value()};
}

double norm(const PowerSeries& f, const WeightSequence& w) { return std::sqrt(std::max(0.0, inner(f, f, w).real())); }

// ---------------------------------------------------------------- FunctionSpec

namespace {
struct PolyNode {
  std::vector<cplx> coeffs;
};
struct BlaschkeNode {
  BlaschkeProduct b;
};
struct ComposeNode {
  FunctionSpec outer, inner;
};
struct SumNode {
  std::vector<FunctionSpec> terms;
};
struct ProductNode {
  std::vector<FunctionSpec> factors;
};
struct ScaleNode {
  cplx c;
  FunctionSpec f;
};
struct StarNode {
  FunctionSpec f;
};
}  // namespace

struct FunctionSpec::Node {
  std::variant<PolyNode, BlaschkeNode, ComposeNode, SumNode, ProductNode, ScaleNode, StarNode> v;
};

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

FunctionSpec::FunctionSpec() : node_(std::make_shared<Node>(Node{PolyNode{{0.0, 1.0}}})) {}

FunctionSpec FunctionSpec::polynomial(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return FunctionSpec(std::make_shared<Node>(Node{PolyNode{std::move(coeffs)}}));
}

FunctionSpec FunctionSpec::blaschke(const BlaschkeProduct& b) {
  return FunctionSpec(std::make_shared<Node>(Node{BlaschkeNode{b}}));
}

FunctionSpec FunctionSpec::compose(const FunctionSpec& outer, const FunctionSpec& inner) {
  return FunctionSpec(std::make_shared<Node>(Node{ComposeNode{outer, inner}}));
}

FunctionSpec FunctionSpec::sum(std::vector<FunctionSpec> terms) {
  if (terms.empty()) throw DomainError("sum of no terms");
  return FunctionSpec(std::make_shared<Node>(Node{SumNode{std::move(terms)}}));
}

FunctionSpec FunctionSpec::product(std::vector<FunctionSpec> factors) {
  if (factors.empty()) throw DomainError("product of no factors");
  return FunctionSpec(std::make_shared<Node>(Node{ProductNode{std::move(factors)}}));
}

FunctionSpec FunctionSpec::scale(cplx c, const FunctionSpec& f) {
  return FunctionSpec(std::make_shared<Node>(Node{ScaleNode{c, f}}));
}

FunctionSpec FunctionSpec::star(const FunctionSpec& f) {
  return FunctionSpec(std::make_shared<Node>(Node{StarNode{f}}));
}

std::string FunctionSpec::to_string() const {
  auto join = [](const std::vector<FunctionSpec>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].to_string();
    return s;
  };
  return std::visit(overloaded{
                        [](const PolyNode& n) {
                          std::string s = "poly(";
                          for (std::size_t i = 0; i < n.coeffs.size(); ++i)
                            s += (i ? ", " : "") + format_complex(n.coeffs[i]);
                          return s + ")";
                        },
                        [](const BlaschkeNode& n) { return n.b.to_string(); },
                        [](const ComposeNode& n) {
                          return "compose(" + n.outer.to_string() + ", " + n.inner.to_string() + ")";
                        },
                        [&](const SumNode& n) { return "sum(" + join(n.terms) + ")"; },
                        [&](const ProductNode& n) { return "product(" + join(n.factors) + ")"; },
                        [](const ScaleNode& n) { return "scale(" + format_complex(n.c) + "; " + n.f.to_string() + ")"; },
                        [](const StarNode& n) { return "star(" + n.f.to_string() + ")"; },
                    },
                    node_->v);
}

cplx FunctionSpec::operator()(cplx z) const { return eval_with_derivative(z).first; }

std::pair<cplx, cplx> FunctionSpec::eval_with_derivative(cplx z) const {
  using J = std::pair<cplx, cplx>;
  return std::visit(overloaded{
                        [&](const PolyNode& n) -> J { return Polynomial(n.coeffs).eval_with_derivative(z); },
                        [&](const BlaschkeNode& n) -> J { return n.b.eval_with_derivative(z); },
                        [&](const ComposeNode& n) -> J {
                          auto [gi, dgi] = n.inner.eval_with_derivative(z);
                          auto [fo, dfo] = n.outer.eval_with_derivative(gi);
                          return {fo, dfo * dgi};
                        },
                        [&](const SumNode& n) -> J {
                          J acc{};
                          for (const auto& t : n.terms) {
                            auto [v, d] = t.eval_with_derivative(z);
                            acc.first += v;
                            acc.second += d;
                          }
                          return acc;
                        },
                        [&](const ProductNode& n) -> J {
                          J acc{1.0, 0.0};
                          for (const auto& t : n.factors) {
                            auto [v, d] = t.eval_with_derivative(z);
                            acc = {acc.first * v, acc.second * v + acc.first * d};
                          }
                          return acc;
                        },
                        [&](const ScaleNode& n) -> J {
                          auto [v, d] = n.f.eval_with_derivative(z);
                          return {n.c * v, n.c * d};
                        },
                        [&](const StarNode& n) -> J {
                          auto [v, d] = n.f.eval_with_derivative(std::conj(z));
                          return {std::conj(v), std::conj(d)};
                        },
                    },
                    node_->v);
}

namespace {

bool same_poly(const Polynomial& a, const Polynomial& b) { return a.coeffs() == b.coeffs(); }

void check_cap(const RationalFunction& r, int cap) {
  if (r.num.degree() > cap || r.den.degree() > cap) {
    throw DomainError("rational reduction exceeds the degree cap of " + std::to_string(cap));
  }
}

}  // namespace

RationalFunction FunctionSpec::rational(int degree_cap) const {
  RationalFunction r = std::visit(
      overloaded{
          [](const PolyNode& n) { return RationalFunction{Polynomial(n.coeffs), Polynomial::constant(1.0)}; },
          [](const BlaschkeNode& n) { return n.b.rational(); },
          [&](const ComposeNode& n) {
            const RationalFunction o = n.outer.rational(degree_cap);
            const RationalFunction in = n.inner.rational(degree_cap);
            const int d = std::max(0, o.degree());
            // Homogenize: sum_i p_i A^i C^{d-i} / sum_i q_i A^i C^{d-i}.
            std::vector<Polynomial> apow{Polynomial::constant(1.0)}, cpow{Polynomial::constant(1.0)};
            for (int i = 1; i <= d; ++i) {
              apow.push_back(apow.back() * in.num);
              cpow.push_back(cpow.back() * in.den);
            }
            Polynomial num, den;
            for (int i = 0; i <= d; ++i) {
              const Polynomial basis = apow[static_cast<std::size_t>(i)] * cpow[static_cast<std::size_t>(d - i)];
              num = num + o.num.coeff(static_cast<std::size_t>(i)) * basis;
              den = den + o.den.coeff(static_cast<std::size_t>(i)) * basis;
            }
            return RationalFunction{num, den};
          },
          [&](const SumNode& n) {
            RationalFunction acc = n.terms.front().rational(degree_cap);
            for (std::size_t i = 1; i < n.terms.size(); ++i) {
              const RationalFunction t = n.terms[i].rational(degree_cap);
              if (same_poly(acc.den, t.den)) {
                acc.num = acc.num + t.num;
              } else {
                acc = {acc.num * t.den + t.num * acc.den, acc.den * t.den};
              }
              check_cap(acc, degree_cap);
            }
            return acc;
          },
          [&](const ProductNode& n) {
            RationalFunction acc = n.factors.front().rational(degree_cap);
            for (std::size_t i = 1; i < n.factors.size(); ++i) {
              const RationalFunction t = n.factors[i].rational(degree_cap);
              acc = {acc.num * t.num, acc.den * t.den};
              check_cap(acc, degree_cap);
            }
            return acc;
          },
          [&](const ScaleNode& n) {
            RationalFunction r = n.f.rational(degree_cap);
            return RationalFunction{n.c * r.num, r.den};
          },
          [&](const StarNode& n) { return n.f.rational(degree_cap).conjugated(); },
      },
      node_->v);
  check_cap(r, degree_cap);
  return r;
}

bool FunctionSpec::is_polynomial() const {
  return std::visit(overloaded{
                        [](const PolyNode&) { return true; },
                        [](const BlaschkeNode& n) { return n.b.order() == 0; },
                        [](const ComposeNode& n) { return n.outer.is_polynomial() && n.inner.is_polynomial(); },
                        [](const SumNode& n) {
                          return std::all_of(n.terms.begin(), n.terms.end(), [](const auto& t) { return t.is_polynomial(); });
                        },
                        [](const ProductNode& n) {
                          return std::all_of(n.factors.begin(), n.factors.end(),
                                             [](const auto& t) { return t.is_polynomial(); });
                        },
                        [](const ScaleNode& n) { return n.f.is_polynomial(); },
                        [](const StarNode& n) { return n.f.is_polynomial(); },
                    },
                    node_->v);
}

std::optional<BlaschkeProduct> FunctionSpec::as_blaschke() const {
  if (const auto* b = std::get_if<BlaschkeNode>(&node_->v)) return b->b;
  if (const auto* s = std::get_if<StarNode>(&node_->v)) {
    if (auto inner = s->f.as_blaschke()) return inner->star();
  }
  return std::nullopt;
}

std::optional<std::vector<cplx>> FunctionSpec::as_polynomial() const {
  if (const auto* p = std::get_if<PolyNode>(&node_->v)) return p->coeffs;
  return std::nullopt;
}

PowerSeries taylor(const FunctionSpec& spec, std::size_t K) {
  return std::visit(
      overloaded{
          [&](const PolyNode& n) {
            std::vector<cplx> c(K + 1);
            bool term = true;
            for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
              if (i <= K) {
                c[i] = n.coeffs[i];
              } else if (n.coeffs[i] != cplx{}) {
                term = false;
              }
            }
            return PowerSeries(std::move(c), term);
          },
          [&](const BlaschkeNode& n) {
            PowerSeries one = PowerSeries::monomial(0, K);
            PowerSeries r = one.times_blaschke(n.b);
            return n.b.order() == 0 ? PowerSeries(r.coeffs(), true) : r;
          },
          [&](const ComposeNode& n) {
            const PowerSeries inner = taylor(n.inner, K);
            if (auto b = n.outer.as_blaschke()) {
              // B(g) = e^{i theta} prod (a - g) / (1 - conj(a) g)
              PowerSeries acc = std::polar(1.0, b->theta()) * PowerSeries::monomial(0, K);
              for (auto a : b->zeros()) {
                PowerSeries numer = a * PowerSeries::monomial(0, K) - inner;
                PowerSeries denom = PowerSeries::monomial(0, K) - std::conj(a) * inner;
                acc = multiply(acc, divide(numer, denom));
              }
              return acc;
            }
            const RationalFunction o = n.outer.rational();
            auto horner = [&](const Polynomial& p) {
              PowerSeries acc = PowerSeries::zero(K);
              const auto& c = p.coeffs();
              for (auto it = c.rbegin(); it != c.rend(); ++it) {
                acc = multiply(acc, inner);
                acc[0] += *it;
              }
              return acc;
            };
            PowerSeries num = horner(o.num);
            if (o.den.degree() == 0) {
              const cplx d = o.den.coeff(0);
              return PowerSeries((1.0 / d * num).coeffs(), num.terminates());
            }
            return divide(num, horner(o.den));
          },
          [&](const SumNode& n) {
            PowerSeries acc = taylor(n.terms.front(), K);
            for (std::size_t i = 1; i < n.terms.size(); ++i) acc = acc + taylor(n.terms[i], K);
            return acc;
          },
          [&](const ProductNode& n) {
            PowerSeries acc = taylor(n.factors.front(), K);
            for (std::size_t i = 1; i < n.factors.size(); ++i) acc = multiply(acc, taylor(n.factors[i], K));
            return acc;
          },
          [&](const ScaleNode& n) { return n.c * taylor(n.f, K); },
          [&](const StarNode& n) { return taylor(n.f, K).star(); },
      },
      spec.node_->v);
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  FunctionSpec parse_all() {
    FunctionSpec f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

  cplx complex_all() {
    cplx c = complex();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression: " + what, 1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a function name");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::optional<double> number() {
    skip();
    const char* begin = s_.data() + pos_;
    const std::string tail(s_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(tail.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - tail.c_str());
    if (used == 0) return std::nullopt;
    // Reject inf/nan spellings.
    if (!std::isdigit(static_cast<unsigned char>(begin[0])) && begin[0] != '.' && begin[0] != '+' && begin[0] != '-') {
      return std::nullopt;
    }
    pos_ += used;
    return v;
  }

  // real | real 'i' | real ('+'|'-') real? 'i' | 'i' ; with optional leading sign.
  cplx complex() {
    skip();
    double sign = 1.0;
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      sign = s_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return {0.0, sign};
    }
    const std::size_t at = pos_;
    std::optional<double> a;
    if (pos_ < s_.size() && s_[pos_] != '+' && s_[pos_] != '-') a = number();
    if (!a) {
      pos_ = at;
      fail("expected a complex literal");
    }
    const double re = sign * *a;
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return {0.0, re};
    }
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const std::size_t save = pos_;
      const double isign = s_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return {re, isign};
      }
      std::optional<double> b;
      if (pos_ < s_.size() && s_[pos_] != '+' && s_[pos_] != '-') b = number();
      if (b && pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return {re, isign * *b};
      }
      pos_ = save;
      fail("malformed complex literal");
    }
    return {re, 0.0};
  }

  std::vector<cplx> complex_list(char close) {
    std::vector<cplx> out;
    if (peek(close)) return out;
    out.push_back(complex());
    while (peek(',')) {
      ++pos_;
      out.push_back(complex());
    }
    return out;
  }

  std::vector<FunctionSpec> expr_list() {
    std::vector<FunctionSpec> out{expr()};
    while (peek(',')) {
      ++pos_;
      out.push_back(expr());
    }
    return out;
  }

  FunctionSpec expr() {
    const std::size_t start = (skip(), pos_);
    const std::string name = ident();
    if (name == "z") return FunctionSpec();
    expect('(');
    FunctionSpec result;
    if (name == "poly") {
      auto c = complex_list(')');
      if (c.empty()) fail("poly() needs at least one coefficient");
      result = FunctionSpec::polynomial(std::move(c));
    } else if (name == "blaschke") {
      skip();
      auto theta = number();
      if (!theta) fail("blaschke: expected a real phase");
      expect(';');
      auto zeros = complex_list(')');
      try {
        result = FunctionSpec::blaschke(BlaschkeProduct(std::move(zeros), *theta));
      } catch (const DomainError& e) {
        pos_ = start;
        fail(e.what());
      }
    } else if (name == "compose") {
      FunctionSpec outer = expr();
      expect(',');
      FunctionSpec inner = expr();
      result = FunctionSpec::compose(outer, inner);
    } else if (name == "sum") {
      result = FunctionSpec::sum(expr_list());
    } else if (name == "product") {
      result = FunctionSpec::product(expr_list());
    } else if (name == "scale") {
      const cplx c = complex();
      expect(';');
      result = FunctionSpec::scale(c, expr());
    } else if (name == "star") {
      result = FunctionSpec::star(expr());
    } else {
      pos_ = start;
      fail("unknown function '" + name + "'");
    }
    expect(')');
    return result;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

FunctionSpec FunctionSpec::parse(std::string_view text) { return Parser(text).parse_all(); }

cplx parse_complex(std::string_view text) { return Parser(text).complex_all(); }

}  // namespace bundle_lab

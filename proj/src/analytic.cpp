#include "qnetfid/analytic.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "qnetfid/error.hpp"

namespace qnetfid {

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return InvalidArgument("not a rational number: '" + text + "'"); };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  BigInt digits = 0;
  long scale = 0;
  bool any_digit = false;
  bool after_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (after_point) --scale;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    if (i == text.size()) throw bad();
    long exponent = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])) || exponent > 100000) throw bad();
      exponent = exponent * 10 + (text[i] - '0');
    }
    scale += exp_negative ? -exponent : exponent;
  }
  Rational r(digits);
  const BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(scale)));
  if (scale >= 0) {
    r *= Rational(ten_pow);
  } else {
    r /= Rational(ten_pow);
  }
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace analytic {
namespace {

template <typename T>
void check_probability(const T& p) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("p must lie in [0,1]");
}

void check_nodes(std::size_t n, std::size_t min_n, const char* what) {
  if (n < min_n) {
    throw InvalidArgument(std::string(what) + " requires N >= " + std::to_string(min_n));
  }
}

void check_me_links(std::size_t m_links, std::size_t links) {
  if (m_links > links) {
    throw InvalidArgument("M=" + std::to_string(m_links) + " exceeds link count L=" + std::to_string(links));
  }
}

template <typename T>
T power(T base, long e) {
  T result = 1;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

// path_term(l) for l = 0..max_len, built by running multiplication.
template <typename T>
std::vector<T> path_terms(const T& p, std::size_t max_len) {
  std::vector<T> terms;
  terms.reserve(max_len + 1);
  T pw = 1;
  for (std::size_t l = 0; l <= max_len; ++l) {
    terms.push_back((T(1) + pw) / T(2));
    pw *= p;
  }
  return terms;
}

template <typename T>
T pairs(std::size_t n) {
  return T(static_cast<double>(n)) * T(static_cast<double>(n - 1)) / T(2);
}

template <>
Rational pairs<Rational>(std::size_t n) {
  return Rational(BigInt(n) * BigInt(n - 1) / 2);
}

template <typename T>
T num(std::size_t x) {
  return T(static_cast<long long>(x));
}

}  // namespace

template <typename T>
T binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return T(0);
  k = std::min(k, n - k);
  T r = 1;
  for (long i = 1; i <= k; ++i) {
    r = r * T(n - k + i) / T(i);
  }
  return r;
}

template <>
Rational binomial<Rational>(long n, long k) {
  if (n < 0 || k < 0 || k > n) return Rational(0);
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return Rational(r);
}

template <typename T>
T path_term(long n, const T& p) {
  if (n < 0) throw InvalidArgument("path length must be non-negative");
  return (T(1) + power(p, n)) / T(2);
}

template <typename T>
T star_A(std::size_t n, const T& p) {
  check_nodes(n, 2, "star");
  check_probability(p);
  const long links = static_cast<long>(n - 1);
  return (binomial<T>(links, 1) * path_term<T>(1, p) + binomial<T>(links, 2) * path_term<T>(2, p)) /
         pairs<T>(n);
}

template <typename T>
T chain_A(std::size_t n, const T& p) {
  check_nodes(n, 2, "chain");
  check_probability(p);
  const auto f = path_terms(p, n - 1);
  T total = 0;
  for (std::size_t l = 1; l <= n - 1; ++l) total += num<T>(n - l) * f[l];
  return total / pairs<T>(n);
}

template <typename T>
T flower_A(std::size_t n, std::size_t k, const T& p) {
  check_nodes(n, 3, "flower");
  check_probability(p);
  const std::size_t links = n - 1;
  if (k > links - 2) throw InvalidArgument("flower requires 0 <= k <= L-2");
  const auto f = path_terms(p, links);
  T total = binomial<T>(static_cast<long>(k + 1), 2) * f[2];
  for (std::size_t l = 1; l <= links - k; ++l) total += num<T>(n - l) * f[l];
  return total / pairs<T>(n);
}

template <typename T>
T ring_A(std::size_t n, const T& p) {
  check_nodes(n, 3, "ring");
  check_probability(p);
  const std::size_t half = n / 2;
  const auto f = path_terms(p, half);
  T total = 0;
  for (std::size_t l = 1; l <= half; ++l) total += f[l];
  return total / num<T>(half);
}

template <typename T>
T complete_A(const T& p) {
  check_probability(p);
  return (T(1) + p) / T(2);
}

template <typename T>
T star_B(std::size_t n, std::size_t m_links, const T& p) {
  check_nodes(n, 2, "star");
  check_probability(p);
  const long links = static_cast<long>(n - 1);
  check_me_links(m_links, n - 1);
  const long m = static_cast<long>(m_links);
  const T total = binomial<T>(m + 1, 2) * path_term<T>(0, p) +
                  T(m + 1) * T(links - m) * path_term<T>(1, p) +
                  binomial<T>(links - m, 2) * path_term<T>(2, p);
  return total / pairs<T>(n);
}

template <typename T>
T chain_B(std::size_t n, std::size_t m_links, const T& p) {
  check_nodes(n, 2, "chain");
  check_probability(p);
  const std::size_t links = n - 1;
  check_me_links(m_links, links);
  const std::size_t m = m_links;
  const auto f = path_terms(p, links);
  T inner = 0;
  for (std::size_t l = 1; l <= links - m; ++l) inner += num<T>(n - m - l) * f[l];
  // N - M >= 1 for every admissible M, so both prefactors stay finite.
  inner = inner * num<T>(n + 1) / num<T>(n - m) + num<T>(m) * f[0];
  return num<T>(n) / num<T>(n + 1 - m) * inner / pairs<T>(n);
}

template <typename T>
T flower_B(std::size_t n, std::size_t k, std::size_t m_links, const T& p) {
  check_nodes(n, 3, "flower");
  check_probability(p);
  const long links = static_cast<long>(n - 1);
  if (static_cast<long>(k) > links - 2) throw InvalidArgument("flower requires 0 <= k <= L-2");
  check_me_links(m_links, n - 1);
  const long m = static_cast<long>(m_links);
  const long ls = static_cast<long>(k) + 2;  // star links (petals + stem start)
  const long lc = links - ls;                // remaining chain links
  const auto f = path_terms(p, static_cast<std::size_t>(links + 2));
  const auto C = [](long a, long b) { return binomial<T>(a, b); };

  T total = 0;
  for (long ms = 0; ms <= std::min(ls, m); ++ms) {
    const long mc = m - ms;
    if (mc < 0 || mc > lc) continue;
    const T star_block =
        C(ms + 1, 2) * f[0] + T(ms + 1) * T(ls - ms) * f[1] + C(ls - ms, 2) * f[2];
    T chain_sum = 0;
    for (long l = 1; l <= lc - mc; ++l) chain_sum += T(lc + 1 - mc - l) * f[l];
    const T chain_block = T(mc) * T(lc + 1) / T(lc + 2 - mc) * f[0] +
                          T(lc + 1) / T(lc + 1 - mc) * T(lc + 2) / T(lc + 2 - mc) * chain_sum;
    // Routes that cross the hub between a petal and the chain.
    const T a2 = T(ls - ms - 1) * C(ls - 1, ms);
    const T a1 = T(ls - ms) * C(ls - 1, ms - 1) + T(ms + 1) * C(ls - 1, ms);
    const T a0 = T(ms) * C(ls - 1, ms - 1);
    T overlap = 0;
    for (long i = 1; i <= lc; ++i) {
      for (long l = std::max(0L, i - mc); l <= lc - mc; ++l) {
        const T ways = C(i, l) * C(lc - i, lc - mc - l);
        if (ways == 0) continue;
        overlap += (a2 * f[l + 2] + a1 * f[l + 1] + a0 * f[l]) * ways;
      }
    }
    total += C(ls, ms) * C(lc, mc) * (star_block + chain_block) + overlap;
  }
  return total / (pairs<T>(n) * C(links, m));
}

Rational triangle_C_expected() { return Rational(7, 9); }
Rational triangle_C_average_then_max() { return Rational(3, 4); }

namespace {

template <typename T>
std::optional<T> scenario_A_impl(const TopologySpec& spec, const T& p) {
  switch (spec.family) {
    case Family::kChain: return chain_A<T>(spec.n, p);
    case Family::kStar: return star_A<T>(spec.n, p);
    case Family::kFlower: return flower_A<T>(spec.n, spec.k, p);
    case Family::kRing: return ring_A<T>(spec.n, p);
    case Family::kComplete:
      check_nodes(spec.n, 2, "complete");
      return complete_A<T>(p);
    case Family::kCustom: break;
  }
  return std::nullopt;
}

template <typename T>
std::optional<T> scenario_B_impl(const TopologySpec& spec, std::size_t m_links, const T& p) {
  switch (spec.family) {
    case Family::kChain: return chain_B<T>(spec.n, m_links, p);
    case Family::kStar: return star_B<T>(spec.n, m_links, p);
    case Family::kFlower: return flower_B<T>(spec.n, spec.k, m_links, p);
    default: break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> scenario_A(const TopologySpec& spec, double p) { return scenario_A_impl(spec, p); }
std::optional<Rational> scenario_A_exact(const TopologySpec& spec, const Rational& p) {
  return scenario_A_impl(spec, p);
}
std::optional<double> scenario_B(const TopologySpec& spec, std::size_t m_links, double p) {
  return scenario_B_impl(spec, m_links, p);
}
std::optional<Rational> scenario_B_exact(const TopologySpec& spec, std::size_t m_links, const Rational& p) {
  return scenario_B_impl(spec, m_links, p);
}

#define QNETFID_INSTANTIATE(T)                                               \
  template T binomial<T>(long, long);                                        \
  template T path_term<T>(long, const T&);                                   \
  template T star_A<T>(std::size_t, const T&);                               \
  template T chain_A<T>(std::size_t, const T&);                              \
  template T flower_A<T>(std::size_t, std::size_t, const T&);                \
  template T ring_A<T>(std::size_t, const T&);                               \
  template T complete_A<T>(const T&);                                        \
  template T star_B<T>(std::size_t, std::size_t, const T&);                  \
  template T chain_B<T>(std::size_t, std::size_t, const T&);                 \
  template T flower_B<T>(std::size_t, std::size_t, std::size_t, const T&);

QNETFID_INSTANTIATE(double)
QNETFID_INSTANTIATE(Rational)

#undef QNETFID_INSTANTIATE

}  // namespace analytic
}  // namespace qnetfid

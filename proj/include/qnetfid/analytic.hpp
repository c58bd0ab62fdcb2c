#pragma once

// Closed-form network averages for the canonical topologies. Every
// evaluator is a template over the number type and is instantiated for
// `double` and for the exact `Rational`.

#include <cstddef>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qnetfid/network.hpp"

namespace qnetfid {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses a decimal literal ("0.5", "1", "3e-1", "1/3") exactly.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

namespace analytic {

/// C(n, k) as T; zero when k < 0, k > n or n < 0.
template <typename T>
T binomial(long n, long k);

/// Fidelity of a route with `n` non-ME links of weight p: (1 + p^n)/2.
template <typename T>
T path_term(long n, const T& p);

// Scenario A: every link has weight p.
template <typename T>
T star_A(std::size_t n, const T& p);
template <typename T>
T chain_A(std::size_t n, const T& p);
/// k-th intermediate flower, 0 <= k <= N-3.
template <typename T>
T flower_A(std::size_t n, std::size_t k, const T& p);
/// Averages over maximal paths: both halves between opposite nodes of an
/// even ring are counted (Averaging::kPerMaxPath).
template <typename T>
T ring_A(std::size_t n, const T& p);
template <typename T>
T complete_A(const T& p);

// Scenario B: M links are maximally entangled, the rest have weight p;
// values are averaged over all C(L, M) placements.
template <typename T>
T star_B(std::size_t n, std::size_t m_links, const T& p);
template <typename T>
T chain_B(std::size_t n, std::size_t m_links, const T& p);
template <typename T>
T flower_B(std::size_t n, std::size_t k, std::size_t m_links, const T& p);

/// E[max((1+p1)/2, (1+p2 p3)/2)] over i.i.d. uniform weights: 7/9.
Rational triangle_C_expected();
/// The same quantity with the maximum taken after averaging: 3/4.
Rational triangle_C_average_then_max();

/// Scenario A closed form for a canonical spec, if one exists (custom
/// topologies have none).
std::optional<double> scenario_A(const TopologySpec& spec, double p);
std::optional<Rational> scenario_A_exact(const TopologySpec& spec, const Rational& p);
/// Scenario B closed form (chain, star, flower only).
std::optional<double> scenario_B(const TopologySpec& spec, std::size_t m_links, double p);
std::optional<Rational> scenario_B_exact(const TopologySpec& spec, std::size_t m_links, const Rational& p);

}  // namespace analytic
}  // namespace qnetfid

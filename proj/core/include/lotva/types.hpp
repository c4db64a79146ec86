#pragma once

#include <cstddef>
#include <cstdint>

#include <boost/rational.hpp>

namespace lotva {

using VertexId = std::size_t;
using EdgeId = std::size_t;

enum class Sign : std::int8_t { minus = -1, plus = 1 };

constexpr Sign operator-(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }
constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr char sign_char(Sign s) noexcept { return s == Sign::plus ? '+' : '-'; }

// Exact weights and curvatures.
using Rational = boost::rational<std::int64_t>;

}  // namespace lotva

// Boost 1.74 predates C++20 rewritten comparisons: `r == 0` resolves to the
// reversed mixed-type template, which calls itself forever. Exact non-template
// overloads win overload resolution and break the cycle.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == rational<std::int64_t>(b); }
inline bool operator==(const rational<std::int64_t>& a, long b) { return a == rational<std::int64_t>(b); }
inline bool operator==(const rational<std::int64_t>& a, long long b) { return a == rational<std::int64_t>(b); }
}  // namespace boost

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace ncschur {

/// Dense element index. Index 0 is always the identity.
using Element = std::uint32_t;

/// Color index in {0, ..., r}.
using Color = std::uint32_t;

/// Exact rational used for every density and threshold comparison.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}

inline BigInt denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Smallest integer >= q.
inline BigInt ceil(const Rational& q) {
  BigInt n = numerator(q);
  BigInt d = denominator(q);
  BigInt quot = n / d;
  if (quot * d < n) ++quot;
  return quot;
}

/// Raised on malformed input (group specs, table files, coloring files, reports).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive search would exceed its work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a group would exceed the configured order cap.
class OrderCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FailureKind {
  NotFound,
  StageFailed,
  HypothesisViolated,
  HeightInsufficient,
  PwsFailed,
};

inline const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::NotFound: return "NotFound";
    case FailureKind::StageFailed: return "StageFailed";
    case FailureKind::HypothesisViolated: return "HypothesisViolated";
    case FailureKind::HeightInsufficient: return "HeightInsufficient";
    case FailureKind::PwsFailed: return "PwsFailed";
  }
  return "Unknown";
}

/// Structured diagnostic for an expected, first-class failure of a finite
/// construction (the constructions only have guaranteed success at infinite scale).
struct Failure {
  FailureKind kind = FailureKind::NotFound;
  std::string stage;
  std::string reason;

  std::string describe() const {
    return std::string(to_string(kind)) + " at " + stage + ": " + reason;
  }
};

/// Either a value or a Failure.
template <typename T>
class Outcome {
 public:
  Outcome(T value) : data_(std::move(value)) {}
  Outcome(Failure failure) : data_(std::move(failure)) {}

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::logic_error("Outcome::value on failure: " + failure().describe());
    return std::get<T>(data_);
  }
  T& value() & {
    if (!ok()) throw std::logic_error("Outcome::value on failure: " + failure().describe());
    return std::get<T>(data_);
  }
  T&& value() && {
    if (!ok()) throw std::logic_error("Outcome::value on failure: " + failure().describe());
    return std::get<T>(std::move(data_));
  }
  const Failure& failure() const { return std::get<Failure>(data_); }

  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, Failure> data_;
};

enum class Side { Left, Right };
enum class Direction { Forward, Backward };

inline const char* to_string(Side side) { return side == Side::Left ? "left" : "right"; }
inline const char* to_string(Direction d) {
  return d == Direction::Forward ? "forward" : "backward";
}

}  // namespace ncschur

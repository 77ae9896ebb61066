#pragma once

#include <cmath>
#include <string>

#include "composite/errors.hpp"

namespace composite {

/// A probability or Hamming distortion, validated to lie in [0, 1].
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            detail::domain_fail("Probability", "value " + std::to_string(v) + " outside [0,1]");
        }
    }
    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

namespace detail {

template <class Tag>
class NonNegativeRate {
public:
    constexpr NonNegativeRate() = default;
    explicit NonNegativeRate(double v) : value_(v) {
        if (!(v >= 0.0) || std::isinf(v)) {
            detail::domain_fail(Tag::name, "rate " + std::to_string(v) + " must be finite and >= 0");
        }
    }
    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

struct BitsTag {
    static constexpr const char* name = "BitsRate";
};
struct NatsTag {
    static constexpr const char* name = "NatsRate";
};

}  // namespace detail

/// Rate in bits per channel use (binary examples).
using BitsRate = detail::NonNegativeRate<detail::BitsTag>;
/// Rate in nats per channel use (Gaussian example).
using NatsRate = detail::NonNegativeRate<detail::NatsTag>;

inline BitsRate to_bits(NatsRate r) { return BitsRate(r.value() / std::log(2.0)); }
inline NatsRate to_nats(BitsRate r) { return NatsRate(r.value() * std::log(2.0)); }

}  // namespace composite

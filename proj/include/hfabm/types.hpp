#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hfabm {

using OrderId = std::uint64_t;
using Session = std::int64_t;
using Volume = std::int64_t;
/// Limit prices are integer multiples of the tick size.
using Ticks = std::int64_t;

/// Every stochastic draw in a run comes from one of these, consumed in a fixed order.
using Rng = std::mt19937_64;

enum class Side : std::uint8_t { Buy, Sell };
enum class TraderClass : std::uint8_t { LF, HF };

constexpr Side opposite(Side s) noexcept { return s == Side::Buy ? Side::Sell : Side::Buy; }

constexpr std::string_view to_string(Side s) noexcept { return s == Side::Buy ? "Buy" : "Sell"; }
constexpr std::string_view to_string(TraderClass c) noexcept { return c == TraderClass::LF ? "LF" : "HF"; }

}  // namespace hfabm

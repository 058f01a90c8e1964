#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace runway {

/// Internal time unit. Inputs and outputs are seconds; everything that orders
/// events or checks separation works on integer milliseconds.
using Millis = std::int64_t;

inline Millis from_seconds(double s) { return static_cast<Millis>(std::llround(s * 1000.0)); }
inline double to_seconds(Millis ms) { return static_cast<double>(ms) / 1000.0; }

enum class WeightClass : std::uint8_t { Heavy = 0, B757 = 1, Large = 2, Small = 3 };
enum class OperationType : std::uint8_t { Arrival = 0, Departure = 1 };

inline constexpr std::array<WeightClass, 4> kWeightClasses{WeightClass::Heavy, WeightClass::B757,
                                                           WeightClass::Large, WeightClass::Small};
inline constexpr std::array<OperationType, 2> kOperationTypes{OperationType::Arrival,
                                                              OperationType::Departure};

constexpr int index_of(WeightClass c) { return static_cast<int>(c); }
constexpr int index_of(OperationType o) { return static_cast<int>(o); }

std::string_view to_string(WeightClass c);
std::string_view to_string(OperationType o);
std::optional<WeightClass> parse_weight_class(std::string_view s);
std::optional<OperationType> parse_operation_type(std::string_view s);

}  // namespace runway

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gtdmine {

/// Attack responsibility, the evaluation class.
enum class ClassLabel : std::uint8_t { Claimed = 0, NotClaimed = 1, Anonymous = 2 };

inline constexpr std::size_t kClassCount = 3;
inline constexpr std::array<ClassLabel, kClassCount> kAllLabels = {
    ClassLabel::Claimed, ClassLabel::NotClaimed, ClassLabel::Anonymous};

using ClassCounts = std::array<std::size_t, kClassCount>;

constexpr std::size_t index_of(ClassLabel label) { return static_cast<std::size_t>(label); }
constexpr ClassLabel label_at(std::size_t index) { return static_cast<ClassLabel>(index); }

std::string_view label_name(ClassLabel label);
/// Accepts the canonical names only ("Claimed", "NotClaimed", "Anonymous").
std::optional<ClassLabel> parse_label(std::string_view name);

}  // namespace gtdmine

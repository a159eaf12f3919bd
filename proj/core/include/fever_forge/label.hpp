#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace fever_forge {

enum class Label { kSupported, kRefuted, kNotEnoughInfo };

inline constexpr std::array<Label, 3> kAllLabels = {
    Label::kSupported, Label::kRefuted, Label::kNotEnoughInfo};

// Accepts both spellings in circulation: "SUPPORTS"/"SUPPORTED",
// "REFUTES"/"REFUTED", "NOT ENOUGH INFO"/"NOT_ENOUGH_INFO".
std::optional<Label> try_parse_label(std::string_view text);

// Throws Error for anything outside the closed set.
Label parse_label(std::string_view text);

// Internal spelling: SUPPORTED, REFUTED, NOT_ENOUGH_INFO.
std::string_view label_name(Label label);

// Spelling used in dataset files (the FEVER release convention).
std::string_view label_file_name(Label label);

}  // namespace fever_forge

#include "fever_forge/label.hpp"

#include "fever_forge/error.hpp"

namespace fever_forge {

std::optional<Label> try_parse_label(std::string_view text) {
  if (text == "SUPPORTS" || text == "SUPPORTED") return Label::kSupported;
  if (text == "REFUTES" || text == "REFUTED") return Label::kRefuted;
  if (text == "NOT ENOUGH INFO" || text == "NOT_ENOUGH_INFO") {
    return Label::kNotEnoughInfo;
  }
  return std::nullopt;
}

Label parse_label(std::string_view text) {
  if (auto label = try_parse_label(text)) return *label;
  throw Error("unknown label \"" + std::string(text) + "\"");
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kSupported: return "SUPPORTED";
    case Label::kRefuted: return "REFUTED";
    case Label::kNotEnoughInfo: return "NOT_ENOUGH_INFO";
  }
  return "?";
}

std::string_view label_file_name(Label label) {
  switch (label) {
    case Label::kSupported: return "SUPPORTS";
    case Label::kRefuted: return "REFUTES";
    case Label::kNotEnoughInfo: return "NOT ENOUGH INFO";
  }
  return "?";
}

}  // namespace fever_forge

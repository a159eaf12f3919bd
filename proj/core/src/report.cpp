#include "fever_forge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fever_forge/error.hpp"

namespace fever_forge {

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  const double nudge = std::abs(scaled) * 1e-9;
  const double rounded = scaled >= 0 ? std::floor(scaled + 0.5 + nudge)
                                     : -std::floor(-scaled + 0.5 + nudge);
  return rounded / scale;
}

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals,
                round_half_up(value, decimals));
  std::string out(buffer);
  if (out == "-0.00" || out == "-0.0" || out == "-0") out.erase(0, 1);
  return out;
}

std::string format_percent(double fraction) {
  return format_fixed(fraction * 100.0, 2);
}

std::string format_delta(double fraction) {
  std::string text = format_fixed(fraction * 100.0, 2);
  if (text[0] != '-' && round_half_up(fraction * 100.0, 2) != 0.0) {
    text.insert(0, "+");
  }
  return text;
}

TextTable::TextTable(std::vector<std::string> headers, std::vector<Align> align)
    : headers_(std::move(headers)), align_(std::move(align)) {
  align_.resize(headers_.size(), Align::kLeft);
}

void TextTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != headers_.size()) {
    throw Error("table row has " + std::to_string(cells.size()) +
                " cells, expected " + std::to_string(headers_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string TextTable::render() const {
  std::vector<std::size_t> width(headers_.size());
  for (std::size_t c = 0; c < headers_.size(); ++c) {
    width[c] = headers_[c].size();
    for (const auto& row : rows_) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += "  ";
      const std::string pad(width[c] - cells[c].size(), ' ');
      out += align_[c] == Align::kRight ? pad + cells[c] : cells[c] + pad;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + '\n';
  };
  std::string out = line(headers_);
  std::size_t total = 0;
  for (auto w : width) total += w;
  total += 2 * (width.empty() ? 0 : width.size() - 1);
  out += std::string(total, '-') + '\n';
  for (const auto& row : rows_) out += line(row);
  return out;
}

}  // namespace fever_forge

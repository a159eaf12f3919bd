#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fever_forge {

// Rounds half away from zero at `decimals` places. A 1e-9 relative nudge
// absorbs binary representation error so 0.5632 * 100 prints as 56.32.
double round_half_up(double value, int decimals);

// fraction 0.56319 -> "56.32"
std::string format_percent(double fraction);

// Signed percent-point delta: -0.1988 -> "-19.88", 0.0289 -> "+2.89".
std::string format_delta(double fraction);

std::string format_fixed(double value, int decimals);

// Plain-text table with a header rule, columns padded to their widest cell.
class TextTable {
 public:
  enum class Align { kLeft, kRight };

  explicit TextTable(std::vector<std::string> headers,
                     std::vector<Align> align = {});

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string render() const;

 private:
  std::vector<std::string> headers_;
  std::vector<Align> align_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fever_forge

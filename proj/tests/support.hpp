#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "fever_forge/corpus.hpp"
#include "fever_forge/rules.hpp"

namespace fever_forge::testing {

inline std::filesystem::path test_data(const std::string& name) {
  return std::filesystem::path(FEVER_FORGE_TEST_DATA) / name;
}

inline std::filesystem::path shipped_data(const std::string& name) {
  return std::filesystem::path(FEVER_FORGE_SHIPPED_DATA) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fever_forge_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline EvidenceSentenceId sid(const std::string& page, int line) {
  return EvidenceSentenceId{page, line};
}

inline Instance make_instance(const std::string& id, Label label,
                              std::vector<EvidenceCombination> evidence = {},
                              const std::string& claim = "A claim.") {
  return Instance{id, claim, label, std::move(evidence)};
}

inline LabeledPrediction make_lp(Label gold_label,
                                 std::vector<EvidenceCombination> gold_evidence,
                                 Label predicted,
                                 std::vector<EvidenceSentenceId> predicted_evidence,
                                 const std::string& id = "x") {
  Instance gold = make_instance(id, gold_label, std::move(gold_evidence));
  return LabeledPrediction{gold, Prediction{id, predicted, std::move(predicted_evidence)}};
}

inline GeneratedInstance make_generated(const std::string& id, Label label,
                                        TransformationClass cls,
                                        const std::string& rule_id = "r1") {
  GeneratedInstance g;
  g.instance = make_instance(id, label,
                             label == Label::kNotEnoughInfo
                                 ? std::vector<EvidenceCombination>{}
                                 : std::vector<EvidenceCombination>{{{sid("P", 0)}}},
                             "Claim " + id + ".");
  g.source_id = id;
  g.rule_id = rule_id;
  g.cls = cls;
  g.source_claim = "Source " + id + ".";
  return g;
}

}  // namespace fever_forge::testing

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bvbfv {

/// One named check inside a run report.
struct CheckResult {
  std::string name;
  bool pass{false};
  int residual_terms{0};
  std::string rendering;  // residual rendering or a short note
};

/// Machine-readable outcome of a CLI command. Deterministic for identical
/// inputs; timing is reported separately so reports stay byte-comparable.
struct RunReport {
  static constexpr int kSchemaVersion = 1;

  std::string command;
  std::string input_digest;
  std::vector<CheckResult> checks;
  std::uint64_t seed{0};
  std::int64_t elapsed_ms{0};

  bool all_pass() const;
  std::string to_json() const;
  std::string to_text() const;
};

/// FNV-1a digest of the input bytes, rendered as 16 hex digits.
std::string content_digest(const std::string& bytes);

}  // namespace bvbfv

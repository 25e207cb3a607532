#include "bvbfv/report.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace bvbfv {

bool RunReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["seed"] = seed;
  j["elapsed_ms"] = elapsed_ms;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["status"] = c.pass ? "pass" : "fail";
    e["residual_terms"] = c.residual_terms;
    e["rendering"] = c.rendering;
    j["checks"].push_back(e);
  }
  return j.dump(2);
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  if (!input_digest.empty()) os << "input:   " << input_digest << "\n";
  for (const auto& c : checks) {
    os << (c.pass ? "  [pass] " : "  [FAIL] ") << c.name;
    if (c.residual_terms > 0) os << "  (" << c.residual_terms << " residual terms)";
    if (!c.rendering.empty() && !c.pass) os << "\n         " << c.rendering;
    os << "\n";
  }
  os << (all_pass() ? "result: pass" : "result: FAIL") << "\n";
  return os.str();
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  for (int i = 15; i >= 0; --i) {
    os << "0123456789abcdef"[(h >> (i * 4)) & 0xF];
  }
  return os.str();
}

}  // namespace bvbfv

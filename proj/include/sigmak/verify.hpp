#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sigmak {

enum class Status { Pass, Fail, Unattainable };
const char* status_name(Status s);

struct Check {
  std::string name;
  bool ok = false;
  bool unattainable = false;  // failed for a reason recorded as out of reach
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  Status status = Status::Fail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when the criterion has no runtime bound
  std::vector<Check> checks;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::vector<int> only;  // empty: all criteria
  std::function<void(const std::string&)> log;  // progress lines
};

constexpr int kCriterionCount = 9;
const char* criterion_title(int id);
CriterionResult run_criterion(int id, const VerifyOptions& opt = {});
std::vector<CriterionResult> run_criteria(const VerifyOptions& opt = {});

}  // namespace sigmak

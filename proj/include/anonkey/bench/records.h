// Copyright 2026 The anonkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANONKEY_BENCH_RECORDS_H_
#define ANONKEY_BENCH_RECORDS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "json.hpp"

namespace anonkey::bench {

// One measurement. Everything except `timings_ms` is reproducible from the
// seed and parameters.
struct BenchRecord {
  std::string scenario;
  uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::map<std::string, double> timings_ms;
  std::optional<uint64_t> constraints;

  nlohmann::json ToJson() const;
};

// Caveat emitted at the top of every report.
std::string ReportNote();

void WriteJsonl(std::ostream& out, std::span<const BenchRecord> records);
// Columns: scenario, seed, the union of parameter keys, constraints, then
// the union of timing keys.
void WriteCsv(std::ostream& out, std::span<const BenchRecord> records);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

// Least squares y = slope * x + intercept. Requires >= 2 distinct x.
LinearFit FitLine(std::span<const double> x, std::span<const double> y);

double Median(std::vector<double> v);

}  // namespace anonkey::bench

#endif  // ANONKEY_BENCH_RECORDS_H_

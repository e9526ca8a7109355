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

#include "anonkey/bench/records.h"

#include <algorithm>
#include <set>

#include "anonkey/core/errors.h"

namespace anonkey::bench {

using nlohmann::json;

json BenchRecord::ToJson() const {
  json j = {{"scenario", scenario}, {"seed", seed}, {"params", params}};
  j["timings_ms"] = timings_ms;
  if (constraints) j["constraints"] = *constraints;
  return j;
}

std::string ReportNote() {
  return "absolute times depend on hardware, hash profile and proving "
         "backend; compare shapes (linearity, constancy, shares), not "
         "milliseconds";
}

void WriteJsonl(std::ostream& out, std::span<const BenchRecord> records) {
  out << json{{"scenario", "meta"}, {"note", ReportNote()}}.dump() << "\n";
  for (const auto& r : records) out << r.ToJson().dump() << "\n";
}

namespace {

std::string CsvCell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void WriteCsv(std::ostream& out, std::span<const BenchRecord> records) {
  std::set<std::string> params, timings;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.params.items()) params.insert(k);
    for (const auto& [k, v] : r.timings_ms) timings.insert(k);
  }
  out << "# " << ReportNote() << "\n";
  out << "scenario,seed";
  for (const auto& p : params) out << "," << p;
  out << ",constraints";
  for (const auto& t : timings) out << "," << t << "_ms";
  out << "\n";
  for (const auto& r : records) {
    out << CsvCell(r.scenario) << "," << r.seed;
    for (const auto& p : params) {
      out << "," << (r.params.contains(p) ? CsvCell(r.params[p]) : "");
    }
    out << "," << (r.constraints ? std::to_string(*r.constraints) : "");
    for (const auto& t : timings) {
      auto it = r.timings_ms.find(t);
      out << ",";
      if (it != r.timings_ms.end()) out << it->second;
    }
    out << "\n";
  }
}

LinearFit FitLine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("linear fit needs two or more points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw PreconditionError("linear fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
  }
  // A flat series fit exactly is a perfect fit.
  f.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

}  // namespace anonkey::bench

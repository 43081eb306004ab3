/*
 * Copyright 2026 The RTABE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rtabe/evaluation.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "rtabe/params.h"
#include "rtabe/prng.h"
#include "testing/status_testing.h"

namespace rtabe {
namespace {

// Sort, then take the ceil(fraction * n)-th smallest.
double NearestRankOracle(std::vector<double> values, double fraction) {
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(fraction * values.size());
  return values[static_cast<size_t>(std::max(rank, 1.0)) - 1];
}

TEST(PercentileTest, SmallCases) {
  EXPECT_EQ(Percentile({5.0}, 0.5), 5.0);
  EXPECT_EQ(Percentile({4.0, 1.0, 3.0, 2.0}, 0.5), 2.0);
  EXPECT_EQ(Percentile({4.0, 1.0, 3.0, 2.0}, 1.0), 4.0);
}

TEST(PercentileTest, MatchesNearestRankOracle) {
  Prng prng(301);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(1 + prng.Uniform(50));
    for (double& v : values) v = static_cast<double>(prng.Uniform(1000));
    for (double f : {0.01, 0.25, 0.5, 0.95, 1.0}) {
      EXPECT_EQ(Percentile(values, f), NearestRankOracle(values, f));
    }
  }
}

TEST(MeasureFailureRatesTest, ExactNoiseOffNeverFails) {
  ASSERT_OK_AND_ASSIGN(auto rows, MeasureFailureRates(Params::Toy(), 50, 9));
  ASSERT_EQ(rows.size(), 4u);
  for (const FailureRateRow& row : rows) {
    EXPECT_EQ(row.trials, 50u);
    EXPECT_LE(row.failures, row.trials);
    if (row.mode.inverse == InverseConvention::kExactInverse &&
        row.mode.noise == NoiseMode::kNoiseOff) {
      EXPECT_EQ(row.failures, 0u);
    }
  }
  const std::string table = FormatFailureRates(rows);
  EXPECT_NE(table.find("ExactInverse+NoiseOff"), std::string::npos) << table;
}

TEST(MeasureFailureRatesTest, DeterministicUnderSeed) {
  ASSERT_OK_AND_ASSIGN(auto a, MeasureFailureRates(Params::Toy(), 20, 4));
  ASSERT_OK_AND_ASSIGN(auto b, MeasureFailureRates(Params::Toy(), 20, 4));
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].failures, b[i].failures);
  }
}

TEST(RunBenchmarkTest, ReportsEveryAlgorithm) {
  ASSERT_OK_AND_ASSIGN(auto stats, RunBenchmark(Params::Toy(), 5, 1));
  ASSERT_EQ(stats.size(), 4u);
  for (const LatencyStats& s : stats) {
    EXPECT_EQ(s.samples, 5u);
    EXPECT_GE(s.p95_us, s.median_us);
    EXPECT_GE(s.median_us, 0.0);
  }
  EXPECT_EQ(stats[0].algorithm, "setup");
  EXPECT_FALSE(FormatLatencies(stats).empty());
}

}  // namespace
}  // namespace rtabe

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rtabe/codec.h"
#include "rtabe/evaluation.h"
#include "rtabe/game.h"
#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"
#include "rtabe/sampler.h"
#include "rtabe/scheme.h"
#include "rtabe/sharing.h"
#include "testing/noise_check.h"
#include "testing/oracles.h"
#include "testing/random_objects.h"
#include "testing/scripted_adversary.h"

namespace rtabe {
namespace {

using namespace ::rtabe::testing;  // NOLINT

struct Verdict {
  bool pass = false;
  std::string detail;
};

#define ACC_ASSIGN(lhs, expr)                                         \
  auto lhs##_or = (expr);                                             \
  if (!lhs##_or.ok()) {                                               \
    return Verdict{false, std::string(lhs##_or.status().ToString())}; \
  }                                                                   \
  auto lhs = *std::move(lhs##_or)

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// |rate - 1/2| <= 3 * sqrt(1/4 / trials).
bool WithinThreeSigmaOfHalf(size_t hits, size_t trials, double* rate,
                            double* se) {
  *rate = static_cast<double>(hits) / static_cast<double>(trials);
  *se = std::sqrt(0.25 / static_cast<double>(trials));
  return std::abs(*rate - 0.5) <= 3 * *se;
}

// 1. NTT product equals schoolbook and the convolution oracle.
Verdict RingOracleEquivalence() {
  constexpr int kPairs = 10000;
  std::string detail;
  bool pass = true;
  for (const Params& params : {Params::Toy(), Params::Desk()}) {
    ACC_ASSIGN(ctx, RingContext::ForParams(params));
    Prng prng(params.n);
    size_t mismatches = 0;
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < kPairs; ++i) {
      const RingElement a = SampleUniform(ctx, prng);
      const RingElement b = SampleUniform(ctx, prng);
      ACC_ASSIGN(fast, a.Mul(b));
      ACC_ASSIGN(slow, a.MulSchoolbook(b));
      if (!(fast == slow)) ++mismatches;
    }
    const double elapsed = Seconds(start);
    // A further independent check of both against the plain convolution.
    for (int i = 0; i < 200; ++i) {
      const RingElement a = SampleUniform(ctx, prng);
      const RingElement b = SampleUniform(ctx, prng);
      ACC_ASSIGN(fast, a.Mul(b));
      if (fast.coeffs() !=
          NegacyclicProduct(a.coeffs(), b.coeffs(), params.q)) {
        ++mismatches;
      }
    }
    const bool ok = mismatches == 0 && (params.n != 256 || elapsed < 30.0);
    pass &= ok;
    absl::StrAppendFormat(&detail, "n=%d: %d pairs, %d mismatches, %.2fs; ",
                          params.n, kPairs, mismatches, elapsed);
  }
  return {pass, detail};
}

// 2. Share then Combine on a minimal satisfying subset returns the secret.
Verdict ShareCombineExactness() {
  constexpr int kTrials = 1000;
  ACC_ASSIGN(ctx, RingContext::ForParams(Params::Toy()));
  Prng prng(2);
  const TreeShape shape{.max_leaves = 16, .max_depth = 4, .n_attrs = 8};
  size_t failures = 0, done = 0;
  while (done < kTrials) {
    const AccessTree tree = RandomTree(prng, shape);
    const auto attrs = LeafAttributes(tree);
    const AttributeSet held(
        SubsetFromMask(attrs, prng.Uniform(uint64_t{1} << attrs.size())));
    const auto subset = SelectSatisfyingSubset(tree, held);
    if (!subset) continue;
    ++done;
    const RingElement secret = SampleUniform(ctx, prng);
    ACC_ASSIGN(shares, Share(tree, secret, prng));
    ShareMap restricted;
    for (NodeId leaf : *subset) restricted.emplace(leaf, shares.at(leaf));
    auto got = Combine(tree, restricted);
    if (!got.ok() || !(*got == secret)) ++failures;
  }
  return {failures == 0,
          absl::StrFormat("%d trees, %d failures", kTrials, failures)};
}

// 3. Evaluate agrees with the recursive oracle on every attribute subset.
Verdict PolicyEvaluationOracle() {
  Prng prng(3);
  const TreeShape shape{.max_leaves = 10, .max_depth = 4, .n_attrs = 10};
  size_t checks = 0, mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const AccessTree tree = RandomTree(prng, shape);
    const auto attrs = LeafAttributes(tree);
    for (uint64_t mask = 0; mask < (uint64_t{1} << attrs.size()); ++mask) {
      const auto subset = SubsetFromMask(attrs, mask);
      ++checks;
      if (Evaluate(tree, AttributeSet(subset)) !=
          SatisfiesOracle(tree, subset)) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0,
          absl::StrFormat("1000 trees, %d subsets, %d mismatches", checks,
                          mismatches)};
}

// 4. Exact-mode round trips, each paired with a non-satisfying key.
Verdict ExactModeCorrectness() {
  constexpr int kTrials = 1000;
  // Trees use attributes 1..6; attribute 7 never appears in a tree.
  const Params params = Params::Toy();
  Prng prng(4);
  ACC_ASSIGN(setup, Setup(params, 7, prng));
  KeyRegistry registry;
  const TreeShape shape{.max_leaves = 16, .max_depth = 4, .n_attrs = 6};
  size_t wrong = 0, not_refused = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const AccessTree tree = RandomTree(prng, shape);
    const auto attrs = LeafAttributes(tree);
    const RingElement m = RandomMessage(params, prng);
    ACC_ASSIGN(ct, Encrypt(setup.pk, m, tree, prng));

    // Positive key: the attributes of a minimal satisfying leaf set.
    const AttributeSet all(std::set<AttributeId>(attrs.begin(), attrs.end()));
    AttributeSet positive;
    const auto minimal = SelectSatisfyingSubset(tree, all);
    for (NodeId leaf : *minimal) {
      positive.Insert(tree.node(leaf).attribute);
    }
    ACC_ASSIGN(good, KeyGen(setup.msk, absl::StrCat("pos", trial), positive,
                            registry, prng));
    auto out = Decrypt(ct, good, setup.pk);
    if (!out.ok() || !(*out == m)) ++wrong;

    // Negative key: drop attributes in random order until unsatisfied.
    std::set<AttributeId> negative(attrs.begin(), attrs.end());
    while (Evaluate(tree, AttributeSet(negative))) {
      auto it = negative.begin();
      std::advance(it, prng.Uniform(negative.size()));
      negative.erase(it);
    }
    negative.insert(7);
    if (SatisfiesOracle(tree, negative))
      return {false, "negative key satisfies"};
    ACC_ASSIGN(bad, KeyGen(setup.msk, absl::StrCat("neg", trial),
                           AttributeSet(negative), registry, prng));
    if (!IsNotAuthorized(Decrypt(ct, bad, setup.pk).status())) ++not_refused;
  }
  return {wrong == 0 && not_refused == 0,
          absl::StrFormat("%d round trips, %d wrong; %d negative keys, %d not "
                          "refused",
                          kTrials, wrong, kTrials, not_refused)};
}

// 5. center(C - r PK_0 - M) is p-divisible unless p e''' wrapped past q/2.
Verdict NoiseStructureCheck() {
  const SchemeMode on{.inverse = InverseConvention::kExactInverse,
                      .noise = NoiseMode::kNoiseOn};
  Params wide = Params::Toy(on);
  wide.p = 1021;
  std::string detail;
  bool pass = true;
  uint64_t seed = 5;
  for (const Params& params : {Params::Toy(on), wide}) {
    Prng prng(seed++);
    ACC_ASSIGN(setup, Setup(params, 3, prng));
    ACC_ASSIGN(tree, ParsePolicy("and(att1, or(att2, att3))"));
    NoiseStructure total;
    for (int trial = 0; trial < 1000; ++trial) {
      const RingElement m = RandomMessage(params, prng);
      EncryptionTrace trace;
      ACC_ASSIGN(ct, Encrypt(setup.pk, m, tree, prng, &trace));
      ACC_ASSIGN(r, CheckBodyNoise(ct, setup.pk, m, trace));
      total.coefficients += r.coefficients;
      total.wrapped += r.wrapped;
      total.not_divisible += r.not_divisible;
      total.unexplained += r.unexplained;
      total.recomputation_mismatches += r.recomputation_mismatches;
    }
    pass &= total.unexplained == 0 && total.recomputation_mismatches == 0;
    absl::StrAppendFormat(
        &detail,
        "p=%d: %d coeffs, %d wrapped, %d not divisible, %d unexplained, %d "
        "recomputation mismatches; ",
        params.p, total.coefficients, total.wrapped, total.not_divisible,
        total.unexplained, total.recomputation_mismatches);
  }
  return {pass, detail};
}

unsigned Workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// 6. Coin-flip win rate and the challenge abort rule.
Verdict GameBaseline() {
  constexpr size_t kGames = 10000;
  ACC_ASSIGN(records,
             RunCoinFlipTrials(Params::Toy(), 2, kGames, 6, Workers()));
  const TrialSummary s = Summarize(records);
  double rate, se;
  const bool decided_all = s.wins + s.losses == kGames;
  const bool band = WithinThreeSigmaOfHalf(s.wins, kGames, &rate, &se);

  // Satisfying corpus: one identity receives every leaf attribute in Phase 1,
  // spread among decoy identities.
  Prng prng(66);
  const TreeShape shape{.max_leaves = 10, .max_depth = 4, .n_attrs = 6};
  size_t corpus = 0, aborted = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const AccessTree tree = RandomTree(prng, shape);
    std::vector<KeyQuery> phase1;
    for (AttributeId a : LeafAttributes(tree)) {
      phase1.push_back({absl::StrCat("decoy", prng.Uniform(4)), a});
      phase1.push_back({"holder", a});
    }
    ScriptedAdversary adversary(phase1, {}, tree);
    Prng game_prng(10000 + trial);
    ACC_ASSIGN(t, RunGame(adversary, Params::Toy(), 6, game_prng));
    ++corpus;
    if (t.outcome == GameOutcome::kAbort) ++aborted;
  }
  return {decided_all && band && aborted == corpus,
          absl::StrFormat("win rate %.4f over %d games (3 SE band [%.4f, "
                          "%.4f]); aborts %d/%d on satisfying corpus",
                          rate, kGames, 0.5 - 3 * se, 0.5 + 3 * se, aborted,
                          corpus)};
}

// 7. Reduction accuracy against each ground truth, and view shapes.
Verdict ReductionHarness() {
  constexpr size_t kTrials = 10000;
  constexpr size_t kSamples = 16;
  std::string detail;
  bool pass = true;
  for (GroundTruth truth : {GroundTruth::kLwe, GroundTruth::kUniform}) {
    const uint64_t base = truth == GroundTruth::kLwe ? 7 : 77;
    std::vector<int> correct(kTrials, 0), shape_ok(kTrials, 0);
    std::vector<std::string> errors(kTrials);
    std::atomic<size_t> next{0};
    auto work = [&] {
      for (size_t t; (t = next.fetch_add(1)) < kTrials;) {
        const Prng root(base + t);
        Prng game_prng = root.Fork(0), reduction_prng = root.Fork(1);
        CoinFlipAdversary a1{root.Fork(2)}, a2{root.Fork(2)};
        auto real = RunGame(a1, Params::Toy(), 3, game_prng);
        auto red =
            RunReduction(a2, Params::Toy(), 3, kSamples, truth, reduction_prng);
        if (!real.ok() || !red.ok()) {
          errors[t] =
              !real.ok() ? real.status().ToString() : red.status().ToString();
          continue;
        }
        correct[t] = red->decision == truth;
        shape_ok[t] = CompareViewShapes(real->view, red->game.view).ok();
      }
    };
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < Workers(); ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();
    for (const std::string& e : errors) {
      if (!e.empty()) return {false, e};
    }
    size_t hits = 0, shapes = 0;
    for (size_t t = 0; t < kTrials; ++t) {
      hits += correct[t];
      shapes += shape_ok[t];
    }
    double rate, se;
    const bool band = WithinThreeSigmaOfHalf(hits, kTrials, &rate, &se);
    pass &= band && shapes == kTrials;
    absl::StrAppendFormat(&detail,
                          "%s accuracy %.4f (3 SE %.4f), shapes %d/%d; ",
                          truth == GroundTruth::kLwe ? "LWE" : "Uniform", rate,
                          3 * se, shapes, kTrials);
  }
  return {pass, detail};
}

// 8. decode(encode(x)) == x and re-encoding is byte-identical, per kind.
template <typename T, typename Make, typename Encode, typename Decode>
bool RoundTrips(Make make, Encode encode, Decode decode, Prng& prng,
                size_t* failures) {
  for (int i = 0; i < 1000; ++i) {
    const Params params = RandomParams(prng);
    const T value = make(params, prng);
    const std::vector<uint8_t> bytes = encode(value);
    auto back = decode(std::span<const uint8_t>(bytes));
    if (!back.ok() || !(*back == value) || encode(*back) != bytes) ++*failures;
  }
  return *failures == 0;
}

Verdict CodecRoundTrips() {
  Prng prng(8);
  size_t f[7] = {};
  RoundTrips<Params>([](const Params& p, Prng&) { return p; }, EncodeParams,
                     DecodeParams, prng, &f[0]);
  RoundTrips<PublicKey>(RandomPublicKey, EncodePublicKey, DecodePublicKey, prng,
                        &f[1]);
  RoundTrips<MasterSecretKey>(RandomMasterSecretKey, EncodeMasterSecretKey,
                              DecodeMasterSecretKey, prng, &f[2]);
  RoundTrips<UserSecretKey>(RandomUserSecretKey, EncodeUserSecretKey,
                            DecodeUserSecretKey, prng, &f[3]);
  RoundTrips<Ciphertext>(RandomCiphertext, EncodeCiphertext, DecodeCiphertext,
                         prng, &f[4]);
  RoundTrips<IdentityRecord>(RandomIdentityRecord, EncodeIdentityRecord,
                             DecodeIdentityRecord, prng, &f[5]);
  RoundTrips<CiphertextContainer>(RandomContainer, EncodeContainer,
                                  DecodeContainer, prng, &f[6]);
  size_t total = 0;
  for (size_t x : f) total += x;
  return {total == 0,
          absl::StrFormat("1000 each of params, pk, msk, usk, ciphertext "
                          "(+ identity record, container); failures "
                          "%d/%d/%d/%d/%d (+%d/%d)",
                          f[0], f[1], f[2], f[3], f[4], f[5], f[6])};
}

// 9. Failure rates per mode; the exact noise-free mode never fails.
Verdict NoiseReport() {
  ACC_ASSIGN(rows, MeasureFailureRates(Params::Toy(), 1000, 9));
  std::printf("%s", FormatFailureRates(rows).c_str());
  for (const FailureRateRow& row : rows) {
    if (row.mode.inverse == InverseConvention::kExactInverse &&
        row.mode.noise == NoiseMode::kNoiseOff) {
      return {row.failures == 0,
              absl::StrFormat("ExactInverse+NoiseOff failures %d/%d",
                              row.failures, row.trials)};
    }
  }
  return {false, "exact noise-free row missing"};
}

int Main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria =
      {{"ring oracle equivalence", RingOracleEquivalence},
       {"share/combine exactness", ShareCombineExactness},
       {"policy evaluation oracle", PolicyEvaluationOracle},
       {"exact-mode scheme correctness", ExactModeCorrectness},
       {"noise structure", NoiseStructureCheck},
       {"game baseline", GameBaseline},
       {"reduction harness", ReductionHarness},
       {"codec round trips", CodecRoundTrips},
       {"noise report", NoiseReport}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = criteria[i].second();
    std::string detail = v.detail;
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) {
      detail.pop_back();
    }
    std::printf("%s %zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, detail.c_str(), Seconds(start));
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rtabe

int main() { return rtabe::Main(); }

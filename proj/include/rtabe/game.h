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

// The IND-CPA game for the ABE scheme and the R-LWE distinguisher built from
// an ABE adversary.
//
// Game flow: Setup -> Phase 1 key queries -> Challenge -> Phase 2 key queries
// -> Guess. Each key query names one identity and one attribute; the
// challenger records it in that identity's attribute ledger. The challenge
// aborts if some ledger already satisfies the challenge tree. In Phase 2 a
// query that would make a ledger satisfy the tree is refused and the game
// continues.
//
// Adversaries only ever see what the challenger hands them through the
// Adversary interface: the public key, issued keys, refusals and the
// challenge ciphertext.

#ifndef RTABE_GAME_H_
#define RTABE_GAME_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"
#include "rtabe/scheme.h"

namespace rtabe {

enum class GamePhase { kPhase1, kPhase2 };

struct KeyQuery {
  std::string identity;
  AttributeId attribute = 0;
};

// One attribute key. sk_u is present on the first issuance to an identity.
struct IssuedKey {
  std::string identity;
  AttributeId attribute = 0;
  std::optional<RingElement> sk_u;
  RingElement sk_attr;
};

struct ChallengeRequest {
  AccessTree tree;
  RingElement m0;
  RingElement m1;
};

class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual void OnSetup(const PublicKey& pk) = 0;
  // The next key query of the given phase, or nullopt to end the phase.
  virtual std::optional<KeyQuery> NextQuery(GamePhase phase) = 0;
  // Answer to the preceding query. A Phase 2 refusal arrives as an error.
  virtual void OnKey(const absl::StatusOr<IssuedKey>& key) = 0;
  // Messages must lie in R_p, i.e. have every coefficient below p.
  virtual ChallengeRequest Challenge() = 0;
  virtual void OnChallengeCiphertext(const Ciphertext& ct) = 0;
  // Must return 0 or 1.
  virtual int Guess() = 0;
};

// Per-identity attribute lists. Append-only within a game.
class AttributeLedger {
 public:
  void Add(const std::string& identity, AttributeId attribute);
  // True if some identity's list satisfies the tree.
  bool AnySatisfies(const AccessTree& tree) const;
  // True if adding `attribute` to `identity` would make its list satisfy.
  bool WouldSatisfy(const AccessTree& tree, const std::string& identity,
                    AttributeId attribute) const;
  const std::map<std::string, AttributeSet>& entries() const {
    return entries_;
  }
  size_t total() const { return total_; }

 private:
  std::map<std::string, AttributeSet> entries_;
  size_t total_ = 0;
};

// O_KeyGen: issues single-attribute keys from the master secret through the
// shared identity registry and appends every issuance to the ledger.
class KeyOracle {
 public:
  KeyOracle(const MasterSecretKey& msk, KeyRegistry& registry,
            AttributeLedger& ledger, Prng& prng)
      : msk_(msk), registry_(registry), ledger_(ledger), prng_(prng) {}

  absl::StatusOr<IssuedKey> Issue(const std::string& identity,
                                  AttributeId attribute);

 private:
  const MasterSecretKey& msk_;
  KeyRegistry& registry_;
  AttributeLedger& ledger_;
  Prng& prng_;
};

enum class GameOutcome { kWin, kLose, kAbort, kInvalid };

std::string_view OutcomeName(GameOutcome outcome);

struct QueryRecord {
  std::string identity;
  AttributeId attribute = 0;
  GamePhase phase = GamePhase::kPhase1;
  bool refused = false;
};

// Everything the adversary was handed, for shape comparisons.
struct AdversaryView {
  std::optional<PublicKey> pk;
  std::vector<IssuedKey> keys;
  std::optional<Ciphertext> challenge;
};

struct GameTranscript {
  std::vector<QueryRecord> queries;
  std::optional<AccessTree> challenge_tree;
  int coin = -1;   // b, -1 if never flipped
  int guess = -1;  // b', -1 if never asked
  GameOutcome outcome = GameOutcome::kInvalid;
  std::string invalid_reason;
  // Ledger contents at the time of the challenge.
  std::map<std::string, AttributeSet> ledger_at_challenge;
  AdversaryView view;
  // Randomness of the challenge encryption.
  EncryptionTrace challenge_trace;
};

struct GameOptions {
  size_t max_queries_per_phase = 1024;
  // Test-only side channel receiving the coin b when it is flipped.
  std::function<void(int)> coin_tap;
};

// Plays one game with a freshly set-up challenger.
absl::StatusOr<GameTranscript> RunGame(Adversary& adversary,
                                       const Params& params, uint32_t n_attrs,
                                       Prng& prng,
                                       const GameOptions& options = {});

// Guesses uniformly at random. If n_attrs >= 2 it also makes a few key
// queries around the challenge tree and(att1, att2): identity "alice" gets
// attribute 1 in Phase 1; in Phase 2 "bob" gets attribute 2 and "alice"
// asks for attribute 2, which must be refused.
class CoinFlipAdversary : public Adversary {
 public:
  explicit CoinFlipAdversary(Prng prng) : prng_(std::move(prng)) {}

  void OnSetup(const PublicKey& pk) override;
  std::optional<KeyQuery> NextQuery(GamePhase phase) override;
  void OnKey(const absl::StatusOr<IssuedKey>& key) override;
  ChallengeRequest Challenge() override;
  void OnChallengeCiphertext(const Ciphertext&) override {}
  int Guess() override;

  size_t refusals() const { return refusals_; }

 private:
  Prng prng_;
  std::optional<PublicKey> pk_;
  std::vector<KeyQuery> phase1_;
  std::vector<KeyQuery> phase2_;
  size_t refusals_ = 0;
};

// ---------------------------------------------------------------------------
// R-LWE sample sets and the reduction.

enum class GroundTruth { kLwe, kUniform };

struct SampleSet {
  std::vector<std::pair<RingElement, RingElement>> pairs;
};

// A sample set together with how it was made. Only `samples` is ever passed
// to a distinguisher.
struct LabeledSampleSet {
  SampleSet samples;
  GroundTruth truth = GroundTruth::kUniform;
  std::optional<RingElement> secret;  // s, LWE case only
};

// LWE: b_j = a_j * s + p * e_j for one hidden uniform s, e_j drawn from the
// error distribution of params. Uniform: b_j uniform. a_j always uniform.
absl::StatusOr<LabeledSampleSet> MakeSampleSet(const Params& params, size_t m,
                                               GroundTruth truth, Prng& prng);

struct ReductionTranscript {
  GroundTruth decision = GroundTruth::kUniform;
  GameTranscript game;
  size_t samples_used = 0;
};

// The distinguisher: builds PK from the first samples (PK_0 = b_0,
// PK_i = b_i, samples whose a is not invertible under the active inverse
// convention are skipped), answers each new identity with a fresh sample
// (SK_u = b, u = a, SK_{i,u} = inv(a_i) * a + p * e), encrypts the challenge
// under that PK, and decides LWE iff the adversary guesses the coin. An
// aborted or invalid game yields a uniformly random decision. Returns
// OutOfRange when the m samples run out.
absl::StatusOr<ReductionTranscript> RunReduction(
    Adversary& adversary, const Params& params, uint32_t n_attrs, size_t m,
    GroundTruth truth, Prng& prng, const GameOptions& options = {});

// OK iff both views have the same public key length, the same sequence of
// (identity, attribute, has SK_u) issuances, and challenge ciphertexts with the
// same tree and leaf key set, all in the same ring.
absl::Status CompareViewShapes(const AdversaryView& a, const AdversaryView& b);

// ---------------------------------------------------------------------------
// Trial records: one JSON object per line.

struct TrialRecord {
  uint64_t trial = 0;
  uint64_t seed = 0;
  GameOutcome outcome = GameOutcome::kInvalid;
  size_t queries = 0;
};

std::string FormatTrialRecord(const TrialRecord& record);
absl::StatusOr<TrialRecord> ParseTrialRecord(std::string_view line);

struct TrialSummary {
  size_t trials = 0;
  size_t wins = 0;
  size_t losses = 0;
  size_t aborts = 0;
  size_t invalid = 0;
  // Over decided (win or lose) games.
  double win_rate = 0.0;
  double standard_error = 0.0;
};

TrialSummary Summarize(std::span<const TrialRecord> records);

// Plays `trials` coin-flip games. Trial t uses challenger stream
// Prng(seed).Fork(2t) and adversary stream Prng(seed).Fork(2t + 1), so the
// result does not depend on `workers`.
absl::StatusOr<std::vector<TrialRecord>> RunCoinFlipTrials(
    const Params& params, uint32_t n_attrs, size_t trials, uint64_t seed,
    unsigned workers = 1);

}  // namespace rtabe

#endif  // RTABE_GAME_H_

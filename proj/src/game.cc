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

#include "rtabe/game.h"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "rtabe/sampler.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

// The challenger side of the protocol: where keys and the challenge come
// from. The game rules themselves live in PlayGame.
class Challenger {
 public:
  virtual ~Challenger() = default;
  virtual const PublicKey& public_key() const = 0;
  virtual absl::StatusOr<IssuedKey> Issue(const std::string& identity,
                                          AttributeId attribute) = 0;
  virtual absl::StatusOr<Ciphertext> EncryptChallenge(
      const RingElement& message, const AccessTree& tree,
      EncryptionTrace* trace) = 0;
};

absl::StatusOr<IssuedKey> IssueSingleAttributeKey(const MasterSecretKey& msk,
                                                  KeyRegistry& registry,
                                                  const std::string& identity,
                                                  AttributeId attribute,
                                                  Prng& prng) {
  const bool first_contact = !registry.Lookup(identity).has_value();
  RTABE_ASSIGN_OR_RETURN(
      UserSecretKey usk,
      KeyGen(msk, identity, AttributeSet{attribute}, registry, prng));
  IssuedKey key{.identity = identity,
                .attribute = attribute,
                .sk_u = std::nullopt,
                .sk_attr = usk.per_attr.at(attribute)};
  if (first_contact) key.sk_u = usk.sk_u;
  return key;
}

class SchemeChallenger : public Challenger {
 public:
  static absl::StatusOr<std::unique_ptr<SchemeChallenger>> Create(
      const Params& params, uint32_t n_attrs, Prng& prng) {
    RTABE_ASSIGN_OR_RETURN(SetupResult setup, Setup(params, n_attrs, prng));
    return std::unique_ptr<SchemeChallenger>(
        new SchemeChallenger(std::move(setup), prng));
  }

  const PublicKey& public_key() const override { return setup_.pk; }

  absl::StatusOr<IssuedKey> Issue(const std::string& identity,
                                  AttributeId attribute) override {
    return IssueSingleAttributeKey(setup_.msk, registry_, identity, attribute,
                                   prng_);
  }

  absl::StatusOr<Ciphertext> EncryptChallenge(const RingElement& message,
                                              const AccessTree& tree,
                                              EncryptionTrace* trace) override {
    return Encrypt(setup_.pk, message, tree, prng_, trace);
  }

 private:
  SchemeChallenger(SetupResult setup, Prng& prng)
      : setup_(std::move(setup)), prng_(prng) {}

  SetupResult setup_;
  KeyRegistry registry_;
  Prng& prng_;
};

// Answers the adversary using R-LWE samples in place of the master secret.
class SampleChallenger : public Challenger {
 public:
  static absl::StatusOr<std::unique_ptr<SampleChallenger>> Create(
      const Params& params, uint32_t n_attrs, SampleSet samples, Prng& prng) {
    RTABE_ASSIGN_OR_RETURN(NoiseSampler noise, NoiseSampler::Create(params));
    RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
    std::unique_ptr<SampleChallenger> ch(new SampleChallenger(
        params, std::move(samples), std::move(noise), prng));

    std::optional<RingElement> a_prime;
    for (int attempt = 0; attempt < kMaxInvertibleResamples; ++attempt) {
      RingElement candidate = SampleUniform(context, prng);
      if (InvQ(candidate).ok()) {
        a_prime = std::move(candidate);
        break;
      }
    }
    if (!a_prime.has_value()) {
      return absl::InternalError("No invertible a' found.");
    }

    std::vector<RingElement> pk;
    RTABE_ASSIGN_OR_RETURN(auto first, ch->NextSample());
    pk.push_back(first.second);
    for (uint32_t i = 1; i <= n_attrs; ++i) {
      while (true) {
        RTABE_ASSIGN_OR_RETURN(auto sample, ch->NextSample());
        auto inverse = AttributeInverse(sample.first, params);
        if (inverse.ok()) {
          ch->attr_inverse_.push_back(*std::move(inverse));
          pk.push_back(sample.second);
          break;
        }
        if (!IsNotInvertible(inverse.status())) return inverse.status();
      }
    }
    ch->pk_.emplace(PublicKey{
        .params = params, .a_prime = *std::move(a_prime), .pk = std::move(pk)});
    return ch;
  }

  const PublicKey& public_key() const override { return *pk_; }

  absl::StatusOr<IssuedKey> Issue(const std::string& identity,
                                  AttributeId attribute) override {
    if (attribute == 0 || attribute > attr_inverse_.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Unknown attribute ", attribute, "."));
    }
    IssuedKey key{.identity = identity,
                  .attribute = attribute,
                  .sk_u = std::nullopt,
                  .sk_attr = RingElement::Zero(pk_->a_prime.context())};
    auto it = identities_.find(identity);
    if (it == identities_.end()) {
      RTABE_ASSIGN_OR_RETURN(auto sample, NextSample());
      it = identities_.emplace(identity, std::move(sample)).first;
      key.sk_u = it->second.second;
    }
    const RingElement& u = it->second.first;
    RTABE_ASSIGN_OR_RETURN(RingElement base,
                           attr_inverse_[attribute - 1].Mul(u));
    RTABE_ASSIGN_OR_RETURN(key.sk_attr, base.Add(noise_.SampleScaled(prng_)));
    return key;
  }

  absl::StatusOr<Ciphertext> EncryptChallenge(const RingElement& message,
                                              const AccessTree& tree,
                                              EncryptionTrace* trace) override {
    return Encrypt(*pk_, message, tree, prng_, trace);
  }

  size_t samples_used() const { return cursor_; }

 private:
  SampleChallenger(const Params& params, SampleSet samples, NoiseSampler noise,
                   Prng& prng)
      : params_(params),
        samples_(std::move(samples)),
        noise_(std::move(noise)),
        prng_(prng) {}

  absl::StatusOr<std::pair<RingElement, RingElement>> NextSample() {
    if (cursor_ >= samples_.pairs.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("Sample set exhausted after ", cursor_, " samples."));
    }
    return samples_.pairs[cursor_++];
  }

  Params params_;
  SampleSet samples_;
  NoiseSampler noise_;
  Prng& prng_;
  size_t cursor_ = 0;
  std::optional<PublicKey> pk_;
  std::vector<RingElement> attr_inverse_;
  // identity -> the sample (a, b) standing in for (u, SK_u).
  std::map<std::string, std::pair<RingElement, RingElement>> identities_;
};

GameTranscript Invalid(GameTranscript transcript, std::string reason) {
  transcript.outcome = GameOutcome::kInvalid;
  transcript.invalid_reason = std::move(reason);
  return transcript;
}

absl::Status CheckMessage(const RingElement& m, const Params& params,
                          absl::string_view name) {
  if (m.n() != params.n || m.q() != params.q) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " is not an element of the scheme's ring"));
  }
  for (uint64_t c : m.coeffs()) {
    if (c >= params.p) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " has a coefficient outside R_p"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<GameTranscript> PlayGame(Adversary& adversary,
                                        Challenger& challenger,
                                        const Params& params, uint32_t n_attrs,
                                        Prng& prng,
                                        const GameOptions& options) {
  GameTranscript transcript;
  AttributeLedger ledger;
  const PublicKey& pk = challenger.public_key();
  transcript.view.pk = pk;
  adversary.OnSetup(pk);

  std::optional<AccessTree> tree;
  for (GamePhase phase : {GamePhase::kPhase1, GamePhase::kPhase2}) {
    if (phase == GamePhase::kPhase2) {
      ChallengeRequest request = adversary.Challenge();
      if (auto s = request.tree.ValidateFor(params.q, n_attrs); !s.ok()) {
        return Invalid(std::move(transcript),
                       absl::StrCat("challenge tree: ", s.message()));
      }
      for (const auto& [m, name] :
           {std::pair<const RingElement&, const char*>{request.m0, "M_0"},
            std::pair<const RingElement&, const char*>{request.m1, "M_1"}}) {
        if (auto s = CheckMessage(m, params, name); !s.ok()) {
          return Invalid(std::move(transcript), std::string(s.message()));
        }
      }
      transcript.challenge_tree = request.tree;
      transcript.ledger_at_challenge = ledger.entries();
      if (ledger.AnySatisfies(request.tree)) {
        transcript.outcome = GameOutcome::kAbort;
        return transcript;
      }
      transcript.coin = prng.Bit() ? 1 : 0;
      if (options.coin_tap) options.coin_tap(transcript.coin);
      RTABE_ASSIGN_OR_RETURN(Ciphertext ct,
                             challenger.EncryptChallenge(
                                 transcript.coin == 1 ? request.m1 : request.m0,
                                 request.tree, &transcript.challenge_trace));
      transcript.view.challenge = ct;
      adversary.OnChallengeCiphertext(ct);
      tree = std::move(request.tree);
    }

    for (size_t count = 0;; ++count) {
      std::optional<KeyQuery> query = adversary.NextQuery(phase);
      if (!query.has_value()) break;
      if (count >= options.max_queries_per_phase) {
        return Invalid(std::move(transcript),
                       absl::StrCat("more than ", options.max_queries_per_phase,
                                    " queries in one phase"));
      }
      if (query->attribute == 0 || query->attribute > n_attrs) {
        return Invalid(
            std::move(transcript),
            absl::StrCat("query for unknown attribute ", query->attribute));
      }
      QueryRecord record{.identity = query->identity,
                         .attribute = query->attribute,
                         .phase = phase,
                         .refused = false};
      if (phase == GamePhase::kPhase2 &&
          ledger.WouldSatisfy(*tree, query->identity, query->attribute)) {
        record.refused = true;
        transcript.queries.push_back(std::move(record));
        adversary.OnKey(absl::PermissionDeniedError(
            "Refused: the identity's attributes would satisfy the challenge "
            "policy."));
        continue;
      }
      RTABE_ASSIGN_OR_RETURN(
          IssuedKey key, challenger.Issue(query->identity, query->attribute));
      ledger.Add(query->identity, query->attribute);
      transcript.queries.push_back(std::move(record));
      transcript.view.keys.push_back(key);
      adversary.OnKey(std::move(key));
    }
  }

  transcript.guess = adversary.Guess();
  if (transcript.guess != 0 && transcript.guess != 1) {
    return Invalid(std::move(transcript),
                   absl::StrCat("guess ", transcript.guess, " is not a bit"));
  }
  transcript.outcome = transcript.guess == transcript.coin ? GameOutcome::kWin
                                                           : GameOutcome::kLose;
  return transcript;
}

absl::Status CompareElementRing(const RingElement& a, const RingElement& b,
                                absl::string_view what) {
  if (a.n() != b.n() || a.q() != b.q()) {
    return absl::FailedPreconditionError(
        absl::StrCat(what, " lives in different rings"));
  }
  return absl::OkStatus();
}

}  // namespace

void AttributeLedger::Add(const std::string& identity, AttributeId attribute) {
  entries_[identity].Insert(attribute);
  ++total_;
}

bool AttributeLedger::AnySatisfies(const AccessTree& tree) const {
  for (const auto& [identity, attributes] : entries_) {
    if (Evaluate(tree, attributes)) return true;
  }
  return false;
}

bool AttributeLedger::WouldSatisfy(const AccessTree& tree,
                                   const std::string& identity,
                                   AttributeId attribute) const {
  AttributeSet attributes;
  if (auto it = entries_.find(identity); it != entries_.end()) {
    attributes = it->second;
  }
  attributes.Insert(attribute);
  return Evaluate(tree, attributes);
}

absl::StatusOr<IssuedKey> KeyOracle::Issue(const std::string& identity,
                                           AttributeId attribute) {
  RTABE_ASSIGN_OR_RETURN(
      IssuedKey key,
      IssueSingleAttributeKey(msk_, registry_, identity, attribute, prng_));
  ledger_.Add(identity, attribute);
  return key;
}

std::string_view OutcomeName(GameOutcome outcome) {
  switch (outcome) {
    case GameOutcome::kWin:
      return "win";
    case GameOutcome::kLose:
      return "lose";
    case GameOutcome::kAbort:
      return "abort";
    case GameOutcome::kInvalid:
      return "invalid";
  }
  return "invalid";
}

absl::StatusOr<GameTranscript> RunGame(Adversary& adversary,
                                       const Params& params, uint32_t n_attrs,
                                       Prng& prng, const GameOptions& options) {
  RTABE_ASSIGN_OR_RETURN(auto challenger,
                         SchemeChallenger::Create(params, n_attrs, prng));
  return PlayGame(adversary, *challenger, params, n_attrs, prng, options);
}

void CoinFlipAdversary::OnSetup(const PublicKey& pk) {
  pk_ = pk;
  phase1_.clear();
  phase2_.clear();
  if (pk.n_attrs() >= 2) {
    phase1_ = {{"alice", 1}};
    // Reversed: queries are popped from the back.
    phase2_ = {{"alice", 2}, {"bob", 2}};
  }
}

std::optional<KeyQuery> CoinFlipAdversary::NextQuery(GamePhase phase) {
  auto& queue = phase == GamePhase::kPhase1 ? phase1_ : phase2_;
  if (queue.empty()) return std::nullopt;
  KeyQuery query = std::move(queue.back());
  queue.pop_back();
  return query;
}

void CoinFlipAdversary::OnKey(const absl::StatusOr<IssuedKey>& key) {
  if (!key.ok()) ++refusals_;
}

ChallengeRequest CoinFlipAdversary::Challenge() {
  const Params& params = pk_->params;
  auto context = pk_->a_prime.context();
  auto random_message = [&] {
    std::vector<uint64_t> coeffs(params.n);
    for (auto& c : coeffs) c = prng_.Uniform(params.p);
    return *RingElement::Create(context, std::move(coeffs));
  };
  AccessTree tree =
      pk_->n_attrs() >= 2
          ? *AccessTree::And({AccessTree::Leaf(1), AccessTree::Leaf(2)})
          : AccessTree::Leaf(1);
  RingElement m0 = random_message();
  RingElement m1 = random_message();
  return ChallengeRequest{
      .tree = std::move(tree), .m0 = std::move(m0), .m1 = std::move(m1)};
}

int CoinFlipAdversary::Guess() { return prng_.Bit() ? 1 : 0; }

absl::StatusOr<LabeledSampleSet> MakeSampleSet(const Params& params, size_t m,
                                               GroundTruth truth, Prng& prng) {
  if (m == 0) {
    return absl::InvalidArgumentError("A sample set needs m >= 1.");
  }
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  RTABE_ASSIGN_OR_RETURN(NoiseSampler noise, NoiseSampler::Create(params));
  LabeledSampleSet out;
  out.truth = truth;
  if (truth == GroundTruth::kLwe) out.secret = SampleUniform(context, prng);
  out.samples.pairs.reserve(m);
  for (size_t j = 0; j < m; ++j) {
    RingElement a = SampleUniform(context, prng);
    RingElement b = RingElement::Zero(context);
    if (truth == GroundTruth::kLwe) {
      RTABE_ASSIGN_OR_RETURN(RingElement as, a.Mul(*out.secret));
      RTABE_ASSIGN_OR_RETURN(b, as.Add(noise.SampleScaled(prng)));
    } else {
      b = SampleUniform(context, prng);
    }
    out.samples.pairs.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

absl::StatusOr<ReductionTranscript> RunReduction(Adversary& adversary,
                                                 const Params& params,
                                                 uint32_t n_attrs, size_t m,
                                                 GroundTruth truth, Prng& prng,
                                                 const GameOptions& options) {
  if (m <= n_attrs) {
    return absl::InvalidArgumentError(absl::StrCat(
        "The reduction needs more than n_attrs = ", n_attrs, " samples."));
  }
  RTABE_ASSIGN_OR_RETURN(LabeledSampleSet labeled,
                         MakeSampleSet(params, m, truth, prng));
  // From here on only the unlabeled pairs are used.
  RTABE_ASSIGN_OR_RETURN(
      auto challenger, SampleChallenger::Create(
                           params, n_attrs, std::move(labeled.samples), prng));
  ReductionTranscript out;
  RTABE_ASSIGN_OR_RETURN(out.game, PlayGame(adversary, *challenger, params,
                                            n_attrs, prng, options));
  out.samples_used = challenger->samples_used();
  const GameOutcome outcome = out.game.outcome;
  if (outcome == GameOutcome::kWin) {
    out.decision = GroundTruth::kLwe;
  } else if (outcome == GameOutcome::kLose) {
    out.decision = GroundTruth::kUniform;
  } else {
    out.decision = prng.Bit() ? GroundTruth::kLwe : GroundTruth::kUniform;
  }
  return out;
}

absl::Status CompareViewShapes(const AdversaryView& a, const AdversaryView& b) {
  if (a.pk.has_value() != b.pk.has_value()) {
    return absl::FailedPreconditionError("Only one view has a public key.");
  }
  if (a.pk.has_value()) {
    if (a.pk->pk.size() != b.pk->pk.size()) {
      return absl::FailedPreconditionError(
          absl::StrCat("Public keys have ", a.pk->pk.size(), " vs ",
                       b.pk->pk.size(), " components."));
    }
    RTABE_RETURN_IF_ERROR(
        CompareElementRing(a.pk->a_prime, b.pk->a_prime, "a'"));
    for (size_t i = 0; i < a.pk->pk.size(); ++i) {
      RTABE_RETURN_IF_ERROR(
          CompareElementRing(a.pk->pk[i], b.pk->pk[i], "PK_i"));
    }
  }
  if (a.keys.size() != b.keys.size()) {
    return absl::FailedPreconditionError(
        absl::StrCat(a.keys.size(), " vs ", b.keys.size(), " issued keys."));
  }
  for (size_t k = 0; k < a.keys.size(); ++k) {
    const IssuedKey& x = a.keys[k];
    const IssuedKey& y = b.keys[k];
    if (x.identity != y.identity || x.attribute != y.attribute ||
        x.sk_u.has_value() != y.sk_u.has_value()) {
      return absl::FailedPreconditionError(
          absl::StrCat("Issued key ", k, " differs in shape."));
    }
    RTABE_RETURN_IF_ERROR(CompareElementRing(x.sk_attr, y.sk_attr, "SK_i"));
  }
  if (a.challenge.has_value() != b.challenge.has_value()) {
    return absl::FailedPreconditionError(
        "Only one view has a challenge ciphertext.");
  }
  if (a.challenge.has_value()) {
    const Ciphertext& x = *a.challenge;
    const Ciphertext& y = *b.challenge;
    if (!(x.tree == y.tree)) {
      return absl::FailedPreconditionError("Challenge trees differ.");
    }
    if (x.c_leaves.size() != y.c_leaves.size()) {
      return absl::FailedPreconditionError("Challenge leaf sets differ.");
    }
    for (auto xi = x.c_leaves.begin(), yi = y.c_leaves.begin();
         xi != x.c_leaves.end(); ++xi, ++yi) {
      if (xi->first != yi->first) {
        return absl::FailedPreconditionError("Challenge leaf sets differ.");
      }
      RTABE_RETURN_IF_ERROR(CompareElementRing(xi->second, yi->second, "C_i"));
    }
    RTABE_RETURN_IF_ERROR(CompareElementRing(x.c_prime, y.c_prime, "C'"));
    RTABE_RETURN_IF_ERROR(CompareElementRing(x.c_body, y.c_body, "C"));
  }
  return absl::OkStatus();
}

std::string FormatTrialRecord(const TrialRecord& record) {
  nlohmann::ordered_json j;
  j["trial"] = record.trial;
  j["seed"] = record.seed;
  j["outcome"] = std::string(OutcomeName(record.outcome));
  j["queries"] = record.queries;
  return j.dump();
}

absl::StatusOr<TrialRecord> ParseTrialRecord(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("Trial record is not a JSON object.");
  }
  for (const char* field : {"trial", "seed", "queries"}) {
    if (!j.contains(field) || !j[field].is_number_unsigned()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Trial record lacks unsigned field '", field, "'."));
    }
  }
  if (!j.contains("outcome") || !j["outcome"].is_string()) {
    return absl::InvalidArgumentError("Trial record lacks 'outcome'.");
  }
  TrialRecord record;
  record.trial = j["trial"].get<uint64_t>();
  record.seed = j["seed"].get<uint64_t>();
  record.queries = j["queries"].get<size_t>();
  const std::string outcome = j["outcome"].get<std::string>();
  bool known = false;
  for (GameOutcome o : {GameOutcome::kWin, GameOutcome::kLose,
                        GameOutcome::kAbort, GameOutcome::kInvalid}) {
    if (outcome == OutcomeName(o)) {
      record.outcome = o;
      known = true;
    }
  }
  if (!known) {
    return absl::InvalidArgumentError(
        absl::StrCat("Unknown outcome '", outcome, "'."));
  }
  return record;
}

TrialSummary Summarize(std::span<const TrialRecord> records) {
  TrialSummary s;
  s.trials = records.size();
  for (const TrialRecord& r : records) {
    switch (r.outcome) {
      case GameOutcome::kWin:
        ++s.wins;
        break;
      case GameOutcome::kLose:
        ++s.losses;
        break;
      case GameOutcome::kAbort:
        ++s.aborts;
        break;
      case GameOutcome::kInvalid:
        ++s.invalid;
        break;
    }
  }
  const size_t decided = s.wins + s.losses;
  if (decided > 0) {
    s.win_rate = static_cast<double>(s.wins) / static_cast<double>(decided);
    s.standard_error =
        std::sqrt(s.win_rate * (1 - s.win_rate) / static_cast<double>(decided));
  }
  return s;
}

absl::StatusOr<std::vector<TrialRecord>> RunCoinFlipTrials(const Params& params,
                                                           uint32_t n_attrs,
                                                           size_t trials,
                                                           uint64_t seed,
                                                           unsigned workers) {
  RTABE_RETURN_IF_ERROR(params.Validate());
  std::vector<TrialRecord> records(trials);
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  absl::Status first_error;
  const Prng root(seed);

  auto worker = [&] {
    for (size_t t = next++; t < trials; t = next++) {
      Prng challenger_prng = root.Fork(2 * t);
      CoinFlipAdversary adversary(root.Fork(2 * t + 1));
      auto transcript = RunGame(adversary, params, n_attrs, challenger_prng);
      if (!transcript.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = transcript.status();
        return;
      }
      records[t] = TrialRecord{.trial = t,
                               .seed = seed,
                               .outcome = transcript->outcome,
                               .queries = transcript->queries.size()};
    }
  };
  workers = std::max(1u, workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.ok()) return first_error;
  return records;
}

}  // namespace rtabe

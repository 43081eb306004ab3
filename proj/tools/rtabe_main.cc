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

// rtabe: key authority, data owner and data user commands, plus the
// benchmark, game and noise-report harnesses.
//
// Exit codes: 0 success, 2 usage, 3 not authorized, 4 malformed input,
// 5 internal.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "rtabe/codec.h"
#include "rtabe/evaluation.h"
#include "rtabe/game.h"
#include "rtabe/message.h"
#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/scheme.h"

namespace rtabe {
namespace {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNotAuthorized = 3,
  kMalformed = 4,
  kInternal = 5,
};

// A failed command: what to print and how to exit.
struct Failure {
  int code;
  std::string message;
};

template <typename T>
using Result = std::variant<T, Failure>;

Failure Fail(int code, const absl::Status& status) {
  return {code, std::string(status.message())};
}

Failure Fail(int code, std::string message) {
  return {code, std::move(message)};
}

#define CLI_TRY(lhs, expr, code)            \
  auto lhs##_or = (expr);                   \
  if (!lhs##_or.ok()) {                     \
    return Fail((code), lhs##_or.status()); \
  }                                         \
  auto lhs = *std::move(lhs##_or)

int Finish(const std::optional<Failure>& failure) {
  if (!failure) return kOk;
  std::cerr << "rtabe: " << failure->message << "\n";
  return failure->code;
}

// ---------------------------------------------------------------------------
// Files.

constexpr char kPublicKeyFile[] = "pk.bin";
constexpr char kMasterKeyFile[] = "msk.bin";
constexpr char kAttrsMapFile[] = "attrs.map";
constexpr char kRegistryDir[] = "registry";

absl::StatusOr<std::vector<uint8_t>> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  }
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

absl::Status WriteFile(const fs::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

absl::Status WriteText(const fs::path& path, const std::string& text) {
  return WriteFile(
      path,
      std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

// Reads a file that must exist (exit 2 otherwise) and decodes it (exit 4).
template <typename T, typename Decoder>
Result<T> Load(const fs::path& path, Decoder decode) {
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return Fail(kUsage, bytes.status());
  auto value = decode(std::span<const uint8_t>(*bytes));
  if (!value.ok()) {
    return Fail(kMalformed,
                absl::StrCat(path.string(), ": ", value.status().message()));
  }
  return *std::move(value);
}

// Registry entries are named by the hex encoding of the identity.
std::string IdentityFileName(std::string_view identity) {
  std::string out;
  for (unsigned char c : identity) absl::StrAppendFormat(&out, "%02x", c);
  return out + ".bin";
}

// ---------------------------------------------------------------------------
// Attribute names.

using NameMap = std::map<std::string, AttributeId, std::less<>>;

absl::StatusOr<NameMap> ParseNameMap(const std::string& text) {
  NameMap names;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> parts = absl::StrSplit(line, '=');
    AttributeId id = 0;
    if (parts.size() != 2 || absl::StripAsciiWhitespace(parts[0]).empty() ||
        !absl::SimpleAtoi(absl::StripAsciiWhitespace(parts[1]), &id)) {
      return absl::InvalidArgumentError(
          absl::StrCat("attrs.map line ", line_no, ": expected name=id"));
    }
    names[std::string(absl::StripAsciiWhitespace(parts[0]))] = id;
  }
  return names;
}

// The map beside `anchor` (a directory, or a file in it); empty when absent.
absl::StatusOr<NameMap> LoadNameMap(const fs::path& anchor) {
  const fs::path dir = fs::is_directory(anchor) ? anchor : anchor.parent_path();
  const fs::path path = dir / kAttrsMapFile;
  if (!fs::exists(path)) return NameMap{};
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  return ParseNameMap(std::string(bytes->begin(), bytes->end()));
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Replaces every mapped name in policy text with its attN form.
std::string ResolvePolicyNames(const std::string& text, const NameMap& names) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i])) && text[i] != '_') {
      out += text[i++];
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordChar(text[j])) ++j;
    const std::string word = text.substr(i, j - i);
    auto it = names.find(word);
    out += it == names.end() ? word : absl::StrCat("att", it->second);
    i = j;
  }
  return out;
}

// "1,4,7" or names from the map, in any mix.
absl::StatusOr<std::vector<AttributeId>> ParseAttributeList(
    const std::string& text, const NameMap& names) {
  std::vector<AttributeId> ids;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    item = absl::StripAsciiWhitespace(item);
    if (item.empty()) continue;
    AttributeId id = 0;
    if (absl::SimpleAtoi(item, &id)) {
      ids.push_back(id);
      continue;
    }
    auto it = names.find(item);
    if (it == names.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attribute \"", std::string(item), "\""));
    }
    ids.push_back(it->second);
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Shared flags.

struct ModeFlags {
  std::string inverse = "exact";
  std::string noise = "off";

  void Add(CLI::App* app) {
    app->add_option("--inverse", inverse, "Inverse convention")
        ->check(CLI::IsMember({"exact", "literal"}))
        ->capture_default_str();
    app->add_option("--noise", noise, "Gaussian error draws")
        ->check(CLI::IsMember({"off", "on"}))
        ->capture_default_str();
  }

  SchemeMode Mode() const {
    return {
        .inverse = inverse == "literal" ? InverseConvention::kPaperLiteral
                                        : InverseConvention::kExactInverse,
        .noise = noise == "on" ? NoiseMode::kNoiseOn : NoiseMode::kNoiseOff};
  }
};

Prng MakePrng(const std::optional<uint64_t>& seed) {
  return seed ? Prng(*seed) : Prng::FromEntropy();
}

uint64_t SeedOrEntropy(const std::optional<uint64_t>& seed) {
  return seed ? *seed : Prng::FromEntropy().NextU64();
}

// ---------------------------------------------------------------------------
// setup

struct SetupFlags {
  std::string params = "toy";
  uint32_t attrs = 0;
  std::string out;
  std::optional<uint64_t> seed;
  ModeFlags mode;
};

std::optional<Failure> RunSetup(const SetupFlags& f) {
  CLI_TRY(params, Params::Named(f.params, f.mode.Mode()), kUsage);
  Prng prng = MakePrng(f.seed);
  CLI_TRY(setup, Setup(params, f.attrs, prng), kInternal);

  const fs::path dir(f.out);
  std::error_code ec;
  fs::create_directories(dir / kRegistryDir, ec);
  if (ec) {
    return Fail(kInternal, absl::StrCat("cannot create ", dir.string(), ": ",
                                        ec.message()));
  }
  std::string map;
  for (uint32_t i = 1; i <= f.attrs; ++i)
    absl::StrAppend(&map, "att", i, "=", i, "\n");
  for (const absl::Status& s :
       {WriteFile(dir / kPublicKeyFile, EncodePublicKey(setup.pk)),
        WriteFile(dir / kMasterKeyFile, EncodeMasterSecretKey(setup.msk)),
        WriteText(dir / kAttrsMapFile, map)}) {
    if (!s.ok()) return Fail(kInternal, s);
  }
  std::cout << "params     " << params.DebugString() << "\n"
            << "attributes " << f.attrs << "\n"
            << "wrote      " << (dir / kPublicKeyFile).string() << ", "
            << (dir / kMasterKeyFile).string() << ", "
            << (dir / kAttrsMapFile).string() << "\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// keygen

struct KeygenFlags {
  std::string identity;
  std::string attrs;
  std::string authority;
  std::string out;
  std::optional<uint64_t> seed;
};

std::optional<Failure> RunKeygen(const KeygenFlags& f) {
  const fs::path dir(f.authority);
  if (!fs::is_directory(dir)) {
    return Fail(kUsage,
                absl::StrCat("no authority directory at ", f.authority));
  }
  auto msk = Load<MasterSecretKey>(dir / kMasterKeyFile, DecodeMasterSecretKey);
  if (auto* fail = std::get_if<Failure>(&msk)) return *fail;
  const MasterSecretKey& master = std::get<MasterSecretKey>(msk);

  CLI_TRY(names, LoadNameMap(dir), kMalformed);
  CLI_TRY(ids, ParseAttributeList(f.attrs, names), kUsage);
  CLI_TRY(
      att,
      AttributeSet::Create(ids, static_cast<uint32_t>(master.attr_a.size())),
      kUsage);
  if (att.empty()) return Fail(kUsage, "no attributes requested");

  // Restore the registry so a returning identity keeps its u.
  KeyRegistry registry;
  const fs::path record_path =
      dir / kRegistryDir / IdentityFileName(f.identity);
  if (fs::exists(record_path)) {
    auto record = Load<IdentityRecord>(record_path, DecodeIdentityRecord);
    if (auto* fail = std::get_if<Failure>(&record)) return *fail;
    IdentityRecord& r = std::get<IdentityRecord>(record);
    if (r.identity != f.identity || !r.params.SameRing(master.params)) {
      return Fail(kMalformed, absl::StrCat(record_path.string(),
                                           ": record does not match"));
    }
    registry.Restore(r.identity,
                     {.u = r.u, .sk_u = r.sk_u, .issued = r.issued});
  }

  Prng prng = MakePrng(f.seed);
  CLI_TRY(usk, KeyGen(master, f.identity, att, registry, prng), kInternal);
  const auto stored = registry.Lookup(f.identity);
  if (!stored) return Fail(kInternal, "registry lost the identity");
  const IdentityRecord record{.params = master.params,
                              .identity = f.identity,
                              .u = stored->u,
                              .sk_u = stored->sk_u,
                              .issued = stored->issued};
  std::error_code ec;
  fs::create_directories(dir / kRegistryDir, ec);
  for (const absl::Status& s :
       {WriteFile(f.out, EncodeUserSecretKey(usk)),
        WriteFile(record_path, EncodeIdentityRecord(record))}) {
    if (!s.ok()) return Fail(kInternal, s);
  }
  std::cout << "identity   " << f.identity << "\n"
            << "attributes";
  for (AttributeId id : usk.attributes()) std::cout << " " << id;
  std::cout << "\nwrote      " << f.out << "\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// encrypt

struct EncryptFlags {
  std::string pk;
  std::string policy;
  std::string in;
  std::string out;
  std::optional<uint64_t> seed;
};

std::optional<Failure> RunEncrypt(const EncryptFlags& f) {
  auto loaded = Load<PublicKey>(f.pk, DecodePublicKey);
  if (auto* fail = std::get_if<Failure>(&loaded)) return *fail;
  const PublicKey& pk = std::get<PublicKey>(loaded);
  const uint32_t n_attrs = static_cast<uint32_t>(pk.pk.size() - 1);

  CLI_TRY(names, LoadNameMap(fs::path(f.pk)), kMalformed);
  CLI_TRY(tree, ParsePolicy(ResolvePolicyNames(f.policy, names), n_attrs),
          kMalformed);
  CLI_TRY(payload, ReadFile(f.in), kUsage);

  const size_t capacity = MessageCapacityBytes(pk.params);
  if (capacity == 0) return Fail(kInternal, "message space holds no bytes");
  Prng prng = MakePrng(f.seed);
  CiphertextContainer container{
      .params = pk.params, .blocks = {}, .original_length = payload.size()};
  for (size_t offset = 0; offset < payload.size(); offset += capacity) {
    const size_t length = std::min(capacity, payload.size() - offset);
    CLI_TRY(m,
            MessageEmbed(pk.params, std::span(payload).subspan(offset, length)),
            kInternal);
    CLI_TRY(ct, Encrypt(pk, m, tree, prng), kInternal);
    container.blocks.push_back(std::move(ct));
  }
  if (absl::Status s = WriteFile(f.out, EncodeContainer(container)); !s.ok()) {
    return Fail(kInternal, s);
  }
  std::cout << "policy     " << FormatPolicy(tree) << "\n"
            << "blocks     " << container.blocks.size() << " of " << capacity
            << " bytes\n"
            << "wrote      " << f.out << "\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// decrypt

struct DecryptFlags {
  std::vector<std::string> keys;
  std::string pk;
  std::string in;
  std::string out;
};

// Merges key files issued to one identity at different times.
Result<UserSecretKey> LoadKeys(const std::vector<std::string>& paths) {
  std::optional<UserSecretKey> merged;
  for (const std::string& path : paths) {
    auto loaded = Load<UserSecretKey>(path, DecodeUserSecretKey);
    if (auto* fail = std::get_if<Failure>(&loaded)) return *fail;
    UserSecretKey& usk = std::get<UserSecretKey>(loaded);
    if (!merged) {
      merged = std::move(usk);
      continue;
    }
    if (usk.identity != merged->identity || !(usk.sk_u == merged->sk_u)) {
      return Fail(kUsage, "key files belong to different identities");
    }
    merged->per_attr.merge(usk.per_attr);
  }
  return *std::move(merged);
}

std::optional<Failure> RunDecrypt(const DecryptFlags& f) {
  auto key = LoadKeys(f.keys);
  if (auto* fail = std::get_if<Failure>(&key)) return *fail;
  const UserSecretKey& usk = std::get<UserSecretKey>(key);
  auto loaded_pk = Load<PublicKey>(f.pk, DecodePublicKey);
  if (auto* fail = std::get_if<Failure>(&loaded_pk)) return *fail;
  const PublicKey& pk = std::get<PublicKey>(loaded_pk);
  auto loaded_ct = Load<CiphertextContainer>(f.in, DecodeContainer);
  if (auto* fail = std::get_if<Failure>(&loaded_ct)) return *fail;
  const CiphertextContainer& container =
      std::get<CiphertextContainer>(loaded_ct);

  if (!(usk.params == pk.params) || !(container.params == pk.params)) {
    return Fail(kMalformed, "key, public key and ciphertext parameters differ");
  }
  const size_t capacity = MessageCapacityBytes(pk.params);
  const uint64_t length = container.original_length;
  if (capacity == 0 ||
      container.blocks.size() != (length + capacity - 1) / capacity) {
    return Fail(kMalformed, "block count does not match the recorded length");
  }

  std::vector<uint8_t> plaintext;
  plaintext.reserve(length);
  for (size_t i = 0; i < container.blocks.size(); ++i) {
    auto m = Decrypt(container.blocks[i], usk, pk);
    if (!m.ok()) {
      return Fail(IsNotAuthorized(m.status()) ? kNotAuthorized : kInternal,
                  m.status());
    }
    const size_t block_len =
        std::min<uint64_t>(capacity, length - i * capacity);
    CLI_TRY(bytes, MessageExtract(*m, pk.params.p, block_len), kInternal);
    plaintext.insert(plaintext.end(), bytes.begin(), bytes.end());
  }
  if (absl::Status s = WriteFile(f.out, plaintext); !s.ok()) {
    return Fail(kInternal, s);
  }
  std::cout << "wrote      " << f.out << " (" << plaintext.size()
            << " bytes)\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// policy-check

struct PolicyCheckFlags {
  std::string policy;
  std::string attrs;
  std::string map;
};

std::optional<Failure> RunPolicyCheck(const PolicyCheckFlags& f) {
  NameMap names;
  if (!f.map.empty()) {
    CLI_TRY(bytes, ReadFile(f.map), kUsage);
    CLI_TRY(parsed, ParseNameMap(std::string(bytes.begin(), bytes.end())),
            kMalformed);
    names = std::move(parsed);
  }
  CLI_TRY(tree, ParsePolicy(ResolvePolicyNames(f.policy, names)), kMalformed);
  CLI_TRY(ids, ParseAttributeList(f.attrs, names), kUsage);
  AttributeSet att;
  for (AttributeId id : ids) att.Insert(id);
  std::cout << (Evaluate(tree, att) ? "satisfied" : "unsatisfied") << "\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// bench, noise-report, game, report

struct BenchFlags {
  std::string params = "toy";
  size_t trials = 100;
  std::optional<uint64_t> seed;
  ModeFlags mode;
};

std::optional<Failure> RunBench(const BenchFlags& f) {
  CLI_TRY(params, Params::Named(f.params, f.mode.Mode()), kUsage);
  CLI_TRY(stats, RunBenchmark(params, f.trials, SeedOrEntropy(f.seed)),
          kInternal);
  std::cout << "params " << params.DebugString() << "\n"
            << FormatLatencies(stats);
  return std::nullopt;
}

struct NoiseReportFlags {
  std::string params = "toy";
  size_t trials = 1000;
  std::optional<uint64_t> seed;
};

std::optional<Failure> RunNoiseReport(const NoiseReportFlags& f) {
  CLI_TRY(params, Params::Named(f.params), kUsage);
  CLI_TRY(rows, MeasureFailureRates(params, f.trials, SeedOrEntropy(f.seed)),
          kInternal);
  std::cout << "params " << params.DebugString() << "\n"
            << FormatFailureRates(rows);
  return std::nullopt;
}

void PrintSummary(const TrialSummary& s) {
  std::cout << absl::StrFormat(
      "trials %d  wins %d  losses %d  aborts %d  invalid %d\n"
      "win rate %.4f  standard error %.4f  3-sigma interval [%.4f, %.4f]\n",
      s.trials, s.wins, s.losses, s.aborts, s.invalid, s.win_rate,
      s.standard_error, s.win_rate - 3 * s.standard_error,
      s.win_rate + 3 * s.standard_error);
}

struct GameFlags {
  std::string adversary = "coinflip";
  std::string params = "toy";
  uint32_t attrs = 2;
  size_t trials = 10000;
  std::optional<uint64_t> seed;
  unsigned workers = 0;
  std::string records;
  ModeFlags mode;
};

std::optional<Failure> RunGameCommand(const GameFlags& f) {
  CLI_TRY(params, Params::Named(f.params, f.mode.Mode()), kUsage);
  const unsigned workers =
      f.workers != 0 ? f.workers
                     : std::max(1u, std::thread::hardware_concurrency());
  CLI_TRY(records,
          RunCoinFlipTrials(params, f.attrs, f.trials, SeedOrEntropy(f.seed),
                            workers),
          kInternal);
  if (!f.records.empty()) {
    std::string text;
    for (const TrialRecord& r : records) {
      absl::StrAppend(&text, FormatTrialRecord(r), "\n");
    }
    if (absl::Status s = WriteText(f.records, text); !s.ok()) {
      return Fail(kInternal, s);
    }
  }
  PrintSummary(Summarize(records));
  return std::nullopt;
}

std::optional<Failure> RunReport(const std::string& path) {
  CLI_TRY(bytes, ReadFile(path), kUsage);
  std::vector<TrialRecord> records;
  int line_no = 0;
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    auto record = ParseTrialRecord(line);
    if (!record.ok()) {
      return Fail(kMalformed, absl::StrCat(path, " line ", line_no, ": ",
                                           record.status().message()));
    }
    records.push_back(*record);
  }
  PrintSummary(Summarize(records));
  return std::nullopt;
}

int Main(int argc, char** argv) {
  CLI::App app{"R-LWE ciphertext-policy attribute-based encryption"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SetupFlags setup;
  CLI::App* setup_cmd = app.add_subcommand("setup", "Create an authority");
  setup_cmd->add_option("--params", setup.params)
      ->check(CLI::IsMember({"toy", "desk"}))
      ->capture_default_str();
  setup_cmd->add_option("--attrs", setup.attrs, "Attribute universe size")
      ->required()
      ->check(CLI::Range(1u, 1u << 16));
  setup_cmd->add_option("--out", setup.out, "Authority directory")->required();
  setup_cmd->add_option("--seed", setup.seed);
  setup.mode.Add(setup_cmd);

  KeygenFlags keygen;
  CLI::App* keygen_cmd = app.add_subcommand("keygen", "Issue a user key");
  keygen_cmd->add_option("--identity", keygen.identity)->required();
  keygen_cmd->add_option("--attrs", keygen.attrs, "e.g. \"1,4,7\"")->required();
  keygen_cmd->add_option("--authority", keygen.authority)->required();
  keygen_cmd->add_option("--out", keygen.out)->required();
  keygen_cmd->add_option("--seed", keygen.seed);

  EncryptFlags encrypt;
  CLI::App* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a file");
  encrypt_cmd->add_option("--pk", encrypt.pk)->required();
  encrypt_cmd->add_option("--policy", encrypt.policy)->required();
  encrypt_cmd->add_option("--in", encrypt.in)->required();
  encrypt_cmd->add_option("--out", encrypt.out)->required();
  encrypt_cmd->add_option("--seed", encrypt.seed);

  DecryptFlags decrypt;
  CLI::App* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a file");
  decrypt_cmd->add_option("--key", decrypt.keys, "Repeatable")->required();
  decrypt_cmd->add_option("--pk", decrypt.pk)->required();
  decrypt_cmd->add_option("--in", decrypt.in)->required();
  decrypt_cmd->add_option("--out", decrypt.out)->required();

  PolicyCheckFlags check;
  CLI::App* check_cmd =
      app.add_subcommand("policy-check", "Evaluate a policy on attributes");
  check_cmd->add_option("--policy", check.policy)->required();
  check_cmd->add_option("--attrs", check.attrs)->required();
  check_cmd->add_option("--map", check.map, "attrs.map for names");

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the algorithms");
  bench_cmd->add_option("--params", bench.params)
      ->check(CLI::IsMember({"toy", "desk"}))
      ->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed);
  bench.mode.Add(bench_cmd);

  GameFlags game;
  CLI::App* game_cmd = app.add_subcommand("game", "Play IND-CPA games");
  game_cmd->add_option("--adversary", game.adversary)
      ->check(CLI::IsMember({"coinflip"}))
      ->capture_default_str();
  game_cmd->add_option("--params", game.params)
      ->check(CLI::IsMember({"toy", "desk"}))
      ->capture_default_str();
  game_cmd->add_option("--attrs", game.attrs)
      ->check(CLI::Range(1u, 1u << 16))
      ->capture_default_str();
  game_cmd->add_option("--trials", game.trials)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  game_cmd->add_option("--seed", game.seed);
  game_cmd->add_option("--workers", game.workers, "0 = all cores");
  game_cmd->add_option("--records", game.records,
                       "Write one JSON line per game");
  game.mode.Add(game_cmd);

  NoiseReportFlags noise;
  CLI::App* noise_cmd =
      app.add_subcommand("noise-report", "Decryption failure rate per mode");
  noise_cmd->add_option("--params", noise.params)
      ->check(CLI::IsMember({"toy", "desk"}))
      ->capture_default_str();
  noise_cmd->add_option("--trials", noise.trials)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise_cmd->add_option("--seed", noise.seed);

  std::string records_path;
  CLI::App* report_cmd = app.add_subcommand("report", "Summarize game records");
  report_cmd->add_option("--records", records_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  std::optional<Failure> failure;
  if (*setup_cmd) failure = RunSetup(setup);
  if (*keygen_cmd) failure = RunKeygen(keygen);
  if (*encrypt_cmd) failure = RunEncrypt(encrypt);
  if (*decrypt_cmd) failure = RunDecrypt(decrypt);
  if (*check_cmd) failure = RunPolicyCheck(check);
  if (*bench_cmd) failure = RunBench(bench);
  if (*game_cmd) failure = RunGameCommand(game);
  if (*noise_cmd) failure = RunNoiseReport(noise);
  if (*report_cmd) failure = RunReport(records_path);
  return Finish(failure);
}

}  // namespace
}  // namespace rtabe

int main(int argc, char** argv) {
  try {
    return rtabe::Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "rtabe: internal error: " << e.what() << "\n";
    return rtabe::kInternal;
  }
}

#pragma once

// Language-model provider interface with three behaviors: a deterministic
// fixture-backed mock, recorded-transcript replay, and a live HTTP client.
// Fixtures are keyed by (role, scenario id, turn index), not by prompt hash,
// so prompt edits do not invalidate them.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrplan {

struct LmRequest {
  std::string role;      // pipeline-stage tag, e.g. "problem_generator/subtask1/Robot2"
  std::string scenario;  // fixture key
  int turn = 0;          // retry index
  std::string prompt;
};

struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class LmProvider {
 public:
  virtual ~LmProvider() = default;
  virtual std::string request(const LmRequest& req) const = 0;
  virtual std::string kind() const = 0;
};

// Fixture file format: blocks introduced by
//   ### scenario: <id> | role: <role> | turn: <n>
// with the verbatim response text until the next header.
class MockProvider : public LmProvider {
 public:
  static MockProvider from_file(const std::filesystem::path& file);
  static MockProvider from_directory(const std::filesystem::path& dir);  // all *.fixtures files

  void add_response(const std::string& scenario, const std::string& role, int turn,
                    std::string response);

  std::string request(const LmRequest& req) const override;
  std::string kind() const override { return "mock"; }

  size_t size() const { return responses_.size(); }

 private:
  void load_text(const std::string& text, const std::string& origin);

  // (scenario, role, turn) -> response; map keeps lookups deterministic
  std::map<std::tuple<std::string, std::string, int>, std::string> responses_;
};

// Replays transcripts persisted by a previous run (see TranscriptLog).
class ReplayProvider : public LmProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& transcript_dir);
  std::string request(const LmRequest& req) const override;
  std::string kind() const override { return "replay"; }

 private:
  std::map<std::tuple<std::string, std::string, int>, std::string> responses_;
};

// POSTs {role, scenario, turn, prompt} as JSON to the endpoint; the bearer
// token is read from the named environment variable at request time.
class HttpProvider : public LmProvider {
 public:
  HttpProvider(std::string endpoint, std::string credential_env);
  std::string request(const LmRequest& req) const override;
  std::string kind() const override { return "live"; }

 private:
  std::string endpoint_;
  std::string credential_env_;
};

// Collects request/response pairs for persistence into a run directory.
class TranscriptLog {
 public:
  void record(const LmRequest& req, const std::string& response);
  void write_to(const std::filesystem::path& dir) const;
  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    LmRequest req;
    std::string response;
  };
  std::vector<Entry> entries_;
  mutable std::mutex mutex_;
};

// Provider wrapper that logs every exchange into a TranscriptLog.
class LoggingProvider : public LmProvider {
 public:
  LoggingProvider(const LmProvider& inner, TranscriptLog& log) : inner_(inner), log_(log) {}
  std::string request(const LmRequest& req) const override;
  std::string kind() const override { return inner_.kind(); }

 private:
  const LmProvider& inner_;
  TranscriptLog& log_;
};

std::string sanitize_for_filename(std::string_view s);

}  // namespace mrplan

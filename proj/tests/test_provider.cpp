#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "mrplan/provider.hpp"

using namespace mrplan;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = std::string(MRPLAN_SOURCE_DIR) + "/data/fixtures";

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("mrplan_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fixture files parse and serve deterministic responses") {
  MockProvider provider = MockProvider::from_directory(kFixtures);
  CHECK(provider.size() > 30);
  LmRequest req{"precondition_identifier", "c1_egg_apple", 0, "prompt text is ignored"};
  std::string a = provider.request(req);
  std::string b = provider.request(req);
  CHECK(a == b);
  CHECK(a.find("Subtask 1: Put the egg in the fridge") != std::string::npos);
}

TEST_CASE("missing fixtures raise ProviderError") {
  MockProvider provider = MockProvider::from_directory(kFixtures);
  CHECK_THROWS_AS(provider.request({"precondition_identifier", "no_such_scenario", 0, ""}),
                  ProviderError);
}

TEST_CASE("retried turns fall back to the highest earlier fixture") {
  MockProvider provider;
  provider.add_response("s", "role", 0, "turn zero");
  CHECK(provider.request({"role", "s", 0, ""}) == "turn zero");
  CHECK(provider.request({"role", "s", 2, ""}) == "turn zero");
  provider.add_response("s", "role", 1, "turn one");
  CHECK(provider.request({"role", "s", 2, ""}) == "turn one");
}

TEST_CASE("fixture headers are validated") {
  fs::path dir = temp_dir("fixture_bad");
  std::ofstream(dir / "bad.fixtures") << "### scenario: | role: r | turn: 0\nbody\n";
  CHECK_THROWS_AS(MockProvider::from_directory(dir), ProviderError);
  fs::remove_all(dir);
}

TEST_CASE("transcripts round-trip through the replay provider") {
  fs::path dir = temp_dir("replay");
  {
    MockProvider mock;
    mock.add_response("scn", "stage_a", 0, "first response");
    mock.add_response("scn", "stage_b", 1, "second\nresponse body");
    TranscriptLog log;
    LoggingProvider logging(mock, log);
    logging.request({"stage_a", "scn", 0, "p1"});
    logging.request({"stage_b", "scn", 1, "p2"});
    log.write_to(dir);
  }
  ReplayProvider replay(dir);
  CHECK(replay.request({"stage_a", "scn", 0, "different prompt"}) == "first response");
  CHECK(replay.request({"stage_b", "scn", 1, ""}) == "second\nresponse body");
  CHECK_THROWS_AS(replay.request({"stage_c", "scn", 0, ""}), ProviderError);
  fs::remove_all(dir);
}

TEST_CASE("live provider round-trips against a local endpoint") {
  httplib::Server server;
  server.Post("/complete", [](const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Authorization") != "Bearer test-token") {
      res.status = 401;
      return;
    }
    res.set_content("echo:" + req.body.substr(0, 24), "text/plain");
  });
  int port = 18471;
  std::thread server_thread([&] { server.listen("127.0.0.1", port); });
  server.wait_until_ready();

  setenv("MRPLAN_TEST_TOKEN", "test-token", 1);
  HttpProvider provider("http://127.0.0.1:" + std::to_string(port) + "/complete",
                        "MRPLAN_TEST_TOKEN");
  std::string response = provider.request({"role", "scn", 0, "hello"});
  CHECK(response.rfind("echo:", 0) == 0);

  setenv("MRPLAN_TEST_TOKEN", "wrong", 1);
  CHECK_THROWS_AS(provider.request({"role", "scn", 0, "hello"}), ProviderError);

  server.stop();
  server_thread.join();
}

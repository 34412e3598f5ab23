#include "mrplan/provider.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "mrplan/util.hpp"

// httplib is header-only and heavy; keep it out of the public headers
#include "httplib.h"

namespace mrplan {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ProviderError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string rstrip(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.pop_back();
  return s;
}

}  // namespace

std::string sanitize_for_filename(std::string_view s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

void MockProvider::add_response(const std::string& scenario, const std::string& role, int turn,
                                std::string response) {
  responses_[{scenario, role, turn}] = std::move(response);
}

void MockProvider::load_text(const std::string& text, const std::string& origin) {
  std::string scenario, role;
  int turn = 0;
  std::string body;
  bool in_block = false;
  int lineno = 0;

  auto flush = [&]() {
    if (in_block) responses_[{scenario, role, turn}] = rstrip(body);
    body.clear();
  };

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.rfind("###", 0) == 0) {
      flush();
      // "### scenario: X | role: Y | turn: N"
      scenario.clear();
      role.clear();
      turn = 0;
      for (const auto& field : split(line.substr(3), '|')) {
        auto kv = split(field, ':');
        if (kv.size() < 2) continue;
        std::string key = trim(kv[0]);
        std::string value = trim(field.substr(field.find(':') + 1));
        if (key == "scenario")
          scenario = value;
        else if (key == "role")
          role = value;
        else if (key == "turn")
          turn = std::stoi(value);
      }
      if (scenario.empty() || role.empty())
        throw ProviderError(origin + ":" + std::to_string(lineno) + ": malformed fixture header: " + line);
      in_block = true;
    } else if (in_block) {
      body += line;
      body += '\n';
    } else if (!trim(line).empty()) {
      throw ProviderError(origin + ":" + std::to_string(lineno) + ": content before first fixture header");
    }
  }
  flush();
}

MockProvider MockProvider::from_file(const fs::path& file) {
  MockProvider p;
  p.load_text(read_file(file), file.string());
  return p;
}

MockProvider MockProvider::from_directory(const fs::path& dir) {
  MockProvider p;
  if (!fs::is_directory(dir)) throw ProviderError("fixture directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".fixtures") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) p.load_text(read_file(f), f.string());
  return p;
}

std::string MockProvider::request(const LmRequest& req) const {
  auto it = responses_.find({req.scenario, req.role, req.turn});
  if (it != responses_.end()) return it->second;
  // a retried turn without its own fixture falls back to the highest earlier turn
  for (int t = req.turn - 1; t >= 0; --t) {
    it = responses_.find({req.scenario, req.role, t});
    if (it != responses_.end()) return it->second;
  }
  throw ProviderError("no fixture for scenario '" + req.scenario + "', role '" + req.role +
                      "', turn " + std::to_string(req.turn));
}

ReplayProvider::ReplayProvider(const fs::path& transcript_dir) {
  if (!fs::is_directory(transcript_dir))
    throw ProviderError("transcript directory not found: " + transcript_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(transcript_dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    nlohmann::json j = nlohmann::json::parse(read_file(f));
    responses_[{j.at("scenario").get<std::string>(), j.at("role").get<std::string>(),
                j.at("turn").get<int>()}] = j.at("response").get<std::string>();
  }
}

std::string ReplayProvider::request(const LmRequest& req) const {
  auto it = responses_.find({req.scenario, req.role, req.turn});
  if (it == responses_.end())
    throw ProviderError("no recorded transcript for scenario '" + req.scenario + "', role '" +
                        req.role + "', turn " + std::to_string(req.turn));
  return it->second;
}

HttpProvider::HttpProvider(std::string endpoint, std::string credential_env)
    : endpoint_(std::move(endpoint)), credential_env_(std::move(credential_env)) {}

std::string HttpProvider::request(const LmRequest& req) const {
  // split endpoint into host part and path
  std::string url = endpoint_;
  std::string path = "/";
  size_t scheme = url.find("://");
  size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash != std::string::npos) {
    path = url.substr(slash);
    url = url.substr(0, slash);
  }

  httplib::Client client(url);
  client.set_read_timeout(60, 0);

  httplib::Headers headers;
  if (const char* token = std::getenv(credential_env_.c_str()); token && *token)
    headers.emplace("Authorization", std::string("Bearer ") + token);

  nlohmann::json payload = {
      {"role", req.role}, {"scenario", req.scenario}, {"turn", req.turn}, {"prompt", req.prompt}};
  auto res = client.Post(path, headers, payload.dump(), "application/json");
  if (!res) throw ProviderError("live provider request failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw ProviderError("live provider returned status " + std::to_string(res->status));
  return res->body;
}

void TranscriptLog::record(const LmRequest& req, const std::string& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.push_back({req, response});
}

void TranscriptLog::write_to(const fs::path& dir) const {
  fs::create_directories(dir);
  for (size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    nlohmann::json j = {{"role", e.req.role},
                        {"scenario", e.req.scenario},
                        {"turn", e.req.turn},
                        {"prompt", e.req.prompt},
                        {"response", e.response}};
    std::ostringstream name;
    name << (i < 10 ? "0" : "") << i << "_" << sanitize_for_filename(e.req.role) << "_turn"
         << e.req.turn << ".json";
    std::ofstream out(dir / name.str(), std::ios::binary);
    out << j.dump(2) << "\n";
  }
}

std::string LoggingProvider::request(const LmRequest& req) const {
  std::string response = inner_.request(req);
  log_.record(req, response);
  return response;
}

}  // namespace mrplan

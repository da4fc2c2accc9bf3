#include "auglang/pipeline/generation.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <thread>

#include "auglang/error.hpp"
#include "auglang/genfilter/filter.hpp"
#include "httplib.h"
#include "json.hpp"

namespace auglang::pipeline {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(http://[^/\s]+)(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw Error("invalid_url", "endpoint must be an http:// URL, got '" + url + "'");
  }
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

void check_line(const std::string& g) {
  if (g.find_first_of("\r\n") != std::string::npos) {
    throw Error("malformed_response", "generation contains a line break");
  }
}

std::vector<std::string> post_batch(const ParsedUrl& url, const EndpointOptions& o,
                                    const std::vector<std::string>& batch) {
  httplib::Client client(url.origin);
  const auto secs = o.timeout_ms / 1000, usecs = (o.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  const std::string body = nlohmann::json{{"prompts", batch}}.dump();

  int backoff = o.backoff_ms;
  std::string last_failure;
  for (int attempt = 0; attempt <= o.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    const auto res = client.Post(url.path, body, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error("http_error", "endpoint answered HTTP " + std::to_string(res->status));
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("malformed_response", std::string("response is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("generations") || !j["generations"].is_array()) {
      throw Error("malformed_response", "response lacks a 'generations' array");
    }
    std::vector<std::string> out;
    for (const auto& g : j["generations"]) {
      if (!g.is_string()) throw Error("malformed_response", "generation is not a string");
      out.push_back(g.get<std::string>());
      check_line(out.back());
    }
    if (out.size() != batch.size()) {
      throw Error("length_mismatch", "endpoint returned " + std::to_string(out.size()) +
                                         " generations for " + std::to_string(batch.size()) +
                                         " prompts");
    }
    return out;
  }
  throw Error("network_timeout", "endpoint failed after " + std::to_string(o.max_retries + 1) +
                                     " attempts: " + last_failure);
}

}  // namespace

std::vector<std::string> generations_from_file(const std::filesystem::path& path,
                                               std::size_t expected) {
  auto lines = genfilter::read_generation_lines(path);
  if (lines.size() != expected) {
    throw Error("length_mismatch", "generation file has " + std::to_string(lines.size()) +
                                       " lines for " + std::to_string(expected) + " prompts");
  }
  return lines;
}

std::vector<std::string> generations_from_endpoint(const std::vector<std::string>& prompts,
                                                   const EndpointOptions& options) {
  const auto url = parse_url(options.url);
  if (options.batch_size == 0 || options.parallelism < 1 || options.max_retries < 0 ||
      options.timeout_ms < 1) {
    throw Error("invalid_argument", "batch size, parallelism and timeout must be positive");
  }
  const std::size_t batches = (prompts.size() + options.batch_size - 1) / options.batch_size;
  std::vector<std::string> out(prompts.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t b; !failed && (b = next++) < batches;) {
      const std::size_t lo = b * options.batch_size;
      const std::size_t hi = std::min(prompts.size(), lo + options.batch_size);
      try {
        auto got = post_batch(url, options,
                              std::vector<std::string>(prompts.begin() + lo, prompts.begin() + hi));
        std::move(got.begin(), got.end(), out.begin() + lo);
      } catch (...) {
        std::lock_guard lock(error_mu);
        // First error wins; workers stop picking up batches.
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(options.parallelism), batches);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

void write_generations_file(const std::filesystem::path& path,
                            const std::vector<std::string>& generations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  for (const auto& g : generations) {
    check_line(g);
    out << g << '\n';
  }
  if (!out) throw Error("io_error", "failed writing '" + path.string() + "'");
}

}  // namespace auglang::pipeline

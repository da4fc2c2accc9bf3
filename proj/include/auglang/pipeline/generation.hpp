#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace auglang::pipeline {

struct EndpointOptions {
  std::string url;  // http://host[:port][/path]
  int timeout_ms = 30000;
  int max_retries = 3;     // extra attempts after the first
  int backoff_ms = 250;    // doubled after each failed attempt
  std::size_t batch_size = 64;
  int parallelism = 4;     // concurrent requests
};

/// File mode: reads one generation per line and checks the count against
/// `expected`. Throws "length_mismatch".
std::vector<std::string> generations_from_file(const std::filesystem::path& path,
                                               std::size_t expected);

/// Endpoint mode: POSTs {"prompts": [...]} per batch and expects
/// {"generations": [...]} of equal length. Connection failures, timeouts, 429
/// and 5xx are retried with exponential backoff. Errors: "length_mismatch",
/// "malformed_response", "http_error", "network_timeout", "invalid_url".
std::vector<std::string> generations_from_endpoint(const std::vector<std::string>& prompts,
                                                   const EndpointOptions& options);

/// One generation per line, newline-terminated. Rejects embedded newlines.
void write_generations_file(const std::filesystem::path& path,
                            const std::vector<std::string>& generations);

}  // namespace auglang::pipeline

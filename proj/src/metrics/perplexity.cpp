#include "auglang/metrics/perplexity.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "auglang/error.hpp"
#include "json.hpp"

namespace auglang::metrics {

double perplexity(const std::vector<LogprobRecord>& records) {
  double sum = 0;
  std::size_t count = 0;
  for (const auto& rec : records) {
    for (const double lp : rec) {
      if (!std::isfinite(lp)) throw Error("non_finite", "log-probability is not finite");
      sum += lp;
    }
    count += rec.size();
  }
  if (count == 0) throw Error("empty_input", "perplexity needs at least one token");
  return std::exp(-sum / static_cast<double>(count));
}

std::vector<LogprobRecord> read_logprob_jsonl(std::istream& in) {
  std::vector<LogprobRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "logprob line " + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("logprob_format", where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("logprobs") || !obj["logprobs"].is_array()) {
      throw Error("logprob_format", where + ": expected an object with a 'logprobs' array");
    }
    LogprobRecord rec;
    for (const auto& v : obj["logprobs"]) {
      if (!v.is_number()) throw Error("logprob_format", where + ": non-numeric log-probability");
      const double lp = v.get<double>();
      if (!std::isfinite(lp)) throw Error("non_finite", where + ": log-probability is not finite");
      rec.push_back(lp);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<LogprobRecord> read_logprob_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("file_not_found", "cannot open logprob file '" + path.string() + "'");
  return read_logprob_jsonl(in);
}

void write_logprob_jsonl(std::ostream& out, const std::vector<LogprobRecord>& records) {
  for (const auto& rec : records) out << nlohmann::json{{"logprobs", rec}}.dump() << '\n';
}

}  // namespace auglang::metrics

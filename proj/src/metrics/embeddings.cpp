#include "auglang/metrics/embeddings.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "auglang/error.hpp"

namespace auglang::metrics {
namespace {

static_assert(std::numeric_limits<float>::is_iec559);

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void store_u32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

EmbeddingMatrix read_emb1(std::istream& in) {
  std::array<unsigned char, 12> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    throw Error("emb1_format", "truncated EMB1 header");
  }
  if (std::memcmp(header.data(), "EMB1", 4) != 0) throw Error("emb1_format", "bad EMB1 magic");
  const std::uint64_t n = load_u32(header.data() + 4);
  const std::uint64_t d = load_u32(header.data() + 8);
  const std::uint64_t count = n * d;
  // Check the declared size against what the stream holds before allocating.
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
    in.seekg(here);
    if (remaining < count * 4) {
      throw Error("emb1_format", "truncated EMB1 payload: expected " + std::to_string(n) + "x" +
                                    std::to_string(d) + " values");
    }
    if (remaining > count * 4) throw Error("emb1_format", "trailing bytes after EMB1 payload");
  }
  std::vector<unsigned char> payload(count * 4);
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(payload.size()))) {
    throw Error("emb1_format", "truncated EMB1 payload: expected " + std::to_string(n) + "x" +
                                   std::to_string(d) + " values");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error("emb1_format", "trailing bytes after EMB1 payload");
  }
  EmbeddingMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::uint64_t k = 0; k < count; ++k) {
    const float v = std::bit_cast<float>(load_u32(payload.data() + 4 * k));
    if (!std::isfinite(v)) {
      throw Error("non_finite", "non-finite EMB1 value at row " + std::to_string(k / d));
    }
    m(static_cast<Eigen::Index>(k / d), static_cast<Eigen::Index>(k % d)) = v;
  }
  return m;
}

EmbeddingMatrix read_emb1_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open embedding file '" + path.string() + "'");
  return read_emb1(in);
}

void write_emb1(std::ostream& out, const EmbeddingMatrix& m) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
    throw Error("emb1_format", "matrix too large for EMB1");
  }
  std::vector<unsigned char> buf(12 + 4 * static_cast<std::size_t>(m.size()));
  std::memcpy(buf.data(), "EMB1", 4);
  store_u32(buf.data() + 4, static_cast<std::uint32_t>(m.rows()));
  store_u32(buf.data() + 8, static_cast<std::uint32_t>(m.cols()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j, ++k) {
      const float v = static_cast<float>(m(i, j));
      if (!std::isfinite(v)) throw Error("non_finite", "cannot write non-finite embedding value");
      store_u32(buf.data() + 12 + 4 * k, std::bit_cast<std::uint32_t>(v));
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("io_error", "failed writing EMB1");
}

void write_emb1_file(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write embedding file '" + path.string() + "'");
  write_emb1(out, m);
}

}  // namespace auglang::metrics

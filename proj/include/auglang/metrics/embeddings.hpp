#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

namespace auglang::metrics {

/// n x d, one sentence embedding per row.
using EmbeddingMatrix = Eigen::MatrixXd;

// EMB1: "EMB1", u32 LE n, u32 LE d, n*d float32 LE row-major. Nothing may
// follow the payload; every value must be finite.
EmbeddingMatrix read_emb1(std::istream& in);
EmbeddingMatrix read_emb1_file(const std::filesystem::path& path);
/// Values are narrowed to float32.
void write_emb1(std::ostream& out, const EmbeddingMatrix& m);
void write_emb1_file(const std::filesystem::path& path, const EmbeddingMatrix& m);

}  // namespace auglang::metrics

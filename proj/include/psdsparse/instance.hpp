#pragma once

// Isotropic PSD families: weights lambda_i on the simplex and PSD matrices A_i
// with sum lambda_i A_i = Id. Instances only exist in validated form.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psdsparse/symmat.hpp"

namespace psdsparse {

inline constexpr double kSimplexTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kIsotropyTol = 1e-8;
inline constexpr double kAsymmetryTol = 1e-9;

// Decoded but unchecked file content.
struct RawItem {
  double lambda = 0.0;
  std::vector<std::vector<double>> a;
};

struct RawInstance {
  std::int64_t d = 0;
  std::vector<RawItem> items;
  std::optional<double> norm_bound;  // advisory "M" field
};

class Instance {
 public:
  std::size_t dim() const { return d_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<SymMatrix>& matrices() const { return matrices_; }
  // max_i ||A_i||, always recomputed from the data.
  double norm_bound() const { return norm_bound_; }

  // Same family with items reordered: item r of the result is item perm[r].
  Instance permuted(const std::vector<std::size_t>& perm) const;

 private:
  friend Instance validate_family(std::size_t, std::vector<double>, std::vector<SymMatrix>,
                                  std::optional<double>);
  Instance() = default;

  std::size_t d_ = 0;
  std::vector<double> weights_;
  std::vector<SymMatrix> matrices_;
  double norm_bound_ = 0.0;
};

// Checks dimensions and symmetry, then defers to validate_family.
Instance validate(const RawInstance& raw);

// Checks weights on the simplex, each A_i PSD, isotropy, and a user-supplied
// norm bound (if any) against the computed one.
Instance validate_family(std::size_t d, std::vector<double> weights, std::vector<SymMatrix> matrices,
                         std::optional<double> user_norm_bound = std::nullopt);

// X_i = A_i - Id together with the bounds the one-step inequality needs:
// ||X_i|| <= m1 and sum lambda_i X_i^2 <= m2 Id. For a PSD instance
// m1 = m2 = M; free-standing families carry data-derived m1, m2.
class CenteredFamily {
 public:
  std::size_t dim() const { return d_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<SymMatrix>& centered() const { return centered_; }
  double m1() const { return m1_; }
  double m2() const { return m2_; }
  const Instance* parent() const { return parent_.get(); }

  // Weighted mean zero is certified; m1 = max ||X_i|| and
  // m2 = max(lambda_max(sum lambda_i X_i^2), 0).
  static CenteredFamily from_centered(std::vector<double> weights, std::vector<SymMatrix> xs);

 private:
  friend CenteredFamily center(const Instance& inst);
  CenteredFamily() = default;

  std::size_t d_ = 0;
  std::vector<double> weights_;
  std::vector<SymMatrix> centered_;
  double m1_ = 0.0;
  double m2_ = 0.0;
  std::shared_ptr<const Instance> parent_;
};

CenteredFamily center(const Instance& inst);

// JSON: {"d": int, "items": [{"lambda": float, "A": [[...], ...]}, ...], "M"?: float}
RawInstance parse_instance_json(const std::string& text);
std::string encode_instance_json(const Instance& inst);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& inst);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;
};

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

// Text lines "u v w" with 0-based vertex ids; '#' starts a comment.
Graph parse_edge_list(const std::string& text);
Graph load_edge_list(const std::filesystem::path& path);

// Random spanning tree plus extra distinct edges, weights in [0.5, 2].
Graph random_connected_graph(std::size_t n, std::size_t n_edges, std::uint64_t seed);

// Haar-distributed d x d orthogonal matrix.
Eigen::MatrixXd haar_orthogonal(std::size_t d, std::uint64_t seed);

// m = n_bases * d rank-one terms d u u^T over the columns of independent
// Haar orthogonal matrices, all weights 1/m; M = d.
Instance gen_bases(std::size_t d, std::size_t n_bases, std::uint64_t seed);

// A_i = S^{-1/2} G_i G_i^T S^{-1/2} for Gaussian d x rank G_i and
// S = mean_i G_i G_i^T, redrawn (up to 16 times) while cond(S) > cond_cap.
Instance gen_random_psd(std::size_t d, std::size_t m, std::size_t rank, double cond_cap,
                        std::uint64_t seed);

// Leverage-score decomposition of a connected graph Laplacian restricted to
// its range, d = n - 1. The seed picks a random orthonormal basis of the range.
Instance gen_graph_edges(const Graph& graph, std::uint64_t seed);

}  // namespace psdsparse

#include "psdsparse/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "psdsparse/rng.hpp"

namespace psdsparse {

namespace {

std::string item_label(std::size_t i) { return "item " + std::to_string(i + 1); }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << x;
  return os.str();
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd g(rows, cols);
  // Column-major fill order is part of the generator's reproducibility.
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = rng.normal();
  return g;
}

}  // namespace

Instance Instance::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != size()) throw Error(ErrorKind::DimensionMismatch, "permutation length");
  Instance out = *this;
  for (std::size_t r = 0; r < perm.size(); ++r) {
    out.weights_[r] = weights_.at(perm[r]);
    out.matrices_[r] = matrices_.at(perm[r]);
  }
  return out;
}

Instance validate(const RawInstance& raw) {
  if (raw.d < 1) throw Error(ErrorKind::DimensionMismatch, "d must be >= 1, got " + std::to_string(raw.d));
  const auto d = static_cast<std::size_t>(raw.d);
  std::vector<double> weights;
  std::vector<SymMatrix> mats;
  weights.reserve(raw.items.size());
  mats.reserve(raw.items.size());
  for (std::size_t i = 0; i < raw.items.size(); ++i) {
    const RawItem& item = raw.items[i];
    if (item.a.size() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  item_label(i) + " has " + std::to_string(item.a.size()) + " rows, expected " + std::to_string(d));
    }
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd a(n, n);
    for (std::size_t j = 0; j < d; ++j) {
      if (item.a[j].size() != d) {
        throw Error(ErrorKind::DimensionMismatch, item_label(i) + " row " + std::to_string(j + 1) + " has " +
                                                      std::to_string(item.a[j].size()) + " columns");
      }
      for (std::size_t l = 0; l < d; ++l) a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = item.a[j][l];
    }
    if (!a.allFinite()) throw Error(ErrorKind::NonFinite, item_label(i) + " has NaN or Inf entries");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > kAsymmetryTol * scale) {
      throw Error(ErrorKind::NotSymmetric, item_label(i) + " asymmetry " + fmt_double(asym));
    }
    weights.push_back(item.lambda);
    mats.emplace_back(std::move(a));
  }
  return validate_family(d, std::move(weights), std::move(mats), raw.norm_bound);
}

Instance validate_family(std::size_t d, std::vector<double> weights, std::vector<SymMatrix> matrices,
                         std::optional<double> user_norm_bound) {
  if (d < 1) throw Error(ErrorKind::DimensionMismatch, "d must be >= 1");
  if (weights.size() != matrices.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weights and matrices differ in length");
  }
  if (weights.empty()) throw Error(ErrorKind::WeightsNotSimplex, "family is empty");

  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(ErrorKind::WeightsNotSimplex, item_label(i) + " has lambda " + fmt_double(weights[i]));
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw Error(ErrorKind::WeightsNotSimplex, "sum of lambda is " + fmt_double(total));
  }

  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  double norm_bound = 0.0;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i].dim() != d) {
      throw Error(ErrorKind::DimensionMismatch, item_label(i) + " has dimension " + std::to_string(matrices[i].dim()));
    }
    const Eigen::VectorXd mu = eigvalsh(matrices[i]);
    const double norm = std::max(std::abs(mu[0]), std::abs(mu[mu.size() - 1]));
    if (mu[0] < -kPsdTol * (1.0 + norm)) {
      throw Error(ErrorKind::NotPSD, item_label(i) + " has eigenvalue " + fmt_double(mu[0]));
    }
    norm_bound = std::max(norm_bound, norm);
    sum += weights[i] * matrices[i].mat();
  }
  const double residual = op_norm(SymMatrix(sum - Eigen::MatrixXd::Identity(n, n)));
  if (residual > kIsotropyTol) {
    throw Error(ErrorKind::NotIsotropic, "||sum lambda_i A_i - Id|| = " + fmt_double(residual));
  }
  if (norm_bound < 1.0 - kSimplexTol) {
    throw Error(ErrorKind::NotIsotropic, "max ||A_i|| = " + fmt_double(norm_bound) + " < 1");
  }
  if (user_norm_bound && *user_norm_bound < norm_bound - kPsdTol * (1.0 + norm_bound)) {
    throw Error(ErrorKind::NormBoundTooSmall,
                "stated M " + fmt_double(*user_norm_bound) + " < max ||A_i|| " + fmt_double(norm_bound));
  }

  Instance inst;
  inst.d_ = d;
  inst.weights_ = std::move(weights);
  inst.matrices_ = std::move(matrices);
  inst.norm_bound_ = norm_bound;
  return inst;
}

CenteredFamily CenteredFamily::from_centered(std::vector<double> weights, std::vector<SymMatrix> xs) {
  if (xs.empty()) throw Error(ErrorKind::EmptyFamily, "no centered matrices");
  if (weights.size() != xs.size()) throw Error(ErrorKind::DimensionMismatch, "weights and matrices differ in length");
  const std::size_t d = xs.front().dim();
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  double m1 = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_same_dim(xs.front(), xs[i]);
    mean += weights[i] * xs[i].mat();
    second += weights[i] * xs[i].mat() * xs[i].mat();
    m1 = std::max(m1, op_norm(xs[i]));
    scale = std::max(scale, xs[i].frobenius());
  }
  const double drift = op_norm(SymMatrix(mean));
  if (drift > kIsotropyTol * (1.0 + scale)) {
    throw Error(ErrorKind::CenteringCertificateFailed, "weighted mean has norm " + fmt_double(drift));
  }
  CenteredFamily fam;
  fam.d_ = d;
  fam.weights_ = std::move(weights);
  fam.centered_ = std::move(xs);
  fam.m1_ = m1;
  fam.m2_ = std::max(0.0, lambda_max(SymMatrix(second)));
  return fam;
}

CenteredFamily center(const Instance& inst) {
  const std::size_t d = inst.dim();
  const double big_m = inst.norm_bound();
  const SymMatrix id = SymMatrix::identity(d);
  const auto n = static_cast<Eigen::Index>(d);

  CenteredFamily fam;
  fam.d_ = d;
  fam.weights_ = inst.weights();
  fam.centered_.reserve(inst.size());
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    SymMatrix x = inst.matrices()[i] - id;
    if (op_norm(x) > big_m + 1e-9) {
      throw Error(ErrorKind::CenteringCertificateFailed, "norm bound fails for " + item_label(i));
    }
    mean += inst.weights()[i] * x.mat();
    second += inst.weights()[i] * x.mat() * x.mat();
    fam.centered_.push_back(std::move(x));
  }
  if (op_norm(SymMatrix(mean)) > kIsotropyTol) {
    throw Error(ErrorKind::CenteringCertificateFailed, "mean-zero");
  }
  if (!loewner_leq(SymMatrix(second), big_m * id, kIsotropyTol)) {
    throw Error(ErrorKind::CenteringCertificateFailed, "square bound");
  }
  fam.m1_ = big_m;
  fam.m2_ = big_m;
  fam.parent_ = std::make_shared<const Instance>(inst);
  return fam;
}

RawInstance parse_instance_json(const std::string& text) {
  using nlohmann::json;
  RawInstance raw;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "top level must be an object");
    if (!j.contains("d") || !j.at("d").is_number_integer()) {
      throw Error(ErrorKind::ParseError, "\"d\" must be an integer");
    }
    raw.d = j.at("d").get<std::int64_t>();
    if (!j.contains("items") || !j.at("items").is_array()) {
      throw Error(ErrorKind::ParseError, "\"items\" must be an array");
    }
    for (const json& it : j.at("items")) {
      RawItem item;
      if (!it.contains("lambda") || !it.at("lambda").is_number()) {
        throw Error(ErrorKind::ParseError, "item without numeric \"lambda\"");
      }
      item.lambda = it.at("lambda").get<double>();
      if (!it.contains("A") || !it.at("A").is_array()) throw Error(ErrorKind::ParseError, "item without \"A\" rows");
      for (const json& row : it.at("A")) {
        if (!row.is_array()) throw Error(ErrorKind::ParseError, "\"A\" rows must be arrays");
        std::vector<double> r;
        r.reserve(row.size());
        for (const json& x : row) {
          if (!x.is_number()) throw Error(ErrorKind::ParseError, "non-numeric matrix entry");
          r.push_back(x.get<double>());
        }
        item.a.push_back(std::move(r));
      }
      raw.items.push_back(std::move(item));
    }
    if (j.contains("M")) {
      if (!j.at("M").is_number()) throw Error(ErrorKind::ParseError, "\"M\" must be a number");
      raw.norm_bound = j.at("M").get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return raw;
}

std::string encode_instance_json(const Instance& inst) {
  using nlohmann::json;
  json items = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const SymMatrix& a = inst.matrices()[i];
    json rows = json::array();
    for (std::size_t j = 0; j < inst.dim(); ++j) {
      json row = json::array();
      for (std::size_t l = 0; l < inst.dim(); ++l) row.push_back(a(j, l));
      rows.push_back(std::move(row));
    }
    items.push_back({{"lambda", inst.weights()[i]}, {"A", std::move(rows)}});
  }
  json j = {{"d", inst.dim()}, {"M", inst.norm_bound()}, {"items", std::move(items)}};
  return j.dump() + "\n";
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

Instance load_instance(const std::filesystem::path& path) { return validate(parse_instance_json(read_file(path))); }

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << encode_instance_json(inst);
}

Graph parse_edge_list(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 3) throw Error(ErrorKind::ParseError, "edge list line " + std::to_string(lineno) + ": expected \"u v w\"");
    Edge e;
    try {
      std::size_t pos = 0;
      const long long u = std::stoll(toks[0], &pos);
      if (pos != toks[0].size() || u < 0) throw std::invalid_argument("u");
      const long long v = std::stoll(toks[1], &pos);
      if (pos != toks[1].size() || v < 0) throw std::invalid_argument("v");
      e.w = std::stod(toks[2], &pos);
      if (pos != toks[2].size()) throw std::invalid_argument("w");
      e.u = static_cast<std::size_t>(u);
      e.v = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "edge list line " + std::to_string(lineno) + ": bad number");
    }
    g.n = std::max({g.n, e.u + 1, e.v + 1});
    g.edges.push_back(e);
  }
  return g;
}

Graph load_edge_list(const std::filesystem::path& path) { return parse_edge_list(read_file(path)); }

Graph random_connected_graph(std::size_t n, std::size_t n_edges, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::DomainError, "graph needs n >= 2");
  const std::size_t max_edges = n * (n - 1) / 2;
  if (n_edges < n - 1 || n_edges > max_edges) {
    throw Error(ErrorKind::DomainError, "edge count must lie in [n-1, n(n-1)/2]");
  }
  Rng rng(seed);
  Graph g;
  g.n = n;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add = [&](std::size_t u, std::size_t v) {
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) return false;
    g.edges.push_back({u, v, rng.uniform(0.5, 2.0)});
    return true;
  };
  for (std::size_t v = 1; v < n; ++v) add(static_cast<std::size_t>(rng.below(v)), v);
  while (g.edges.size() < n_edges) {
    const auto u = static_cast<std::size_t>(rng.below(n));
    const auto v = static_cast<std::size_t>(rng.below(n));
    if (u != v) add(u, v);
  }
  return g;
}

Eigen::MatrixXd haar_orthogonal(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(d);
  const Eigen::MatrixXd g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Instance gen_bases(std::size_t d, std::size_t n_bases, std::uint64_t seed) {
  if (d < 1 || n_bases < 1) throw Error(ErrorKind::DomainError, "gen_bases needs d >= 1 and n_bases >= 1");
  const std::size_t m = n_bases * d;
  std::vector<double> weights(m, 1.0 / static_cast<double>(m));
  std::vector<SymMatrix> mats;
  mats.reserve(m);
  const double dd = static_cast<double>(d);
  for (std::size_t b = 0; b < n_bases; ++b) {
    const Eigen::MatrixXd q = haar_orthogonal(d, Rng::derive(seed, b));
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      mats.emplace_back(dd * q.col(c) * q.col(c).transpose());
    }
  }
  return validate_family(d, std::move(weights), std::move(mats));
}

Instance gen_random_psd(std::size_t d, std::size_t m, std::size_t rank, double cond_cap, std::uint64_t seed) {
  if (d < 1 || m < 1 || rank < 1) throw Error(ErrorKind::DomainError, "gen_random_psd needs d, m, rank >= 1");
  if (!(cond_cap >= 1.0)) throw Error(ErrorKind::DomainError, "cond_cap must be >= 1");
  constexpr int kMaxAttempts = 16;
  const auto n = static_cast<Eigen::Index>(d);
  const double w = 1.0 / static_cast<double>(m);
  std::string last_failure = "condition number above cap";
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<Eigen::MatrixXd> bs;
    bs.reserve(m);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::MatrixXd g = gaussian_matrix(n, static_cast<Eigen::Index>(rank), rng);
      bs.push_back(g * g.transpose());
      s += w * bs.back();
    }
    const Spectrum sp = eigh(SymMatrix(s));
    const double lo = sp.eigenvalues[0];
    const double hi = sp.eigenvalues[n - 1];
    if (!(lo > 0.0) || hi / lo > cond_cap) continue;
    const Eigen::VectorXd inv_sqrt = sp.eigenvalues.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd s_inv_half = sp.eigenvectors * inv_sqrt.asDiagonal() * sp.eigenvectors.transpose();
    std::vector<SymMatrix> mats;
    mats.reserve(m);
    for (const auto& b : bs) mats.emplace_back(s_inv_half * b * s_inv_half);
    try {
      return validate_family(d, std::vector<double>(m, w), std::move(mats));
    } catch (const Error& e) {
      last_failure = e.what();
    }
  }
  throw Error(ErrorKind::IsotropicTransformFailed,
              "no acceptable draw in " + std::to_string(kMaxAttempts) + " attempts (" + last_failure + ")");
}

Instance gen_graph_edges(const Graph& graph, std::uint64_t seed) {
  const std::size_t nv = graph.n;
  if (nv < 2) throw Error(ErrorKind::InvalidGraph, "need at least 2 vertices");
  if (graph.edges.empty()) throw Error(ErrorKind::InvalidGraph, "no edges");
  const auto n = static_cast<Eigen::Index>(nv);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const Edge& e = graph.edges[k];
    if (e.u >= nv || e.v >= nv || e.u == e.v || !(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ErrorKind::InvalidGraph, "edge " + std::to_string(k + 1) + " is a self-loop, out of range or has weight <= 0");
    }
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    lap(u, u) += e.w;
    lap(v, v) += e.w;
    lap(u, v) -= e.w;
    lap(v, u) -= e.w;
  }
  const Spectrum sp = eigh(SymMatrix(lap));
  const double top = sp.eigenvalues[n - 1];
  if (!(sp.eigenvalues[1] > 1e-9 * top)) {
    throw Error(ErrorKind::Disconnected, "Laplacian rank below n-1");
  }
  const Eigen::Index d = n - 1;
  // Rows of `embed` map a vertex indicator into range(L), whitened by L^{+/2}.
  const Eigen::VectorXd inv_sqrt = sp.eigenvalues.tail(d).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd embed = inv_sqrt.asDiagonal() * sp.eigenvectors.rightCols(d).transpose();
  embed = haar_orthogonal(static_cast<std::size_t>(d), seed) * embed;

  const double dd = static_cast<double>(d);
  std::vector<double> weights;
  std::vector<SymMatrix> mats;
  for (const Edge& e : graph.edges) {
    const Eigen::VectorXd v = embed.col(static_cast<Eigen::Index>(e.u)) - embed.col(static_cast<Eigen::Index>(e.v));
    const double leverage = e.w * v.squaredNorm();
    weights.push_back(leverage / dd);
    mats.emplace_back(dd * (e.w / leverage) * v * v.transpose());
  }
  // Leverage scores sum to n-1 exactly in exact arithmetic; remove the rounding.
  double total = 0.0;
  for (double x : weights) total += x;
  for (double& x : weights) x /= total;
  return validate_family(static_cast<std::size_t>(d), std::move(weights), std::move(mats));
}

}  // namespace psdsparse

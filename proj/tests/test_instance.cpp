#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "psdsparse/instance.hpp"
#include "test_support.hpp"

using namespace psdsparse;

namespace {

RawInstance raw_of(std::int64_t d, std::vector<std::pair<double, std::vector<std::vector<double>>>> items) {
  RawInstance raw;
  raw.d = d;
  for (auto& [lambda, a] : items) raw.items.push_back({lambda, std::move(a)});
  return raw;
}

RawInstance canonical_raw() { return raw_of(2, {{0.5, {{2, 0}, {0, 0}}}, {0.5, {{0, 0}, {0, 2}}}}); }

ErrorKind kind_of(const RawInstance& raw) {
  try {
    validate(raw);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected validation to fail");
  return ErrorKind::IoError;
}

void check_centering_invariants(const Instance& inst) {
  const CenteredFamily fam = center(inst);
  const std::size_t d = inst.dim();
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd sq_x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd sq_a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double w = inst.weights()[i];
    sq_x += w * fam.centered()[i].mat() * fam.centered()[i].mat();
    sq_a += w * inst.matrices()[i].mat() * inst.matrices()[i].mat();
    CHECK(op_norm(fam.centered()[i]) <= inst.norm_bound() + 1e-9);
  }
  // sum lambda X^2 = sum lambda A^2 - Id
  CHECK((sq_x - (sq_a - Eigen::MatrixXd::Identity(n, n))).norm() <= 1e-9 * (1.0 + sq_a.norm()));
  CHECK(loewner_leq(SymMatrix(sq_x), inst.norm_bound() * SymMatrix::identity(d), 1e-8));
}

}  // namespace

TEST_CASE("validate accepts well-formed families") {
  const Instance one = validate(raw_of(1, {{1.0, {{1.0}}}}));
  CHECK(one.norm_bound() == doctest::Approx(1.0));

  const Instance canon = validate(canonical_raw());
  CHECK(canon.dim() == 2);
  CHECK(canon.size() == 2);
  CHECK(canon.norm_bound() == doctest::Approx(2.0));

  // A stored M above the true value is advisory only.
  RawInstance with_m = canonical_raw();
  with_m.norm_bound = 5.0;
  CHECK(validate(with_m).norm_bound() == doctest::Approx(2.0));
}

TEST_CASE("validate names the violated condition") {
  CHECK(kind_of(raw_of(2, {{0.5, {{2, 0}, {0, 0}}}, {0.5, {{0, 0}, {0, 1}}}})) == ErrorKind::NotIsotropic);
  CHECK(kind_of(raw_of(2, {{0.5, {{2, 1}, {0, 0}}}, {0.5, {{0, 0}, {0, 2}}}})) == ErrorKind::NotSymmetric);
  CHECK(kind_of(raw_of(2, {{0.5, {{3, 0}, {0, -1}}}, {0.5, {{-1, 0}, {0, 3}}}})) == ErrorKind::NotPSD);
  CHECK(kind_of(raw_of(2, {{0.6, {{2, 0}, {0, 0}}}, {0.5, {{0, 0}, {0, 2}}}})) == ErrorKind::WeightsNotSimplex);
  CHECK(kind_of(raw_of(2, {{1.5, {{1, 0}, {0, 1}}}, {-0.5, {{1, 0}, {0, 1}}}})) == ErrorKind::WeightsNotSimplex);
  CHECK(kind_of(raw_of(2, {{1.0, {{1, 0, 0}, {0, 1, 0}}}})) == ErrorKind::DimensionMismatch);
  CHECK(kind_of(raw_of(0, {})) == ErrorKind::DimensionMismatch);
  CHECK(kind_of(raw_of(1, {})) == ErrorKind::WeightsNotSimplex);

  RawInstance small_m = canonical_raw();
  small_m.norm_bound = 1.5;
  CHECK(kind_of(small_m) == ErrorKind::NormBoundTooSmall);

  // Asymmetry at 1e-12 is rounding noise and is symmetrised away.
  CHECK_NOTHROW(validate(raw_of(2, {{0.5, {{2, 1e-12}, {0, 0}}}, {0.5, {{0, 0}, {0, 2}}}})));
}

TEST_CASE("JSON parsing") {
  const RawInstance raw = parse_instance_json(
      R"({"d": 2, "M": 2.0, "items": [{"lambda": 0.5, "A": [[2, 0], [0, 0]]}, {"lambda": 0.5, "A": [[0, 0], [0, 2]]}]})");
  CHECK(raw.d == 2);
  CHECK(raw.items.size() == 2);
  REQUIRE(raw.norm_bound.has_value());
  CHECK(*raw.norm_bound == 2.0);
  CHECK_NOTHROW(validate(raw));

  for (const char* bad : {"{", "[]", R"({"d": 1.5, "items": []})", R"({"d": 1, "items": [{"A": [[1]]}]})",
                          R"({"d": 1, "items": [{"lambda": 1, "A": [["x"]]}]})"}) {
    try {
      parse_instance_json(bad);
      FAIL("expected ParseError for " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}

TEST_CASE("encode then validate round-trips") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance a = gen_random_psd(5, 7, 2, 1e6, seed);
    const Instance b = validate(parse_instance_json(encode_instance_json(a)));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a.weights()[i] - b.weights()[i]) <= 1e-12);
      CHECK((a.matrices()[i].mat() - b.matrices()[i].mat()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "psdsparse_roundtrip.json";
  save_instance(path, gen_bases(3, 2, 1));
  CHECK(load_instance(path).size() == 6);
  std::filesystem::remove(path);
}

TEST_CASE("center") {
  const CenteredFamily fam = center(validate(canonical_raw()));
  CHECK(fam.centered()[0] == SymMatrix::diagonal({1.0, -1.0}));
  CHECK(fam.centered()[1] == SymMatrix::diagonal({-1.0, 1.0}));
  CHECK(fam.m1() == doctest::Approx(2.0));
  CHECK(fam.m2() == doctest::Approx(2.0));
  REQUIRE(fam.parent() != nullptr);
  CHECK(fam.parent()->size() == 2);

  const CenteredFamily single = center(validate(raw_of(3, {{1.0, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}})));
  CHECK(single.centered()[0] == SymMatrix::zero(3));

  check_centering_invariants(validate(canonical_raw()));
}

TEST_CASE("free-standing centered families") {
  const CenteredFamily fam = CenteredFamily::from_centered(
      {0.25, 0.75}, {SymMatrix::diagonal({3.0, -1.5}), SymMatrix::diagonal({-1.0, 0.5})});
  CHECK(fam.m1() == doctest::Approx(3.0));
  // 0.25 * 9 + 0.75 * 1 = 3, 0.25 * 2.25 + 0.75 * 0.25 = 0.75
  CHECK(fam.m2() == doctest::Approx(3.0));
  CHECK(fam.parent() == nullptr);
  CHECK_THROWS_AS(CenteredFamily::from_centered({0.5, 0.5}, {SymMatrix::identity(2), SymMatrix::zero(2)}), Error);
}

TEST_CASE("gen_bases") {
  for (std::size_t d : {1, 3, 7}) {
    const Instance inst = gen_bases(d, 1, 99);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < inst.size(); ++i) sum += inst.weights()[i] * inst.matrices()[i].mat();
    CHECK((sum - Eigen::MatrixXd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const Instance inst = gen_bases(4, 3, 7);
  CHECK(inst.size() == 12);
  for (const auto& a : inst.matrices()) CHECK(std::abs(op_norm(a) - 4.0) <= 1e-10);
  CHECK_NOTHROW(validate(parse_instance_json(encode_instance_json(gen_bases(8, 2, 0)))));

  // Same seed, same bits.
  CHECK(gen_bases(5, 2, 3).matrices()[4] == gen_bases(5, 2, 3).matrices()[4]);
}

TEST_CASE("gen_random_psd") {
  const Instance scalar = gen_random_psd(1, 2, 1, 1e6, 4);
  CHECK(scalar.dim() == 1);
  CHECK(scalar.matrices()[0](0, 0) >= 0.0);
  CHECK(scalar.matrices()[1](0, 0) >= 0.0);
  CHECK(0.5 * (scalar.matrices()[0](0, 0) + scalar.matrices()[1](0, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  for (std::uint64_t seed : {0, 1, 2}) {
    const Instance full = gen_random_psd(5, 1, 5, 1e6, seed);
    CHECK((full.matrices()[0] - SymMatrix::identity(5)).frobenius() <= 1e-9);
  }

  // m * rank < d: S is singular on every draw.
  try {
    gen_random_psd(4, 1, 2, 1e6, 0);
    FAIL("expected IsotropicTransformFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IsotropicTransformFailed);
  }
}

TEST_CASE("gen_graph_edges") {
  const Graph triangle{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}};
  const Instance tri = gen_graph_edges(triangle, 0);
  CHECK(tri.dim() == 2);
  CHECK(tri.size() == 3);
  for (std::size_t e = 0; e < 3; ++e) {
    CHECK(tri.weights()[e] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(op_norm(tri.matrices()[e]) == doctest::Approx(2.0).epsilon(1e-12));
  }

  const Instance path = gen_graph_edges(Graph{2, {{0, 1, 3.5}}}, 0);
  CHECK(path.dim() == 1);
  CHECK(path.weights()[0] == doctest::Approx(1.0));
  CHECK(path.matrices()[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  try {
    gen_graph_edges(Graph{4, {{0, 1, 1.0}, {2, 3, 1.0}}}, 0);
    FAIL("expected Disconnected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Disconnected);
  }
  CHECK_THROWS_AS(gen_graph_edges(Graph{2, {{0, 0, 1.0}, {0, 1, 1.0}}}, 0), Error);
  CHECK_THROWS_AS(gen_graph_edges(Graph{2, {{0, 1, -1.0}}}, 0), Error);
}

TEST_CASE("edge list format") {
  const Graph g = parse_edge_list("# triangle\n0 1 1.0\n1 2 2.5  # heavy\n\n0 2 1\n");
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.edges[1].w == 2.5);
  CHECK_THROWS_AS(parse_edge_list("0 1\n"), Error);
  CHECK_THROWS_AS(parse_edge_list("0 x 1\n"), Error);
  CHECK_THROWS_AS(parse_edge_list("-1 2 1\n"), Error);
}

TEST_CASE("generator fuzz sweep passes validation and centering") {
  Rng rng(2024);
  int count = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint64_t seed = rng.next_u64();
    Instance inst = [&] {
      switch (trial % 3) {
        case 0: return gen_bases(1 + rng.below(32), 1 + rng.below(3), seed);
        case 1: {
          const std::size_t d = 1 + rng.below(24);
          const std::size_t rank = 1 + rng.below(3);
          const std::size_t m = (d + rank - 1) / rank + rng.below(20);
          return gen_random_psd(d, m, rank, 1e6, seed);
        }
        default: {
          const std::size_t n = 2 + rng.below(31);
          const std::size_t extra = rng.below(n);
          return gen_graph_edges(random_connected_graph(n, std::min(n - 1 + extra, n * (n - 1) / 2), seed), seed);
        }
      }
    }();
    CHECK_NOTHROW(validate(parse_instance_json(encode_instance_json(inst))));
    check_centering_invariants(inst);
    ++count;
  }
  CHECK(count >= 100);
}

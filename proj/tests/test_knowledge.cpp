#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "beliefrev/gridworld.hpp"
#include "beliefrev/knowledge.hpp"
#include "beliefrev/rng.hpp"
#include "support/oracles.hpp"

using namespace beliefrev;
namespace fs = std::filesystem;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

double linf(const Distribution& a, const std::vector<double>& b) {
  REQUIRE(a.size() == static_cast<int>(b.size()));
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("knowledge matrix rejects non-stochastic rows and duplicate pairs") {
  CHECK_THROWS_AS(KnowledgeMatrix("x", "y", from_rows({{0.5, 0.6}, {0.5, 0.5}})), ConfigError);
  KnowledgeBase kb;
  kb.add(KnowledgeMatrix("x", "y", from_rows({{0.5, 0.5}})));
  CHECK_THROWS_AS(kb.add(KnowledgeMatrix("x", "y", from_rows({{1.0, 0.0}}))), ConfigError);
  CHECK_FALSE(kb.has_pair("x", "y"));
  kb.add(KnowledgeMatrix("y", "x", from_rows({{1.0}, {1.0}})));
  CHECK(kb.has_pair("x", "y"));
  CHECK(kb.has_pair("y", "x"));
}

TEST_CASE("uniform knowledge matrices have a uniform bias fixed point") {
  const KnowledgeMatrix y_given_x("x", "y", from_rows({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}));
  const KnowledgeMatrix x_given_y("y", "x",
                                  from_rows({{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                             {1.0 / 3, 1.0 / 3, 1.0 / 3}}));
  const auto pair = solve_bias(x_given_y, y_given_x);
  CHECK(linf(pair.x_bias, {1.0 / 3, 1.0 / 3, 1.0 / 3}) <= 1e-12);
  CHECK(linf(pair.y_bias, {0.5, 0.5}) <= 1e-12);
  CHECK(pair.residual <= 1e-10);
}

TEST_CASE("identity knowledge pair converges from the uniform start") {
  const KnowledgeMatrix y_given_x("x", "y", Matrix::identity(4));
  const KnowledgeMatrix x_given_y("y", "x", Matrix::identity(4));
  const auto pair = solve_bias(x_given_y, y_given_x);
  CHECK(pair.iterations == 1);
  CHECK(linf(pair.x_bias, {0.25, 0.25, 0.25, 0.25}) <= 1e-15);
  CHECK(linf(pair.y_bias, {0.25, 0.25, 0.25, 0.25}) <= 1e-15);
}

TEST_CASE("the 2x2 bias pair matches the closed-form stationary vector") {
  // Stationary vector of the composed map, solved by hand:
  // b_x = (46/79, 33/79), b_y = (48/79, 31/79).
  const KnowledgeMatrix y_given_x("x", "y", from_rows({{0.9, 0.1}, {0.2, 0.8}}));
  const KnowledgeMatrix x_given_y("y", "x", from_rows({{0.7, 0.3}, {0.4, 0.6}}));
  const auto pair = solve_bias(x_given_y, y_given_x);
  CHECK(linf(pair.x_bias, {46.0 / 79.0, 33.0 / 79.0}) <= 1e-8);
  CHECK(linf(pair.y_bias, {48.0 / 79.0, 31.0 / 79.0}) <= 1e-8);
  CHECK(pair.residual <= 1e-9);
}

TEST_CASE("solve_bias rejects mismatched pairs and reports non-convergence") {
  const KnowledgeMatrix y_given_x("x", "y", Matrix::identity(3));
  const KnowledgeMatrix x_given_z("z", "x", Matrix::identity(3));
  CHECK_THROWS_AS(solve_bias(x_given_z, y_given_x), ConfigError);

  // A slowly mixing chain cannot meet an extreme tolerance in three steps.
  const KnowledgeMatrix slow_yx("x", "y", from_rows({{0.99, 0.01}, {0.01, 0.99}}));
  const KnowledgeMatrix slow_xy("y", "x", from_rows({{0.99, 0.01}, {0.02, 0.98}}));
  try {
    solve_bias(slow_xy, slow_yx, 1e-15, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("power iteration agrees with the direct linear-solve oracle") {
  Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int nx = 2 + rng.next_int(12);
    const int ny = 2 + rng.next_int(12);
    const KnowledgeMatrix y_given_x("x", "y",
                                    testsupport::random_row_stochastic(rng, nx, ny));
    const KnowledgeMatrix x_given_y("y", "x",
                                    testsupport::random_row_stochastic(rng, ny, nx));
    const auto pair = solve_bias(x_given_y, y_given_x);
    CHECK(pair.residual <= 1e-8);
    const auto direct =
        testsupport::stationary_direct(testsupport::composite_map(x_given_y, y_given_x));
    CHECK(linf(pair.x_bias, direct) <= 1e-6);
  }
}

TEST_CASE("rnorm endpoints return their argument bit-identically") {
  const Distribution b({0.3, 0.45, 0.25});
  const Distribution b_star({0.7, 0.1, 0.2});
  CHECK(rnorm_combine(b, b_star, 0.0, 1.0) == b);
  CHECK(rnorm_combine(b, b_star, 1.0, 1.0) == b_star);
  CHECK(rnorm_combine(b, b_star, 0.0, 2.0) == b);
  CHECK(rnorm_combine(b, b_star, 1.0, -1.0) == b_star);
}

TEST_CASE("rnorm with r = 1 is the convex combination") {
  const auto out = rnorm_combine(Distribution({0.8, 0.2}), Distribution({0.2, 0.8}), 0.5, 1.0);
  CHECK(linf(out, {0.5, 0.5}) <= 1e-15);

  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.next_int(8);
    const Distribution b(testsupport::random_simplex(rng, n));
    const Distribution s(testsupport::random_simplex(rng, n));
    const double beta = rng.next_double();
    const auto combined = rnorm_combine(b, s, beta, 1.0);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(combined[i] - ((1.0 - beta) * b[i] + beta * s[i])) <= 1e-12);
  }
}

TEST_CASE("rnorm with r = 2 renormalizes the raw power mean") {
  // Raw components are sqrt(0.5) each; renormalization gives (0.5, 0.5).
  const auto out = rnorm_combine(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}), 0.5, 2.0);
  CHECK(linf(out, {0.5, 0.5}) <= 1e-12);
}

TEST_CASE("rnorm rejects invalid arguments") {
  const Distribution b({0.5, 0.5});
  CHECK_THROWS_AS(rnorm_combine(b, b, 0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(rnorm_combine(b, b, -0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(rnorm_combine(b, b, 1.1, 1.0), ConfigError);
  CHECK_THROWS_AS(rnorm_combine(b, Distribution({1.0}), 0.5, 1.0), ConfigError);
}

TEST_CASE("rnorm handles zero entries under a negative exponent") {
  const auto out = rnorm_combine(Distribution({1.0, 0.0}), Distribution({0.5, 0.5}), 0.5, -2.0);
  double sum = 0.0;
  for (int i = 0; i < out.size(); ++i) sum += out[i];
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(out[0] > out[1]);
}

TEST_CASE("rnorm is permutation-equivariant") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + rng.next_int(6);
    const auto bv = testsupport::random_simplex(rng, n);
    const auto sv = testsupport::random_simplex(rng, n);
    // Rotation by one position as the permutation.
    std::vector<double> bp(n), sp(n);
    for (int i = 0; i < n; ++i) {
      bp[(i + 1) % n] = bv[i];
      sp[(i + 1) % n] = sv[i];
    }
    const double beta = 0.25 + 0.5 * rng.next_double();
    const double r = rng.next_double() < 0.5 ? 2.0 : 0.5;
    const auto plain = rnorm_combine(Distribution(bv), Distribution(sv), beta, r);
    const auto rotated = rnorm_combine(Distribution(bp), Distribution(sp), beta, r);
    for (int i = 0; i < n; ++i) CHECK(std::abs(rotated[(i + 1) % n] - plain[i]) <= 1e-15);
  }
}

TEST_CASE("jeffrey revision below threshold returns the belief unchanged") {
  const Distribution b({0.5, 0.3, 0.2});
  const Distribution b_star({0.55, 0.28, 0.17});
  CHECK(jeffrey_revision(b_star, b, 0.2, 0.5, 1.0) == b);
}

TEST_CASE("jeffrey revision moves the most deviating entry and rescales the rest") {
  const Distribution b({0.5, 0.3, 0.2});
  const Distribution b_star({0.9, 0.05, 0.05});
  const auto out = jeffrey_revision(b_star, b, 0.2, 0.5, 1.0);
  // Pivot 0: 0.5/2 + 0.9/2 = 0.7; others scaled by 0.3/0.5.
  CHECK(linf(out, {0.7, 0.18, 0.12}) <= 1e-12);
}

TEST_CASE("jeffrey revision reproduces the proportional-rescale example") {
  // Priors (0.5, 0.2, 0.3); revising the first entry to 0.4 rescales the
  // others to 0.24 and 0.36.
  const Distribution b({0.5, 0.2, 0.3});
  const Distribution b_star({0.4, 0.25, 0.35});
  const auto out = jeffrey_revision(b_star, b, 0.05, 1.0, 1.0);
  CHECK(std::abs(out[0] - 0.4) <= 1e-15);
  CHECK(std::abs(out[1] - 0.24) <= 1e-15);
  CHECK(std::abs(out[2] - 0.36) <= 1e-15);
}

TEST_CASE("jeffrey revision preserves ratios among non-revised entries") {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.next_int(12);
    const Distribution b(testsupport::random_simplex(rng, n, 0.1));
    const Distribution s(testsupport::random_simplex(rng, n, 0.1));
    const auto out = jeffrey_revision(s, b, 0.0, 0.5, 1.0);

    int pivot = 0;
    double max_dev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dev = std::abs(s[i] - b[i]);
      if (dev > max_dev) {
        max_dev = dev;
        pivot = i;
      }
    }
    if (max_dev == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (j == pivot || k == pivot || b[j] == 0.0 || b[k] == 0.0) continue;
        CHECK(std::abs(out[j] / out[k] - b[j] / b[k]) <= 1e-12);
      }
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += out[i];
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("jeffrey revision ties resolve to the lowest index") {
  const auto out = jeffrey_revision(Distribution({0.6, 0.4}), Distribution({0.4, 0.6}), 0.1,
                                    0.5, 1.0);
  // Pivot 0 revised to 0.5; the other entry rescaled to 0.5.
  CHECK(linf(out, {0.5, 0.5}) <= 1e-12);
}

TEST_CASE("jeffrey revision spreads mass when the pivot held everything") {
  const auto out = jeffrey_revision(Distribution({0.0, 0.5, 0.5}),
                                    Distribution({1.0, 0.0, 0.0}), 0.1, 0.5, 1.0);
  CHECK(linf(out, {0.5, 0.25, 0.25}) <= 1e-12);
}

TEST_CASE("jeffrey revision validates the threshold") {
  const Distribution b({0.5, 0.5});
  CHECK_THROWS_AS(jeffrey_revision(b, b, -0.1, 0.5, 1.0), ConfigError);
}

TEST_CASE("knowledge files round-trip exactly") {
  const auto dir = fs::temp_directory_path() / "beliefrev_km_test";
  fs::create_directories(dir);
  const KnowledgeMatrix original("x", "y",
                                 from_rows({{0.125, 0.375, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}));
  const auto file = dir / "y_given_x.km";
  save_knowledge_matrix(original, file);
  const auto loaded = load_knowledge_matrix(file);
  CHECK(loaded.given_attr == "x");
  CHECK(loaded.target_attr == "y");
  CHECK(loaded.table == original.table);
  fs::remove_all(dir);
}

TEST_CASE("knowledge files reject bad contents and accept comments") {
  const auto dir = fs::temp_directory_path() / "beliefrev_km_bad";
  fs::create_directories(dir);
  const auto file = dir / "bad.km";
  {
    std::ofstream out(file);
    out << "# a comment\n";
    out << "given=x target=y rows=1 cols=2\n";
    out << "# another comment\n";
    out << "0.5 0.5\n";
  }
  CHECK_NOTHROW(load_knowledge_matrix(file));
  {
    std::ofstream out(file);
    out << "given=x target=y rows=1 cols=2\n0.5 0.6\n";
  }
  CHECK_THROWS_AS(load_knowledge_matrix(file), ConfigError);
  {
    std::ofstream out(file);
    out << "given=x target=y rows=2 cols=2\n0.5 0.5\n";
  }
  CHECK_THROWS_AS(load_knowledge_matrix(file), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("knowledge derivation on a single-area map is one-hot with warnings") {
  std::string text;
  for (int r = 0; r < 13; ++r) text += "3333333333333\n";
  text += "object: 0,0\ntarget: 1,1\nrobot: 2,2,N\n";
  const GridMap map = GridMap::parse_text(text);
  std::vector<std::string> warnings;
  const auto kb = derive_knowledge_from_map(map, &warnings);

  const auto* l_given_x = kb.find("x", "l");
  REQUIRE(l_given_x != nullptr);
  for (int r = 0; r < 13; ++r) {
    CHECK(l_given_x->table(r, 3) == 1.0);
    CHECK(l_given_x->table(r, 0) == 0.0);
  }
  // P(x|y) on the uniform map is uniform over rows.
  const auto* x_given_y = kb.find("y", "x");
  REQUIRE(x_given_y != nullptr);
  for (int r = 0; r < 13; ++r) CHECK(std::abs(x_given_y->table(0, r) - 1.0 / 13) <= 1e-12);
  // Areas 0..2 never occur, so P(x|l) and P(y|l) get uniform fallback rows.
  CHECK_FALSE(warnings.empty());
  const auto* x_given_l = kb.find("l", "x");
  REQUIRE(x_given_l != nullptr);
  for (int c = 0; c < 13; ++c) CHECK(std::abs(x_given_l->table(0, c) - 1.0 / 13) <= 1e-12);
}

TEST_CASE("knowledge derivation matches direct cell counting on the default map") {
  const GridMap& map = GridMap::default_map();
  std::vector<std::string> warnings;
  const auto kb = derive_knowledge_from_map(map, &warnings);
  CHECK(warnings.empty());
  CHECK(kb.matrices().size() == 6);

  // Independent recount, straight from the map.
  const auto* l_given_x = kb.find("x", "l");
  REQUIRE(l_given_x != nullptr);
  for (int x = 0; x < kGridSize; ++x) {
    std::vector<double> counts(kNumAreas, 0.0);
    double total = 0.0;
    for (int y = 0; y < kGridSize; ++y) {
      if (map.wall(x, y)) continue;
      counts[map.area(x, y)] += 1.0;
      total += 1.0;
    }
    for (int a = 0; a < kNumAreas; ++a)
      CHECK(std::abs(l_given_x->table(x, a) - counts[a] / total) <= 1e-12);
  }

  const auto* y_given_x = kb.find("x", "y");
  REQUIRE(y_given_x != nullptr);
  // Row 6 has a single free cell at column 6.
  CHECK(y_given_x->table(6, 6) == 1.0);
  // Row 0 spreads uniformly over its 11 free cells.
  CHECK(std::abs(y_given_x->table(0, 0) - 1.0 / 11) <= 1e-12);
  CHECK(y_given_x->table(0, 4) == 0.0);
}

TEST_CASE("bias beliefs on the default map recover the occupancy marginals") {
  // With conditionals derived from a uniform joint, the stationary vector of
  // each pair is the joint's marginal, so cell counting is the oracle.
  const GridMap& map = GridMap::default_map();
  const auto kb = derive_knowledge_from_map(map);
  const AttributeSpace space({{"x", kGridSize}, {"y", kGridSize}, {"l", kNumAreas}});
  const auto bias = compute_bias_beliefs(kb, space);
  REQUIRE(bias.contains("x"));
  REQUIRE(bias.contains("y"));
  REQUIRE(bias.contains("l"));

  std::vector<double> row_counts(kGridSize, 0.0), col_counts(kGridSize, 0.0),
      area_counts(kNumAreas, 0.0);
  double total = 0.0;
  for (int x = 0; x < kGridSize; ++x)
    for (int y = 0; y < kGridSize; ++y) {
      if (map.wall(x, y)) continue;
      row_counts[x] += 1.0;
      col_counts[y] += 1.0;
      area_counts[map.area(x, y)] += 1.0;
      total += 1.0;
    }
  for (double& v : row_counts) v /= total;
  for (double& v : col_counts) v /= total;
  for (double& v : area_counts) v /= total;

  CHECK(linf(bias.at("x").bias, row_counts) <= 1e-6);
  CHECK(linf(bias.at("y").bias, col_counts) <= 1e-6);
  CHECK(linf(bias.at("l").bias, area_counts) <= 1e-6);
  CHECK(bias.at("x").residual <= 1e-9);
}

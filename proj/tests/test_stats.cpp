#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "voltrip/error.hpp"
#include "voltrip/rng.hpp"
#include "voltrip/stats.hpp"

using namespace voltrip;

TEST_CASE("describe small samples") {
  std::vector<double> v = {1, 2, 3};
  auto s = describe(v);
  CHECK(s.n == 3);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.std == doctest::Approx(1.0));
  CHECK(s.min == 1.0);
  CHECK(s.max == 3.0);

  std::vector<double> one = {5};
  auto s1 = describe(one);
  CHECK(s1.n == 1);
  CHECK(s1.mean == 5.0);
  CHECK(s1.std == 0.0);
  CHECK(s1.min == 5.0);
  CHECK(s1.max == 5.0);
}

TEST_CASE("describe rejects an empty sample") {
  std::vector<double> v;
  CHECK_THROWS_AS(describe(v), DataError);
}

TEST_CASE("fixed-count histogram with last-bin right inclusion") {
  std::vector<double> v = {1, 1, 1, 2};
  auto h = histogram(v, Binning::fixed_count(2));
  REQUIRE(h.bin_edges.size() == 3);
  CHECK(h.bin_edges[0] == doctest::Approx(1.0));
  CHECK(h.bin_edges[1] == doctest::Approx(1.5));
  CHECK(h.bin_edges[2] == doctest::Approx(2.0));
  REQUIRE(h.counts.size() == 2);
  CHECK(h.counts[0] == 3);
  CHECK(h.counts[1] == 1); // the max lands in the last bin, not past it
}

TEST_CASE("histogram counts always sum to n") {
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v;
    int n = 2 + static_cast<int>(rng.next_below(500));
    for (int i = 0; i < n; ++i) v.push_back(rng.next_uniform(-5, 40));
    auto h = histogram(v);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == v.size());
    REQUIRE(h.bin_edges.size() == h.counts.size() + 1);
    for (std::size_t i = 1; i < h.bin_edges.size(); ++i)
      CHECK(h.bin_edges[i] > h.bin_edges[i - 1]);
  }
}

TEST_CASE("default binning matches the Freedman-Diaconis oracle") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> v;
    int n = 50 + static_cast<int>(rng.next_below(2000));
    for (int i = 0; i < n; ++i) v.push_back(rng.next_normal() * 3 + 13);
    auto h = histogram(v);
    CHECK(static_cast<int>(h.counts.size()) == oracles::fd_bin_count(v));
  }
}

TEST_CASE("degenerate sample still yields one well-formed bin") {
  std::vector<double> v = {7, 7, 7};
  auto h = histogram(v);
  REQUIRE(h.counts.size() == 1);
  CHECK(h.counts[0] == 3);
  CHECK(h.bin_edges[0] < 7);
  CHECK(h.bin_edges[1] > 7);
}

TEST_CASE("pearson endpoints and formula oracle") {
  std::vector<double> x = {1, 2, 3, 4};
  std::vector<double> up = {2, 4, 6, 8};
  std::vector<double> down = {8, 6, 4, 2};
  CHECK(pearson(x, up) == doctest::Approx(1.0));
  CHECK(pearson(x, down) == doctest::Approx(-1.0));

  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 5 + static_cast<int>(rng.next_below(100));
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(rng.next_normal());
      b.push_back(0.4 * a.back() + rng.next_normal());
    }
    double ma = 0, mb = 0;
    for (int i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
    ma /= n; mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    double oracle = sab / std::sqrt(saa * sbb);
    CHECK(pearson(a, b) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("pearson is invariant under affine maps of either argument") {
  Rng rng(13);
  std::vector<double> a, b;
  for (int i = 0; i < 60; ++i) {
    a.push_back(rng.next_normal());
    b.push_back(0.7 * a.back() + rng.next_normal());
  }
  double base = pearson(a, b);
  std::vector<double> a2 = a, b2 = b;
  for (double& v : a2) v = 3.5 * v - 11;
  for (double& v : b2) v = 0.2 * v + 4;
  CHECK(pearson(a2, b2) == doctest::Approx(base).epsilon(1e-12));
  for (double& v : a2) v = -v; // sign flip negates
  CHECK(pearson(a2, b2) == doctest::Approx(-base).epsilon(1e-12));
}

namespace {

DesignMatrix three_column_design(const Eigen::MatrixXd& cols) {
  DesignMatrix d;
  d.column_names = {"intercept", "x1", "x2"};
  d.X.resize(cols.rows(), 3);
  d.X.col(0).setOnes();
  d.X.col(1) = cols.col(0);
  d.X.col(2) = cols.col(1);
  d.y = Eigen::VectorXd::Zero(cols.rows());
  return d;
}

} // namespace

TEST_CASE("vif of orthogonal predictors is one") {
  // centered, exactly orthogonal columns
  Eigen::MatrixXd cols(4, 2);
  cols << 1, 1,
          1, -1,
          -1, 1,
          -1, -1;
  DesignMatrix d = three_column_design(cols);
  CHECK(vif(d, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vif(d, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vif of a duplicated predictor is an error") {
  Eigen::MatrixXd cols(5, 2);
  cols << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5;
  DesignMatrix d = three_column_design(cols);
  CHECK_THROWS_AS(vif(d, 1), DataError);
}

TEST_CASE("vif matches the 1/(1-R2) identity on correlated noise") {
  Rng rng(14);
  Eigen::MatrixXd cols(80, 2);
  for (int i = 0; i < 80; ++i) {
    double z = rng.next_normal();
    cols(i, 0) = z + 0.3 * rng.next_normal();
    cols(i, 1) = z + 0.3 * rng.next_normal();
  }
  DesignMatrix d = three_column_design(cols);

  // regress x1 on [1, x2] by hand and form 1 / (1 - R^2)
  Eigen::MatrixXd Z(80, 2);
  Z.col(0).setOnes();
  Z.col(1) = cols.col(1);
  Eigen::VectorXd target = cols.col(0);
  Eigen::VectorXd beta = oracles::normal_equations_ols(Z, target);
  Eigen::VectorXd resid = target - Z * beta;
  double sse = resid.squaredNorm();
  double sst = (target.array() - target.mean()).matrix().squaredNorm();
  double oracle = 1.0 / (sse / sst);
  CHECK(vif(d, 1) == doctest::Approx(oracle).epsilon(1e-8));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "replikit/model.hpp"
#include "test_support.hpp"

using namespace replikit;
using replikit::testing::Rng;
using replikit::testing::TempDir;

namespace {

constexpr mpfr_prec_t kPrec = 256;

// 256-bit reference for J = 0.5 ||w||^2 + C sum_i s_i log(1 + exp(-t_i z_i)).
double mp_objective(const Matrix& X, const std::vector<int>& y, const Vec& s, double C,
                    const Vec& w, double b) {
  mpfr_t J, z, t;
  mpfr_inits2(kPrec, J, z, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(J, 1);
  for (double wj : w) {
    mpfr_set_d(t, wj, MPFR_RNDN);
    mpfr_sqr(t, t, MPFR_RNDN);
    mpfr_add(J, J, t, MPFR_RNDN);
  }
  mpfr_div_ui(J, J, 2, MPFR_RNDN);
  for (std::size_t i = 0; i < X.size(); ++i) {
    mpfr_set_d(z, b, MPFR_RNDN);
    for (std::size_t j = 0; j < w.size(); ++j) {
      mpfr_set_d(t, w[j], MPFR_RNDN);
      mpfr_mul_d(t, t, X[i][j], MPFR_RNDN);
      mpfr_add(z, z, t, MPFR_RNDN);
    }
    if (y[i] == 1) mpfr_neg(z, z, MPFR_RNDN);  // z := -margin
    mpfr_exp(z, z, MPFR_RNDN);
    mpfr_log1p(z, z, MPFR_RNDN);
    mpfr_mul_d(z, z, s[i], MPFR_RNDN);
    mpfr_mul_d(z, z, C, MPFR_RNDN);
    mpfr_add(J, J, z, MPFR_RNDN);
  }
  double out = mpfr_get_d(J, MPFR_RNDN);
  mpfr_clears(J, z, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

// 256-bit reference gradient, components [dw..., db].
Vec mp_gradient(const Matrix& X, const std::vector<int>& y, const Vec& s, double C,
                const Vec& w, double b) {
  const std::size_t d = w.size();
  std::vector<__mpfr_struct> acc(d + 1);
  for (auto& a : acc) {
    mpfr_init2(&a, kPrec);
    mpfr_set_zero(&a, 1);
  }
  mpfr_t z, t, r;
  mpfr_inits2(kPrec, z, t, r, static_cast<mpfr_ptr>(nullptr));
  for (std::size_t i = 0; i < X.size(); ++i) {
    mpfr_set_d(z, b, MPFR_RNDN);
    for (std::size_t j = 0; j < d; ++j) {
      mpfr_set_d(t, w[j], MPFR_RNDN);
      mpfr_mul_d(t, t, X[i][j], MPFR_RNDN);
      mpfr_add(z, z, t, MPFR_RNDN);
    }
    // r = C * s_i * (sigma(z) - y_i)
    mpfr_neg(t, z, MPFR_RNDN);
    mpfr_exp(t, t, MPFR_RNDN);
    mpfr_add_ui(t, t, 1, MPFR_RNDN);
    mpfr_ui_div(r, 1, t, MPFR_RNDN);
    mpfr_sub_d(r, r, static_cast<double>(y[i]), MPFR_RNDN);
    mpfr_mul_d(r, r, s[i], MPFR_RNDN);
    mpfr_mul_d(r, r, C, MPFR_RNDN);
    for (std::size_t j = 0; j < d; ++j) {
      mpfr_mul_d(t, r, X[i][j], MPFR_RNDN);
      mpfr_add(&acc[j], &acc[j], t, MPFR_RNDN);
    }
    mpfr_add(&acc[d], &acc[d], r, MPFR_RNDN);
  }
  for (std::size_t j = 0; j < d; ++j) mpfr_add_d(&acc[j], &acc[j], w[j], MPFR_RNDN);
  Vec out(d + 1);
  for (std::size_t j = 0; j <= d; ++j) out[j] = mpfr_get_d(&acc[j], MPFR_RNDN);
  for (auto& a : acc) mpfr_clear(&a);
  mpfr_clears(z, t, r, static_cast<mpfr_ptr>(nullptr));
  return out;
}

struct Fixture4 {
  Matrix X = {{0.5, -1.2}, {-0.3, 0.8}, {1.5, 0.4}, {-0.7, -0.9}};
  std::vector<int> y = {1, 0, 1, 0};
  Vec s = {1.0, 1.5, 0.7, 2.0};
  double C = 1.3;
  Vec w = {0.3, -0.5};
  double b = 0.1;
};

struct RandomProblem {
  Matrix X;
  std::vector<int> y;
};

RandomProblem random_problem(Rng& rng, std::size_t n, std::size_t d) {
  while (true) {
    RandomProblem prob;
    prob.X.assign(n, Vec(d));
    Vec w_true(d);
    for (auto& wj : w_true) wj = 2.0 * rng.normal();
    const double b_true = rng.normal();
    prob.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double z = b_true;
      for (std::size_t j = 0; j < d; ++j) {
        prob.X[i][j] = rng.normal();
        z += w_true[j] * prob.X[i][j];
      }
      prob.y[i] = rng.uniform() < sigmoid(z) ? 1 : 0;
    }
    const auto pos = std::count(prob.y.begin(), prob.y.end(), 1);
    if (pos > 1 && static_cast<std::size_t>(pos) < n - 1) return prob;
  }
}

Vec balanced_weights(const std::vector<int>& y) {
  const double n = static_cast<double>(y.size());
  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  Vec s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    s[i] = y[i] == 1 ? n / (2.0 * pos) : n / (2.0 * (n - pos));
  }
  return s;
}

// Independent reimplementation of the whole training path: weighted
// standardization, fixed-step full-batch gradient descent driven to
// gradient norm 1e-12, fold-back into raw coordinates.
struct OracleFit {
  Vec w_raw;
  double b_raw = 0.0;
  Vec w_std;
  double b_std = 0.0;
  Vec mean;
  Vec scale;
  double objective_std = 0.0;
  double gradient_norm = 0.0;
  Matrix Z;  // standardized copy
};

OracleFit oracle_fit(const Matrix& X, const std::vector<int>& y, const Vec& s, double C) {
  const std::size_t n = X.size();
  const std::size_t d = X[0].size();
  OracleFit out;
  out.mean.assign(d, 0.0);
  out.scale.assign(d, 1.0);
  double total = 0.0;
  for (double si : s) total += si;
  out.Z = X;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = X[0][j], hi = X[0][j], m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, X[i][j]);
      hi = std::max(hi, X[i][j]);
      m += s[i] * X[i][j];
    }
    if (lo == hi) continue;
    m /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += s[i] * (X[i][j] - m) * (X[i][j] - m);
    var /= total;
    if (var <= 0.0) continue;
    out.mean[j] = m;
    out.scale[j] = std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) out.Z[i][j] = (X[i][j] - m) / out.scale[j];
  }

  // Step size 1/L with L an upper bound on the Hessian norm.
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double norm_sq = 1.0;  // bias coordinate
    for (std::size_t j = 0; j < d; ++j) norm_sq += out.Z[i][j] * out.Z[i][j];
    quad += s[i] * norm_sq;
  }
  const double eta = 1.0 / (1.0 + 0.25 * C * quad);

  Vec w(d, 0.0);
  double b = 0.0;
  Vec g(d + 1, 0.0);
  double gnorm = 0.0;
  for (long iter = 0; iter < 4'000'000; ++iter) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * out.Z[i][j];
      const double r = C * s[i] * (sigmoid(z) - y[i]);
      for (std::size_t j = 0; j < d; ++j) g[j] += r * out.Z[i][j];
      g[d] += r;
    }
    for (std::size_t j = 0; j < d; ++j) g[j] += w[j];
    gnorm = 0.0;
    for (double gj : g) gnorm += gj * gj;
    gnorm = std::sqrt(gnorm);
    if (gnorm <= 1e-12) break;
    for (std::size_t j = 0; j < d; ++j) w[j] -= eta * g[j];
    b -= eta * g[d];
  }
  out.gradient_norm = gnorm;
  out.w_std = w;
  out.b_std = b;
  out.objective_std = mp_objective(out.Z, y, s, C, w, b);
  out.w_raw.resize(d);
  double shift = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    out.w_raw[j] = w[j] / out.scale[j];
    shift += w[j] * out.mean[j] / out.scale[j];
  }
  out.b_raw = b - shift;
  return out;
}

}  // namespace

// --------------------------------------------------------------- objective

TEST_CASE("objective matches the 256-bit reference on the pinned fixture") {
  Fixture4 f;
  const double want = mp_objective(f.X, f.y, f.s, f.C, f.w, f.b);
  const double got = objective(f.w, f.b, f.X, f.y, f.s, f.C);
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("gradient matches the 256-bit reference on the pinned fixture") {
  Fixture4 f;
  const Vec want = mp_gradient(f.X, f.y, f.s, f.C, f.w, f.b);
  const auto [dw, db] = gradient(f.w, f.b, f.X, f.y, f.s, f.C);
  REQUIRE(dw.size() == 2);
  CHECK(dw[0] == doctest::Approx(want[0]).epsilon(1e-13));
  CHECK(dw[1] == doctest::Approx(want[1]).epsilon(1e-13));
  CHECK(db == doctest::Approx(want[2]).epsilon(1e-13));
}

TEST_CASE("objective and gradient track the reference at random points") {
  Rng rng(101);
  auto prob = random_problem(rng, 25, 4);
  Vec s = balanced_weights(prob.y);
  for (int trial = 0; trial < 10; ++trial) {
    Vec w(4);
    for (auto& wj : w) wj = 3.0 * rng.normal();
    const double b = rng.normal();
    const double C = 0.25 + 2.0 * rng.uniform();

    const double j_ref = mp_objective(prob.X, prob.y, s, C, w, b);
    CHECK(objective(w, b, prob.X, prob.y, s, C) == doctest::Approx(j_ref).epsilon(1e-13));

    const Vec g_ref = mp_gradient(prob.X, prob.y, s, C, w, b);
    const auto [dw, db] = gradient(w, b, prob.X, prob.y, s, C);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(dw[j] == doctest::Approx(g_ref[j]).epsilon(1e-12));
    }
    CHECK(db == doctest::Approx(g_ref[4]).epsilon(1e-12));
  }
}

TEST_CASE("gradient agrees with central finite differences") {
  Rng rng(55);
  auto prob = random_problem(rng, 20, 3);
  Vec s = balanced_weights(prob.y);
  Vec w = {0.4, -0.8, 0.15};
  double b = -0.3, C = 1.7;
  const double h = 1e-6;
  const auto [dw, db] = gradient(w, b, prob.X, prob.y, s, C);
  for (std::size_t j = 0; j < w.size(); ++j) {
    Vec hi = w, lo = w;
    hi[j] += h;
    lo[j] -= h;
    const double fd = (objective(hi, b, prob.X, prob.y, s, C) -
                       objective(lo, b, prob.X, prob.y, s, C)) /
                      (2 * h);
    CHECK(dw[j] == doctest::Approx(fd).epsilon(1e-6));
  }
  const double fd_b = (objective(w, b + h, prob.X, prob.y, s, C) -
                       objective(w, b - h, prob.X, prob.y, s, C)) /
                      (2 * h);
  CHECK(db == doctest::Approx(fd_b).epsilon(1e-6));
}

TEST_CASE("objective at zero is C * sum(s) * log 2 and is convex along chords") {
  Rng rng(77);
  auto prob = random_problem(rng, 22, 3);
  Vec s = balanced_weights(prob.y);
  double total = 0.0;
  for (double si : s) total += si;
  const double C = 0.9;
  CHECK(objective(Vec(3, 0.0), 0.0, prob.X, prob.y, s, C) ==
        doctest::Approx(C * total * std::log(2.0)).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    Vec w1(3), w2(3), mid(3);
    for (std::size_t j = 0; j < 3; ++j) {
      w1[j] = 4.0 * rng.normal();
      w2[j] = 4.0 * rng.normal();
      mid[j] = 0.5 * (w1[j] + w2[j]);
    }
    const double b1 = 2.0 * rng.normal(), b2 = 2.0 * rng.normal();
    const double j1 = objective(w1, b1, prob.X, prob.y, s, C);
    const double j2 = objective(w2, b2, prob.X, prob.y, s, C);
    const double jm = objective(mid, 0.5 * (b1 + b2), prob.X, prob.y, s, C);
    CHECK(jm <= 0.5 * (j1 + j2) + 1e-9 * (1.0 + std::abs(j1) + std::abs(j2)));
  }
}

TEST_CASE("class_weights gives each class half the total mass") {
  auto [wp, wn] = class_weights({1, 1, 0, 0});
  CHECK(wp == 1.0);
  CHECK(wn == 1.0);

  std::tie(wp, wn) = class_weights({1, 1, 1, 0});
  CHECK(wp == doctest::Approx(4.0 / 6.0));
  CHECK(wn == doctest::Approx(2.0));

  std::vector<int> skewed(150, 0);
  std::fill_n(skewed.begin(), 101, 1);
  std::tie(wp, wn) = class_weights(skewed);
  CHECK(wp == doctest::Approx(150.0 / 202.0));
  CHECK(wn == doctest::Approx(150.0 / 98.0));

  CHECK_THROWS_AS(class_weights({1, 1}), InputError);
  CHECK_THROWS_AS(class_weights({0}), InputError);
}

// --------------------------------------------------------------------- fit

TEST_CASE("fit lands on the independent gradient-descent optimum") {
  Rng rng(2024);
  const double Cs[] = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 20 + rng.index(11);
    const std::size_t d = 2 + rng.index(4);
    auto prob = random_problem(rng, n, d);
    Vec s = balanced_weights(prob.y);
    const double C = Cs[trial % 3];

    OracleFit want = oracle_fit(prob.X, prob.y, s, C);
    REQUIRE(want.gradient_norm <= 1e-11);

    TrainConfig config;
    config.C = C;
    config.tol = 1e-10;
    config.max_iter = 5000;
    LogisticModel got = fit(prob.X, prob.y, config);

    REQUIRE(got.weights.size() == d);
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(std::abs(got.weights[j] - want.w_raw[j]) <= 1e-5);
    }
    CHECK(std::abs(got.bias - want.b_raw) <= 1e-5);

    // Compare minima in the standardized coordinates both paths share.
    Vec w_std(d);
    double shift = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      w_std[j] = got.weights[j] * want.scale[j];
      shift += got.weights[j] * want.mean[j];
    }
    const double b_std = got.bias + shift;
    const double j_got = mp_objective(want.Z, prob.y, s, C, w_std, b_std);
    CHECK(std::abs(j_got - want.objective_std) <= 1e-10);

    CHECK(got.train_meta.final_gradient_norm <= config.tol);
    CHECK(got.train_meta.iterations > 0);
  }
}

TEST_CASE("explicit integer weights equal physically duplicated rows") {
  Rng rng(303);
  auto prob = random_problem(rng, 12, 3);
  Vec s(12);
  for (auto& si : s) si = 1.0 + static_cast<double>(rng.index(3));

  Matrix X_dup;
  std::vector<int> y_dup;
  for (std::size_t i = 0; i < 12; ++i) {
    for (int c = 0; c < static_cast<int>(s[i]); ++c) {
      X_dup.push_back(prob.X[i]);
      y_dup.push_back(prob.y[i]);
    }
  }

  TrainConfig config;
  config.weighting = Weighting::uniform;
  config.tol = 1e-10;
  config.max_iter = 5000;
  LogisticModel weighted = fit_weighted(prob.X, prob.y, s, config);
  LogisticModel duplicated = fit(X_dup, y_dup, config);

  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(weighted.weights[j] - duplicated.weights[j]) <= 1e-6);
  }
  CHECK(std::abs(weighted.bias - duplicated.bias) <= 1e-6);

  // At identical parameters the two data representations give the same
  // objective up to summation roundoff.
  const double j_weighted = objective(weighted.weights, weighted.bias, prob.X, prob.y, s, 1.0);
  const double j_duplicated =
      objective(weighted.weights, weighted.bias, X_dup, y_dup, Vec(X_dup.size(), 1.0), 1.0);
  CHECK(j_weighted == doctest::Approx(j_duplicated).epsilon(1e-12));
}

TEST_CASE("flipping every label negates the decision function") {
  Rng rng(404);
  auto prob = random_problem(rng, 24, 3);
  std::vector<int> flipped(prob.y.size());
  for (std::size_t i = 0; i < prob.y.size(); ++i) flipped[i] = 1 - prob.y[i];

  TrainConfig config;
  config.tol = 1e-10;
  config.max_iter = 5000;
  LogisticModel a = fit(prob.X, prob.y, config);
  LogisticModel b = fit(prob.X, flipped, config);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(a.weights[j] + b.weights[j]) <= 1e-6);
  }
  CHECK(std::abs(a.bias + b.bias) <= 1e-6);
}

TEST_CASE("fit is bit-for-bit deterministic") {
  Rng rng(505);
  auto prob = random_problem(rng, 26, 4);
  LogisticModel a = fit(prob.X, prob.y);
  LogisticModel b = fit(prob.X, prob.y);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.train_meta.iterations == b.train_meta.iterations);
  CHECK(a.train_meta.objective == b.train_meta.objective);
}

TEST_CASE("fit converges at the default tolerance when features outnumber rows") {
  // Wide, nearly flat problems used to stall just above the stopping
  // threshold once the objective stopped being resolvable in doubles.
  Rng rng(606);
  const std::size_t n = 20, d = 40;
  Matrix X(n, Vec(d));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : X[i]) v = rng.normal();
    y[i] = i % 2 == 0 ? 1 : 0;
  }
  LogisticModel model = fit(X, y);  // default tol 1e-8, max_iter 1000
  CHECK(model.train_meta.final_gradient_norm <= 1e-8);
}

TEST_CASE("constant columns survive fit without scaling") {
  Rng rng(707);
  auto prob = random_problem(rng, 20, 3);
  for (auto& row : prob.X) row.push_back(5.0);  // constant column
  TrainConfig config;
  config.tol = 1e-10;
  config.max_iter = 5000;
  LogisticModel model = fit(prob.X, prob.y, config);
  REQUIRE(model.weights.size() == 4);
  for (double wj : model.weights) CHECK(std::isfinite(wj));
  CHECK(std::isfinite(model.bias));
  CHECK(model.train_meta.final_gradient_norm <= config.tol);
}

TEST_CASE("fit rejects malformed input") {
  Matrix X = {{1.0, 2.0}, {3.0, 4.0}};
  std::vector<int> y = {0, 1};

  CHECK_THROWS_AS(fit({{1.0}}, {1}), InputError);                       // n < 2
  CHECK_THROWS_AS(fit(X, {0}), InputError);                             // label count
  CHECK_THROWS_AS(fit(X, {0, 2}), InputError);                          // label domain
  CHECK_THROWS_AS(fit(X, {1, 1}), InputError);                          // single class
  CHECK_THROWS_AS(fit({{1.0, 2.0}, {3.0}}, y), InputError);             // ragged
  CHECK_THROWS_AS(fit({{1.0, 2.0}, {3.0, NAN}}, y), InputError);        // non-finite
  CHECK_THROWS_AS(fit_weighted(X, y, {1.0, 0.0}), InputError);          // weight <= 0
  CHECK_THROWS_AS(fit_weighted(X, y, {1.0}), InputError);               // weight count
  CHECK_THROWS_AS(fit({{}, {}}, y), InputError);                        // d == 0

  TrainConfig bad;
  bad.C = 0.0;
  CHECK_THROWS_AS(fit(X, y, bad), InputError);
  bad = {};
  bad.tol = 0.0;
  CHECK_THROWS_AS(fit(X, y, bad), InputError);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(fit(X, y, bad), InputError);
}

TEST_CASE("the non-finite rejection names the offending cell") {
  Matrix X = {{1.0, 2.0}, {3.0, INFINITY}};
  CHECK_THROWS_WITH_AS(fit(X, {0, 1}), doctest::Contains("row 1"), InputError);
}

TEST_CASE("running out of iterations reports the gradient norm") {
  Rng rng(808);
  auto prob = random_problem(rng, 25, 4);
  TrainConfig config;
  config.tol = 1e-14;
  config.max_iter = 2;
  CHECK_THROWS_WITH_AS(fit(prob.X, prob.y, config),
                       doctest::Contains("did not converge within 2"), std::runtime_error);
}

// --------------------------------------------------------------- predict

TEST_CASE("predict_proba computes the text-book sigmoid") {
  LogisticModel model;
  model.d = 2;
  model.weights = {std::log(3.0), 0.0};
  model.bias = 0.0;
  CHECK(predict_proba(model, {1.0, 7.0}) == doctest::Approx(0.75).epsilon(1e-12));

  model.weights = {1.0, 0.0};
  CHECK(predict_proba(model, {-1.0, 0.0}) ==
        doctest::Approx(0.2689414213699951).epsilon(1e-12));

  CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("predict_proba stays strictly inside (0, 1)") {
  LogisticModel model;
  model.d = 1;
  model.weights = {1000.0};
  model.bias = 0.0;
  const double hi = predict_proba(model, {10.0});
  const double lo = predict_proba(model, {-10.0});
  CHECK(hi < 1.0);
  CHECK(hi > 0.999);
  CHECK(lo > 0.0);
  CHECK(lo < 1e-300);
}

TEST_CASE("predict_proba checks the dimension") {
  LogisticModel model;
  model.d = 3;
  model.weights = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(predict_proba(model, {1.0, 2.0}), InputError);
}

// --------------------------------------------------------- serialization

TEST_CASE("model JSON round-trips exactly") {
  LogisticModel model;
  model.d = 4;
  model.weights = {0.1, -1.0 / 3.0, 1e-300, 0.0};
  model.bias = -2.718281828459045;
  model.train_meta = {42, 9.87e-9, 123.456789012345678};

  TempDir dir;
  auto path = dir.file("model.json");
  save_model(model, path);
  LogisticModel back = load_model(path);

  CHECK(back.d == model.d);
  CHECK(back.weights == model.weights);  // exact
  CHECK(back.bias == model.bias);
  CHECK(back.train_meta.iterations == model.train_meta.iterations);
  CHECK(back.train_meta.final_gradient_norm == model.train_meta.final_gradient_norm);
  CHECK(back.train_meta.objective == model.train_meta.objective);
}

TEST_CASE("a fitted model survives the round trip bit-for-bit") {
  Rng rng(909);
  auto prob = random_problem(rng, 24, 3);
  LogisticModel model = fit(prob.X, prob.y);

  TempDir dir;
  auto path = dir.file("model.json");
  save_model(model, path);
  LogisticModel back = load_model(path);
  CHECK(back.weights == model.weights);
  CHECK(back.bias == model.bias);

  Vec x = {0.3, -0.2, 0.9};
  CHECK(predict_proba(back, x) == predict_proba(model, x));
}

TEST_CASE("load_model rejects damaged files") {
  TempDir dir;
  auto path = dir.file("model.json");

  SUBCASE("missing file") { CHECK_THROWS_AS(load_model(path), InputError); }
  SUBCASE("not json") {
    replikit::testing::write_file(path, "{broken\n");
    CHECK_THROWS_AS(load_model(path), InputError);
  }
  SUBCASE("missing field") {
    replikit::testing::write_file(path, R"({"d":2,"weights":[1.0,2.0]})");
    CHECK_THROWS_AS(load_model(path), InputError);
  }
  SUBCASE("length mismatch") {
    replikit::testing::write_file(
        path,
        R"({"d":3,"weights":[1.0,2.0],"bias":0.0,)"
        R"("train_meta":{"iterations":1,"final_gradient_norm":0.0,"objective":0.0}})");
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("length"), InputError);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "lichi/weights.hpp"
#include "oracles.hpp"

using lichi::Matrix;
namespace oracles = lichi::oracles;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = gauss(gen);
    return m;
}

oracles::Dense to_dense(const Matrix& m) {
    oracles::Dense d(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) d.at(r, c) = m(r, c);
    return d;
}

}  // namespace

TEST_CASE("ridge form with no penalty is the identity") {
    const Matrix a = random_matrix(6, 3, 1);
    const Matrix theta = lichi::ridge_form(lichi::gram(a), 0.0, 0.0);
    CHECK((theta - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ridge form on a diagonal gram is a scalar shrinkage") {
    Matrix g = 2.0 * Matrix::Identity(2, 2);
    const Matrix theta = lichi::ridge_form(g, 1.0, 0.5);
    // (2 - 0.5) / (2 + 1)
    CHECK(theta(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(theta(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(theta(0, 1)) < 1e-14);

    // cross-check against the numerical minimizer of the quadratic objective
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = std::sqrt(2.0);
    a(1, 1) = std::sqrt(2.0);
    const oracles::Dense ref = oracles::oracle_lemma1(to_dense(a), 1.0, 0.5);
    CHECK(oracles::max_abs_diff(ref, to_dense(theta)) < 1e-10);
}

TEST_CASE("ridge form beats random perturbations on its objective") {
    const Matrix a = random_matrix(8, 4, 2);
    const double lambda = 0.7, mu = 0.3;
    const Matrix theta = lichi::ridge_form(lichi::gram(a), lambda, mu);
    const oracles::Dense da = to_dense(a);
    const double best =
        oracles::lemma1_objective(da, to_dense(theta), lambda, mu);

    std::mt19937_64 gen(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        Matrix perturbed = theta;
        const double eps = (trial % 2) ? 1e-3 : 1e-1;
        for (int i = 0; i < perturbed.size(); ++i)
            perturbed.data()[i] += eps * gauss(gen);
        CHECK(best <= oracles::lemma1_objective(da, to_dense(perturbed),
                                                lambda, mu) + 1e-12);
    }
}

TEST_CASE("ridge form agrees with per-column normal equations") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> lam(0.1, 2.0);
    std::uniform_real_distribution<double> muu(-1.0, 1.0);
    for (int c = 0; c < 30; ++c) {
        const Matrix a = random_matrix(10, 5, 100 + c);
        const double lambda = lam(gen), mu = muu(gen);
        const Matrix theta = lichi::ridge_form(lichi::gram(a), lambda, mu);
        const oracles::Dense ref =
            oracles::oracle_lemma1(to_dense(a), lambda, mu);
        CHECK(oracles::max_abs_diff(ref, to_dense(theta)) < 1e-9);
    }
}

TEST_CASE("noiseless similarity matrices get identity weights") {
    const Matrix y = random_matrix(8, 4, 3);
    const Matrix theta = lichi::weights_sure(y, 0.0);
    CHECK((theta - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unbiased-risk weights minimize the risk estimate") {
    const double sigma = 10.0;
    const Matrix y = 50.0 * random_matrix(8, 4, 4);
    const Matrix theta = lichi::weights_sure(y, sigma);
    const double best = lichi::sure_value(y, theta, sigma);
    std::mt19937_64 gen(29);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        Matrix perturbed = theta;
        for (int i = 0; i < perturbed.size(); ++i)
            perturbed.data()[i] += 1e-2 * gauss(gen);
        CHECK(best <= lichi::sure_value(y, perturbed, sigma) + 1e-9);
    }
}

TEST_CASE("duplicate columns make the unbiased-risk weights unavailable") {
    Matrix y = random_matrix(8, 4, 5);
    y.col(2) = y.col(0);
    CHECK_THROWS_AS(lichi::weights_sure(y, 5.0),
                    lichi::SingularMatrixError);
}

TEST_CASE("risk estimate at the identity and at zero weights") {
    const int n = 8, k = 4;
    const double sigma = 3.0;
    const Matrix y = random_matrix(n, k, 6);
    CHECK(lichi::sure_value(y, Matrix::Identity(k, k), sigma) ==
          doctest::Approx(k * n * sigma * sigma).epsilon(1e-12));
    CHECK(lichi::sure_value(y, Matrix::Zero(k, k), sigma) ==
          doctest::Approx(-k * n * sigma * sigma +
                          y.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("risk estimate is unbiased over noise draws") {
    // fixed clean X and weights; the Monte Carlo mean of the estimate must
    // approach E||Y Theta - X||_F^2
    const int n = 6, k = 3;
    const double sigma = 2.0;
    const Matrix x = 10.0 * random_matrix(n, k, 7);
    const Matrix theta = 0.2 * random_matrix(k, k, 8) +
                         0.7 * Matrix::Identity(k, k);
    std::mt19937_64 gen(31);
    std::normal_distribution<double> gauss(0.0, sigma);

    const int trials = 20000;
    double sum_est = 0.0, sum_sq = 0.0, sum_true = 0.0;
    for (int t = 0; t < trials; ++t) {
        Matrix y = x;
        for (int i = 0; i < y.size(); ++i) y.data()[i] += gauss(gen);
        const double est = lichi::sure_value(y, theta, sigma);
        const double truth = (y * theta - x).squaredNorm();
        sum_est += est;
        sum_sq += est * est;
        sum_true += truth;
    }
    const double mean_est = sum_est / trials;
    const double mean_true = sum_true / trials;
    const double se = std::sqrt(
        (sum_sq / trials - mean_est * mean_est) / trials);
    CHECK(std::abs(mean_est - mean_true) <= 3.0 * se + 1e-9);
}

TEST_CASE("vanishing extra-noise ratio recovers the unbiased-risk weights") {
    const double sigma = 5.0;
    const Matrix y = 40.0 * random_matrix(10, 4, 9);
    const Matrix a = lichi::weights_nr2n(y, sigma, 1e-6);
    const Matrix b = lichi::weights_sure(y, sigma);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("noiseless input gives identity noisier-to-noise weights") {
    const Matrix y = random_matrix(8, 4, 10);
    const Matrix theta = lichi::weights_nr2n(y, 0.0, 0.5);
    CHECK((theta - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two-ridge identity relating the extra-noise weights") {
    // ((1 + a^2) Th_hat - I) / a^2 with Th_hat the pure ridge equals the
    // direct formula, for any alpha
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> alph(0.1, 2.0);
    for (int c = 0; c < 100; ++c) {
        const int n = 6 + c % 5, k = 3 + c % 3;
        const Matrix y = 20.0 * random_matrix(n, k, 200 + c);
        const double sigma = 1.0 + (c % 7);
        const double alpha = alph(gen);
        const Matrix g = lichi::gram(y);
        const double lam = n * alpha * alpha * sigma * sigma;
        const Matrix th_hat = lichi::ridge_form(g, lam, 0.0);
        const Matrix lhs =
            ((1.0 + alpha * alpha) * th_hat - Matrix::Identity(k, k)) /
            (alpha * alpha);
        const Matrix rhs = lichi::weights_nr2n(y, sigma, alpha);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("averaging weights are uniform and column-stochastic") {
    const Matrix w1 = lichi::weights_avg(1);
    CHECK(w1(0, 0) == 1.0);
    const Matrix w4 = lichi::weights_avg(4);
    CHECK((w4.array() == 0.25).all());
    const Matrix y = random_matrix(5, 4, 11);
    const Matrix out = y * w4;
    const Eigen::VectorXd rowmean = y.rowwise().mean();
    for (int c = 0; c < 4; ++c)
        CHECK((out.col(c) - rowmean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("do-nothing weights leave the data untouched") {
    const Matrix w = lichi::weights_noisy(4);
    CHECK(w.trace() == doctest::Approx(4.0));
    const Matrix y = random_matrix(5, 4, 12);
    CHECK(((y * w) - y).cwiseAbs().maxCoeff() == 0.0);
    const Matrix any = random_matrix(4, 4, 13);
    CHECK(((any * w) - any).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("plain averaging is risk-optimal among left-stochastic weights when all patches agree") {
    for (int c = 0; c < 5; ++c) {
        const int n = 6, k = 2 + c;
        oracles::Dense x(n, k);
        std::mt19937_64 gen(300 + c);
        std::uniform_real_distribution<double> pix(0.0, 255.0);
        for (int r = 0; r < n; ++r) {
            const double v = pix(gen);
            for (int j = 0; j < k; ++j) x.at(r, j) = v;
        }
        CHECK(oracles::oracle_prop4(x, 15.0, 2000, 400 + c));
    }
}

TEST_CASE("pilot method parsing round-trips the four families") {
    using lichi::PilotMethod;
    CHECK(lichi::parse_pilot_method("sure", 0.5).tag ==
          PilotMethod::Tag::Sure);
    CHECK(lichi::parse_pilot_method("nr2n", 0.5).tag ==
          PilotMethod::Tag::Noisier2Noise);
    CHECK(lichi::parse_pilot_method("avg", 0.5).tag == PilotMethod::Tag::Avg);
    CHECK(lichi::parse_pilot_method("noisy", 0.5).tag ==
          PilotMethod::Tag::Noisy);
    CHECK_THROWS_AS(lichi::parse_pilot_method("bogus", 0.5),
                    lichi::ConfigError);
    CHECK_THROWS_AS(lichi::PilotMethod::nr2n(-1.0), lichi::ConfigError);
    CHECK(lichi::pilot_method_name(PilotMethod::avg()) == "avg");
}

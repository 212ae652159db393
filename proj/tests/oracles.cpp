#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lichi::oracles {

Dense Dense::identity(int n) {
    Dense out(n, n);
    for (int i = 0; i < n; ++i) out.at(i, i) = 1.0;
    return out;
}

Dense naive_gram(const Dense& m) {
    Dense out(m.cols, m.cols);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < m.cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < m.rows; ++r) s += m.at(r, i) * m.at(r, j);
            out.at(i, j) = s;
        }
    return out;
}

Dense naive_mul(const Dense& x, const Dense& y) {
    if (x.cols != y.rows) throw std::invalid_argument("shape mismatch");
    Dense out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < y.cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < x.cols; ++r) s += x.at(i, r) * y.at(r, j);
            out.at(i, j) = s;
        }
    return out;
}

std::vector<double> solve_gauss(Dense m, std::vector<double> rhs) {
    const int n = m.rows;
    if (m.cols != n || static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_gauss: bad shapes");
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m.at(r, col)) > std::abs(m.at(pivot, col))) pivot = r;
        if (std::abs(m.at(pivot, col)) < 1e-14)
            throw std::runtime_error("solve_gauss: singular system");
        if (pivot != col) {
            for (int c = 0; c < n; ++c)
                std::swap(m.at(pivot, c), m.at(col, c));
            std::swap(rhs[pivot], rhs[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = m.at(r, col) / m.at(col, col);
            for (int c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < n; ++c) s -= m.at(r, c) * x[c];
        x[r] = s / m.at(r, r);
    }
    return x;
}

double lemma1_objective(const Dense& a, const Dense& theta, double lambda,
                        double mu) {
    const Dense at = naive_mul(a, theta);
    double fit = 0.0;
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) {
            const double d = at.at(r, c) - a.at(r, c);
            fit += d * d;
        }
    double frob = 0.0;
    for (double v : theta.a) frob += v * v;
    double trace = 0.0;
    for (int i = 0; i < theta.rows; ++i) trace += theta.at(i, i);
    return fit + lambda * frob + 2.0 * mu * trace;
}

Dense oracle_lemma1(const Dense& a, double lambda, double mu) {
    const int k = a.cols;
    const Dense g = naive_gram(a);
    Dense lhs = g;
    for (int i = 0; i < k; ++i) lhs.at(i, i) += lambda;
    Dense theta(k, k);
    for (int j = 0; j < k; ++j) {
        std::vector<double> rhs(k);
        for (int i = 0; i < k; ++i) rhs[i] = g.at(i, j);
        rhs[j] -= mu;
        const std::vector<double> col = solve_gauss(lhs, rhs);
        for (int i = 0; i < k; ++i) theta.at(i, j) = col[i];
    }
    return theta;
}

double lemma1_grad_norm(const Dense& a, const Dense& theta, double lambda,
                        double mu) {
    const double h = 1e-6;
    double worst = 0.0;
    Dense probe = theta;
    for (size_t i = 0; i < probe.a.size(); ++i) {
        const double keep = probe.a[i];
        probe.a[i] = keep + h;
        const double up = lemma1_objective(a, probe, lambda, mu);
        probe.a[i] = keep - h;
        const double down = lemma1_objective(a, probe, lambda, mu);
        probe.a[i] = keep;
        worst = std::max(worst, std::abs((up - down) / (2.0 * h)));
    }
    return worst;
}

Dense oracle_prop1(const Dense& x, double sigma, double tau1, double tau2,
                   int samples, std::uint64_t seed) {
    const int k = x.cols;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    Dense lhs(k, k);
    Dense rhs(k, k);
    for (int s = 0; s < samples; ++s) {
        Dense w(x.rows, x.cols);
        for (double& v : w.a) v = gauss(gen);
        Dense a = x;
        Dense c = x;
        for (size_t i = 0; i < a.a.size(); ++i) {
            a.a[i] += tau1 * w.a[i];
            c.a[i] += tau2 * w.a[i];
        }
        Dense at(a.cols, a.rows);
        for (int r = 0; r < a.rows; ++r)
            for (int cc = 0; cc < a.cols; ++cc) at.at(cc, r) = a.at(r, cc);
        const Dense ata = naive_mul(at, a);
        const Dense atc = naive_mul(at, c);
        for (size_t i = 0; i < lhs.a.size(); ++i) {
            lhs.a[i] += ata.a[i] / samples;
            rhs.a[i] += atc.a[i] / samples;
        }
    }
    Dense theta(k, k);
    for (int j = 0; j < k; ++j) {
        std::vector<double> b(k);
        for (int i = 0; i < k; ++i) b[i] = rhs.at(i, j);
        const std::vector<double> col = solve_gauss(lhs, b);
        for (int i = 0; i < k; ++i) theta.at(i, j) = col[i];
    }
    return theta;
}

double prop4_risk(const Dense& x, const Dense& theta, double sigma) {
    const Dense xt = naive_mul(x, theta);
    double fit = 0.0;
    for (size_t i = 0; i < xt.a.size(); ++i) {
        const double d = xt.a[i] - x.a[i];
        fit += d * d;
    }
    double frob = 0.0;
    for (double v : theta.a) frob += v * v;
    return fit + x.rows * sigma * sigma * frob;
}

bool oracle_prop4(const Dense& x, double sigma, int candidates,
                  std::uint64_t seed) {
    const int k = x.cols;
    for (int j = 1; j < k; ++j)
        for (int r = 0; r < x.rows; ++r)
            if (x.at(r, j) != x.at(r, 0))
                throw std::invalid_argument("columns must be identical");
    Dense avg(k, k);
    for (double& v : avg.a) v = 1.0 / k;
    const double best = prop4_risk(x, avg, sigma);

    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> expo(1.0);
    for (int c = 0; c < candidates; ++c) {
        Dense theta(k, k);
        for (int j = 0; j < k; ++j) {
            double total = 0.0;
            for (int i = 0; i < k; ++i) {
                theta.at(i, j) = expo(gen);
                total += theta.at(i, j);
            }
            for (int i = 0; i < k; ++i) theta.at(i, j) /= total;
        }
        if (prop4_risk(x, theta, sigma) < best - 1e-12) return false;
    }
    return true;
}

double max_abs_diff(const Dense& a, const Dense& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i)
        worst = std::max(worst, std::abs(a.a[i] - b.a[i]));
    return worst;
}

}  // namespace lichi::oracles

#include "lichi/weights.hpp"

#include <algorithm>

namespace lichi {

PilotMethod parse_pilot_method(const std::string& name, double alpha) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "sure") return PilotMethod::sure();
    if (s == "nr2n" || s == "noisier2noise") return PilotMethod::nr2n(alpha);
    if (s == "avg") return PilotMethod::avg();
    if (s == "noisy") return PilotMethod::noisy();
    throw ConfigError("unknown pilot method: " + name +
                      " (expected sure|nr2n|avg|noisy)");
}

std::string pilot_method_name(const PilotMethod& m) {
    switch (m.tag) {
        case PilotMethod::Tag::Sure: return "sure";
        case PilotMethod::Tag::Noisier2Noise: return "nr2n";
        case PilotMethod::Tag::Avg: return "avg";
        case PilotMethod::Tag::Noisy: return "noisy";
    }
    return "?";
}

WeightMatrix ridge_form(const Matrix& gram_matrix, double lambda, double mu) {
    Matrix rhs = gram_matrix;
    rhs.diagonal().array() -= mu;
    return solve_spd(gram_matrix, lambda, rhs);
}

WeightMatrix weights_sure(const Matrix& y, double sigma) {
    const double n = static_cast<double>(y.rows());
    try {
        return ridge_form(gram(y), 0.0, n * sigma * sigma);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError(
            "weights_sure: Y'Y is singular; fall back to Noisier2Noise "
            "weights");
    }
}

double sure_value(const Matrix& y, const WeightMatrix& theta, double sigma) {
    if (y.cols() != theta.rows() || theta.rows() != theta.cols())
        throw ConfigError("sure_value: shape mismatch");
    const double n = static_cast<double>(y.rows());
    const double k = static_cast<double>(y.cols());
    const double s2 = sigma * sigma;
    return -k * n * s2 + (y * theta - y).squaredNorm() +
           2.0 * n * s2 * theta.trace();
}

WeightMatrix weights_nr2n(const Matrix& y, double sigma, double alpha) {
    if (alpha <= 0.0) throw ConfigError("weights_nr2n: alpha must be > 0");
    const double n = static_cast<double>(y.rows());
    return ridge_form(gram(y), n * alpha * alpha * sigma * sigma,
                      n * sigma * sigma);
}

WeightMatrix weights_avg(int k) {
    if (k < 1) throw ConfigError("weights_avg: k must be >= 1");
    return Matrix::Constant(k, k, 1.0 / k);
}

WeightMatrix weights_noisy(int k) {
    if (k < 1) throw ConfigError("weights_noisy: k must be >= 1");
    return Matrix::Identity(k, k);
}

WeightMatrix pilot_weights(const Matrix& y, double sigma,
                           const PilotMethod& method) {
    const int k = static_cast<int>(y.cols());
    switch (method.tag) {
        case PilotMethod::Tag::Sure: return weights_sure(y, sigma);
        case PilotMethod::Tag::Noisier2Noise:
            return weights_nr2n(y, sigma, method.alpha);
        case PilotMethod::Tag::Avg: return weights_avg(k);
        case PilotMethod::Tag::Noisy: return weights_noisy(k);
    }
    throw ConfigError("pilot_weights: invalid method");
}

}  // namespace lichi

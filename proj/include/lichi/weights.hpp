#ifndef LICHI_WEIGHTS_HPP
#define LICHI_WEIGHTS_HPP

#include "lichi/linalg.hpp"

namespace lichi {

/// k x k combination weights, applied on the right of a similarity matrix.
using WeightMatrix = Matrix;

/// Weight family used to build the initial pilot.
struct PilotMethod {
    enum class Tag { Sure, Noisier2Noise, Avg, Noisy };
    Tag tag = Tag::Noisier2Noise;
    double alpha = 0.5;  // extra-noise ratio, Noisier2Noise only

    static PilotMethod sure() { return {Tag::Sure, 0.0}; }
    static PilotMethod nr2n(double alpha = 0.5) {
        if (alpha <= 0.0) throw ConfigError("nr2n alpha must be positive");
        return {Tag::Noisier2Noise, alpha};
    }
    static PilotMethod avg() { return {Tag::Avg, 0.0}; }
    static PilotMethod noisy() { return {Tag::Noisy, 0.0}; }
};

PilotMethod parse_pilot_method(const std::string& name, double alpha);
std::string pilot_method_name(const PilotMethod& m);

/// (G + lambda I)^-1 (G - mu I): the minimizer of
/// ||A Theta - A||_F^2 + lambda ||Theta||_F^2 + 2 mu tr(Theta)
/// for G = A'A.
WeightMatrix ridge_form(const Matrix& gram_matrix, double lambda, double mu);

/// (Y'Y)^-1 (Y'Y - n sigma^2 I). Throws SingularMatrixError when Y'Y is not
/// invertible; callers should fall back to Noisier2Noise weights.
WeightMatrix weights_sure(const Matrix& y, double sigma);

/// Stein's unbiased risk estimate of E||Y Theta - X||_F^2:
/// -kn sigma^2 + ||Y Theta - Y||_F^2 + 2n sigma^2 tr(Theta).
double sure_value(const Matrix& y, const WeightMatrix& theta, double sigma);

/// (Y'Y + n (alpha sigma)^2 I)^-1 (Y'Y - n sigma^2 I); always well defined.
WeightMatrix weights_nr2n(const Matrix& y, double sigma, double alpha);

/// Plain averaging: all entries 1/k.
WeightMatrix weights_avg(int k);

/// Do-nothing weights: the identity.
WeightMatrix weights_noisy(int k);

/// Dispatch on the pilot method. `y` is the noisy similarity matrix.
WeightMatrix pilot_weights(const Matrix& y, double sigma,
                           const PilotMethod& method);

}  // namespace lichi

#endif

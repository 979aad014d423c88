#include "cavmem/bins.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "cavmem/errors.hpp"

namespace cavmem {

SpinBins discretize(DistKind kind, double gamma_inh, std::size_t m,
                    double truncation_p, double center_offset) {
    if (!(gamma_inh > 0.0) || !std::isfinite(gamma_inh))
        throw ValidationError("discretize: gamma_inh must be > 0");
    if (m < 1) throw ValidationError("discretize: bin count must be >= 1");
    if (!(truncation_p >= 0.0) || truncation_p >= 0.5)
        throw ValidationError("discretize: truncation_p must be in [0, 0.5)");

    SpinBins bins;
    bins.truncation_p = truncation_p;
    bins.centers.resize(m);
    bins.weights.assign(m, 1.0 / static_cast<double>(m));

    const double p = truncation_p;
    const double sigma = gamma_inh / std::sqrt(2.0 * std::numbers::ln2);  // Gaussian, FWHM-matched

    // Build the upper half from quantiles and mirror the lower half so
    // antisymmetry is exact in floating point.
    for (std::size_t j = m / 2; j < m; ++j) {
        // u - 1/2 = p/2 + (1-p)(j+1/2)/M - 1/2, written to be exactly
        // antisymmetric in (j+1/2) - M/2.
        const double offs =
            (1.0 - p) * ((static_cast<double>(j) + 0.5) / static_cast<double>(m) - 0.5);
        double w;
        if (kind == DistKind::Lorentzian) {
            w = gamma_inh * std::tan(std::numbers::pi * offs);
        } else {
            w = sigma * std::sqrt(2.0) * boost::math::erf_inv(2.0 * offs);
        }
        bins.centers[j] = w;
        if (m - 1 - j != j) bins.centers[m - 1 - j] = -w;
    }
    if (m % 2 == 1) bins.centers[m / 2] = 0.0;

    if (center_offset != 0.0)
        for (double& c : bins.centers) c += center_offset;

    return bins;
}

void validate(const SpinBins& bins) {
    if (bins.centers.empty()) throw ValidationError("bins: empty discretization");
    if (bins.weights.size() != bins.centers.size())
        throw ValidationError("bins: centers/weights size mismatch");
    if (!(bins.truncation_p >= 0.0) || bins.truncation_p >= 0.5)
        throw ValidationError("bins: truncation_p must be in [0, 0.5)");
    double wsum = 0.0;
    for (double w : bins.weights) {
        if (!std::isfinite(w) || w <= 0.0)
            throw ValidationError("bins: weights must be finite and > 0");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw ValidationError("bins: weights must sum to 1");
    for (std::size_t j = 0; j < bins.centers.size(); ++j) {
        if (!std::isfinite(bins.centers[j]))
            throw ValidationError("bins: centers must be finite");
        if (j > 0 && !(bins.centers[j] > bins.centers[j - 1]))
            throw ValidationError("bins: centers must be strictly increasing");
    }
}

}  // namespace cavmem

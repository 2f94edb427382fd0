#include "wwrcva/exposure.hpp"

#include <cmath>
#include <stdexcept>

namespace wwrcva {

void ExposureSpec::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("exposure: sigma must be finite and >= 0");
    }
    if (!std::isfinite(gamma)) throw std::invalid_argument("exposure: gamma must be finite");
    if (kind == ExposureKind::drifted_bridge) {
        if (v0 != 0.0) throw std::invalid_argument("exposure: bridge must start at 0");
        if (!(maturity > 0.0)) throw std::invalid_argument("exposure: bridge maturity must be > 0");
    }
}

void exposure_path(const ExposureSpec& spec, double delta, const std::vector<double>& dw,
                   std::vector<double>& v_out) {
    const std::size_t n = dw.size();
    v_out.resize(n + 1);
    if (spec.kind == ExposureKind::gaussian_forward) {
        double v = spec.v0;
        v_out[0] = v;
        for (std::size_t k = 0; k < n; ++k) {
            v += spec.sigma * dw[k];
            v_out[k + 1] = v;
        }
        return;
    }
    const double T = spec.maturity;
    if (static_cast<double>(n) * delta > T * (1.0 + 1e-9)) {
        throw std::invalid_argument("exposure: grid extends past bridge maturity");
    }
    double m = 0.0;  // running value of gamma t + sigma int (T-s)^{-1} dW
    v_out[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t1 = static_cast<double>(k + 1) * delta;
        const double r0 = T - static_cast<double>(k) * delta;
        const double r1 = T - t1;
        if (r1 <= T * 1e-12) {
            // final step lands on the pin; the bridge is 0 there regardless
            v_out[k + 1] = 0.0;
            break;
        }
        m += spec.gamma * delta + spec.sigma * dw[k] / std::sqrt(r0 * r1);
        v_out[k + 1] = r1 * m;
    }
}

double expected_positive(const ExposureSpec& spec, double u) {
    double mean = 0.0;
    double sd = 0.0;
    if (spec.kind == ExposureKind::gaussian_forward) {
        mean = spec.v0;
        sd = spec.sigma * std::sqrt(u);
    } else {
        const double T = spec.maturity;
        if (u <= 0.0 || u >= T) return 0.0;
        mean = spec.gamma * u * (T - u);
        sd = spec.sigma * std::sqrt(u * (T - u) / T);
    }
    if (sd <= 0.0) return positive_part(mean);
    const double z = mean / sd;
    return mean * norm_cdf(z) + sd * norm_pdf(z);
}

ExposureKind exposure_kind_from_name(const std::string& name) {
    if (name == "forward" || name == "gaussian_forward") return ExposureKind::gaussian_forward;
    if (name == "bridge" || name == "drifted_bridge") return ExposureKind::drifted_bridge;
    throw std::invalid_argument("unknown exposure kind: " + name);
}

std::string exposure_kind_name(ExposureKind k) {
    return k == ExposureKind::gaussian_forward ? "forward" : "bridge";
}

}  // namespace wwrcva

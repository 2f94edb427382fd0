#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace wwrcva {

enum class Model { cir, jcir, tccir };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

// Square-root diffusion dX = kappa (beta - X) dt + eta sqrt(X) dW.
struct CirParams {
    double kappa = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double x0 = 0.0;

    void validate() const;
    // 2 kappa beta >= eta^2 keeps the continuous process away from 0.
    // Recorded, not enforced.
    bool feller() const { return 2.0 * kappa * beta >= eta * eta; }
};

// Compound Poisson with arrival rate omega and Exp(alpha) jump sizes,
// i.e. mean jump 1/alpha. Used both for intensity jumps and the clock.
struct JumpParams {
    double omega = 0.0;  // arrivals per year
    double alpha = 0.0;  // inverse mean jump size

    void validate() const;
};

struct SimConfig {
    double T = 3.0;      // pricing horizon
    double delta = 0.01; // base grid step
    long m = 100000;     // scenario count
    double rho = 0.0;    // exposure/intensity driver correlation
    std::uint64_t seed = 0;

    long steps() const;  // T/delta, validated integral
    void validate() const;
};

struct PricingConfig {
    double recovery = 0.0;
    double rate = 0.0;  // flat short rate for the discount factor
};

struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a negative intensity shows up outside fp-noise tolerance,
// which can only happen in a negative-shift regime.
struct NegativeIntensityError : std::runtime_error {
    NegativeIntensityError(const std::string& context, double t_, double value_)
        : std::runtime_error(context + ": negative intensity " + std::to_string(value_) +
                             " at t=" + std::to_string(t_)),
          t(t_), value(value_) {}
    double t;
    double value;
};

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// standard normal cdf / pdf
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace wwrcva

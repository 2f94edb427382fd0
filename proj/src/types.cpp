#include "wwrcva/types.hpp"

#include <cmath>

namespace wwrcva {

std::string model_name(Model m) {
    switch (m) {
        case Model::cir: return "CIR";
        case Model::jcir: return "JCIR";
        case Model::tccir: return "TCCIR";
    }
    throw std::invalid_argument("model_name: unknown model");
}

Model model_from_name(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "cir") return Model::cir;
    if (s == "jcir") return Model::jcir;
    if (s == "tccir" || s == "tc-cir" || s == "tc_cir") return Model::tccir;
    throw std::invalid_argument("unknown model name: " + name);
}

void CirParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("CirParams: kappa must be positive");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("CirParams: eta must be positive");
    if (beta < 0.0 || !std::isfinite(beta))
        throw std::invalid_argument("CirParams: beta must be nonnegative");
    if (x0 < 0.0 || !std::isfinite(x0))
        throw std::invalid_argument("CirParams: x0 must be nonnegative");
}

void JumpParams::validate() const {
    if (omega < 0.0 || !std::isfinite(omega))
        throw std::invalid_argument("JumpParams: omega must be nonnegative");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("JumpParams: alpha must be positive");
}

long SimConfig::steps() const {
    double n = T / delta;
    long rounded = std::lround(n);
    if (rounded < 1 || std::abs(n - static_cast<double>(rounded)) > 1e-6)
        throw std::invalid_argument("SimConfig: T must be an integer multiple of delta");
    return rounded;
}

void SimConfig::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("SimConfig: T must be positive");
    if (!(delta > 0.0) || delta > T) throw std::invalid_argument("SimConfig: bad delta");
    if (m < 1) throw std::invalid_argument("SimConfig: m must be >= 1");
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("SimConfig: |rho| must be <= 1");
    (void)steps();
}

}  // namespace wwrcva

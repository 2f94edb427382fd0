#include "wwrcva/curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wwrcva/quad.hpp"

namespace wwrcva {

MarketCurve::MarketCurve(std::vector<double> times, std::vector<double> hazards)
    : times_(std::move(times)), hazards_(std::move(hazards)) {
    if (times_.empty() || times_.size() != hazards_.size())
        throw std::invalid_argument("MarketCurve: need matching nonempty times/hazards");
    if (times_.front() != 0.0)
        throw std::invalid_argument("MarketCurve: first breakpoint must be t=0");
    for (size_t i = 0; i < times_.size(); ++i) {
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw std::invalid_argument("MarketCurve: breakpoints must be ascending");
        if (hazards_[i] < 0.0 || !std::isfinite(hazards_[i]))
            throw std::invalid_argument("MarketCurve: hazards must be nonnegative");
    }
    cum_.resize(times_.size(), 0.0);
    for (size_t i = 1; i < times_.size(); ++i)
        cum_[i] = cum_[i - 1] + hazards_[i - 1] * (times_[i] - times_[i - 1]);
}

MarketCurve MarketCurve::flat(double hazard) { return MarketCurve({0.0}, {hazard}); }

MarketCurve MarketCurve::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("MarketCurve: cannot open " + path);
    std::vector<double> ts, hs;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t, h;
        if (ls >> t >> h) {
            ts.push_back(t);
            hs.push_back(h);
        }
    }
    return MarketCurve(std::move(ts), std::move(hs));
}

double MarketCurve::hazard(double t) const {
    if (t < 0.0) throw std::invalid_argument("MarketCurve: negative time");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return hazards_[static_cast<size_t>(it - times_.begin()) - 1];
}

double MarketCurve::integrated_hazard(double t) const {
    if (t < 0.0) throw std::invalid_argument("MarketCurve: negative time");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t i = static_cast<size_t>(it - times_.begin()) - 1;
    return cum_[i] + hazards_[i] * (t - times_[i]);
}

ShiftCurve::ShiftCurve(Model model, double step, std::vector<double> values, double tol)
    : model_(model), step_(step), values_(std::move(values)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("ShiftCurve: step must be positive");
    if (values_.size() < 2) throw std::invalid_argument("ShiftCurve: need at least two nodes");
    min_value_ = *std::min_element(values_.begin(), values_.end());
    nonnegative_ = min_value_ >= -tol;
    cumulative_.resize(values_.size(), 0.0);
    for (size_t i = 1; i < values_.size(); ++i)
        cumulative_[i] = cumulative_[i - 1] + 0.5 * step_ * (values_[i - 1] + values_[i]);
}

namespace {

size_t shift_cell(double t, double step, size_t n_values, const char* who) {
    if (t < 0.0) throw std::out_of_range(std::string(who) + ": negative time");
    double horizon = step * (static_cast<double>(n_values) - 1.0);
    if (t > horizon * (1.0 + 1e-9) + 1e-12)
        throw std::out_of_range(std::string(who) + ": time beyond curve horizon");
    size_t i = static_cast<size_t>(t / step);
    return std::min(i, n_values - 2);
}

}  // namespace

double ShiftCurve::value(double t) const {
    size_t i = shift_cell(t, step_, values_.size(), "ShiftCurve::value");
    double w = (t - step_ * static_cast<double>(i)) / step_;
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double ShiftCurve::integral(double t) const {
    size_t i = shift_cell(t, step_, values_.size(), "ShiftCurve::integral");
    double ti = step_ * static_cast<double>(i);
    return cumulative_[i] + 0.5 * (t - ti) * (values_[i] + value(t));
}

void ShiftCurve::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ShiftCurve: cannot write " + path);
    out << "t,psi\n";
    char buf[80];
    for (size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", step_ * static_cast<double>(i), values_[i]);
        out << buf;
    }
}

ShiftCurve ShiftCurve::read_csv(const std::string& path, Model model, double tol) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ShiftCurve: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> ts, vs;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, v;
        if (ls >> t >> v) {
            ts.push_back(t);
            vs.push_back(v);
        }
    }
    if (ts.size() < 2) throw std::runtime_error("ShiftCurve: too few rows in " + path);
    double step = ts[1] - ts[0];
    for (size_t i = 1; i < ts.size(); ++i)
        if (std::abs(ts[i] - ts[i - 1] - step) > 1e-9 * std::max(1.0, step))
            throw std::runtime_error("ShiftCurve: non-uniform grid in " + path);
    return ShiftCurve(model, step, std::move(vs), tol);
}

BondFactors cir_bond_factors(const CirParams& p, double t, double T) {
    p.validate();
    if (T < t) throw std::invalid_argument("cir_bond_factors: T < t");
    double tau = T - t;
    if (tau == 0.0) return {1.0, 0.0, 0.0};
    double gamma = std::sqrt(p.kappa * p.kappa + 2.0 * p.eta * p.eta);
    double em = std::exp(-gamma * tau);
    double one_m = -std::expm1(-gamma * tau);  // 1 - e^{-gamma tau}
    double den = (gamma + p.kappa) * one_m + 2.0 * gamma * em;
    double B = 2.0 * one_m / den;
    double c = 2.0 * p.kappa * p.beta / (p.eta * p.eta);
    double lnA = c * (std::log(2.0 * gamma) + 0.5 * (p.kappa - gamma) * tau - std::log(den));
    return {std::exp(lnA), B, lnA};
}

double cir_survival(const CirParams& p, double T, double x) {
    if (x < 0.0) throw std::invalid_argument("cir_survival: negative state");
    BondFactors f = cir_bond_factors(p, 0.0, T);
    return std::exp(f.lnA - f.B * x);
}

double jcir_survival(const CirParams& p, const JumpParams& jumps, double T, double x,
                     double tol) {
    jumps.validate();
    if (x < 0.0) throw std::invalid_argument("jcir_survival: negative state");
    BondFactors f = cir_bond_factors(p, 0.0, T);
    double corr = 0.0;
    if (jumps.omega > 0.0 && T > 0.0) {
        corr = adaptive_simpson(
            [&](double s) {
                double B = cir_bond_factors(p, s, T).B;
                return B / (jumps.alpha + B);
            },
            0.0, T, 1e-14, tol);
    }
    return std::exp(f.lnA - f.B * x - jumps.omega * corr);
}

double levy_exponent(const JumpParams& clock, double u) {
    clock.validate();
    if (u < 0.0) throw std::invalid_argument("levy_exponent: negative argument");
    return u * (u + clock.alpha + clock.omega) / (u + clock.alpha);
}

double subordinated_survival(const CirParams& p, const JumpParams& clock, double T,
                             double x, double tol) {
    clock.validate();
    if (x < 0.0) throw std::invalid_argument("subordinated_survival: negative state");
    if (T < 0.0) throw std::invalid_argument("subordinated_survival: negative horizon");
    if (!(tol > 0.0)) throw std::invalid_argument("subordinated_survival: tol must be positive");
    if (T == 0.0) return 1.0;

    double mu = clock.omega * T;
    double pois = std::exp(-mu);
    double base = cir_survival(p, T, x);
    double total = pois * base;
    double cdf = pois;
    double quad_tol = 0.01 * tol;
    int n = 0;
    while (1.0 - cdf > tol) {
        ++n;
        if (n > 200)
            throw NumericsError("subordinated_survival: Poisson series too long for tol");
        pois *= mu / static_cast<double>(n);
        cdf += pois;
        double lgn = std::lgamma(static_cast<double>(n));
        double integral = gauss_laguerre_escalated(
            [&](double z) {
                double s = T + z / clock.alpha;
                BondFactors f = cir_bond_factors(p, 0.0, s);
                return std::exp(f.lnA - f.B * x + (n - 1) * std::log(z) - lgn);
            },
            quad_tol);
        total += pois * integral;
    }
    return total;
}

double adjusted_killing_rate(const CirParams& p, const JumpParams& clock, double x,
                             double tol) {
    clock.validate();
    if (x < 0.0) throw std::invalid_argument("adjusted_killing_rate: negative state");
    if (clock.omega == 0.0) {
        p.validate();
        return x;
    }
    double wedge = gauss_laguerre_escalated(
        [&](double z) {
            BondFactors f = cir_bond_factors(p, 0.0, z / clock.alpha);
            return -std::expm1(f.lnA - f.B * x);  // 1 - A e^{-Bx}
        },
        tol);
    return x + clock.omega * wedge;
}

KillingRateTable::KillingRateTable(const CirParams& p, const JumpParams& clock,
                                   double x_max, int points, double tol)
    : x_max_(x_max), tol_(tol), p_(p), clock_(clock) {
    if (points < 2 || !(x_max > 0.0))
        throw std::invalid_argument("KillingRateTable: bad grid spec");
    dx_ = x_max_ / static_cast<double>(points - 1);
    table_.resize(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        double x = dx_ * static_cast<double>(i);
        table_[static_cast<size_t>(i)] = adjusted_killing_rate(p, clock, x, tol) - x;
    }
}

double KillingRateTable::operator()(double x) const {
    if (table_.empty()) throw std::logic_error("KillingRateTable: empty table");
    if (x <= 0.0) return table_.front();  // wedge at the origin; callers pass x >= 0
    if (x >= x_max_) return adjusted_killing_rate(p_, clock_, x, tol_);  // rare, exact
    double u = x / dx_;
    size_t i = static_cast<size_t>(u);
    double w = u - static_cast<double>(i);
    double wedge = table_[i] + w * (table_[i + 1] - table_[i]);
    return x + wedge;
}

void ModelParams::validate() const {
    cir.validate();
    if (model != Model::cir) jumps.validate();
}

double model_survival(const ModelParams& mp, double T, double tol) {
    switch (mp.model) {
        case Model::cir: return cir_survival(mp.cir, T, mp.cir.x0);
        case Model::jcir: return jcir_survival(mp.cir, mp.jumps, T, mp.cir.x0, tol);
        case Model::tccir: return subordinated_survival(mp.cir, mp.jumps, T, mp.cir.x0, tol);
    }
    throw std::invalid_argument("model_survival: unknown model");
}

ShiftCurve calibrate_shift(const ModelParams& mp, const MarketCurve& market,
                           double horizon, double step, double tol) {
    mp.validate();
    if (!(horizon > 0.0) || !(step > 0.0) || step > horizon)
        throw std::invalid_argument("calibrate_shift: bad grid");
    double n_real = horizon / step;
    long n = std::lround(n_real);
    if (n < 2 || std::abs(n_real - static_cast<double>(n)) > 1e-6)
        throw std::invalid_argument("calibrate_shift: horizon must be an integer multiple of step");

    // q(t) = ln P_model(0,t) - ln P_market(0,t); psi = dq/dt
    std::vector<double> q(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) {
        double t = step * static_cast<double>(i);
        double pm;
        try {
            pm = model_survival(mp, t, tol);
        } catch (const std::exception& e) {
            throw CalibrationError(std::string("calibrate_shift: model survival failed at t=") +
                                   std::to_string(t) + ": " + e.what());
        }
        if (!(pm > 0.0) || !std::isfinite(pm))
            throw CalibrationError("calibrate_shift: nonpositive model survival");
        q[static_cast<size_t>(i)] = std::log(pm) + market.integrated_hazard(t);
    }
    std::vector<double> psi(q.size());
    size_t last = q.size() - 1;
    psi[0] = (q[1] - q[0]) / step;
    for (size_t i = 1; i < last; ++i) psi[i] = (q[i + 1] - q[i - 1]) / (2.0 * step);
    psi[last] = (q[last] - q[last - 1]) / step;
    return ShiftCurve(mp.model, step, std::move(psi));
}

double shifted_survival(const ModelParams& mp, const ShiftCurve& shift, double t, double tol) {
    return std::exp(-shift.integral(t)) * model_survival(mp, t, tol);
}

}  // namespace wwrcva

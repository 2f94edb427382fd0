#include "wwrcva/paths.hpp"

#include <algorithm>
#include <cmath>

namespace wwrcva {

double ClockPath::theta(double t) const {
    auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    if (it == jump_times.begin()) return t;
    return t + size_prefix[static_cast<size_t>(it - jump_times.begin()) - 1];
}

double ClockPath::theta_before(size_t i) const {
    double acc = i == 0 ? 0.0 : size_prefix[i - 1];
    return jump_times[i] + acc;
}

ClockPath sample_clock(const JumpParams& clock, double T, RandomStream& arrivals,
                       RandomStream& sizes) {
    clock.validate();
    if (!(T > 0.0)) throw std::invalid_argument("sample_clock: T must be positive");
    ClockPath path;
    path.T = T;
    if (clock.omega == 0.0) return path;
    double t = arrivals.exponential() / clock.omega;
    double acc = 0.0;
    while (t <= T) {
        path.jump_times.push_back(t);
        double y = sizes.exponential() / clock.alpha;
        path.jump_sizes.push_back(y);
        acc += y;
        path.size_prefix.push_back(acc);
        t += arrivals.exponential() / clock.omega;
    }
    return path;
}

std::size_t RefinedGrid::find_node(double u) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), u - 1e-12);
    if (it == nodes.end() || std::abs(*it - u) > 1e-9 * std::max(1.0, std::abs(u)))
        throw std::invalid_argument("RefinedGrid: no node at requested time");
    return static_cast<std::size_t>(it - nodes.begin());
}

RefinedGrid build_refined_grid(const ClockPath& clock, double delta,
                               const std::vector<double>& extra_nodes) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_refined_grid: bad delta");
    double n_real = clock.T / delta;
    long n = std::lround(n_real);
    if (n < 1 || std::abs(n_real - static_cast<double>(n)) > 1e-6)
        throw std::invalid_argument("build_refined_grid: T must be an integer multiple of delta");

    RefinedGrid grid;
    grid.delta = delta;
    grid.T = clock.T;
    grid.nodes.push_back(0.0);
    grid.base_index.resize(static_cast<size_t>(n) + 1);
    grid.base_index[0] = 0;

    for (size_t j = 0; j < clock.jump_times.size(); ++j) {
        double lo = clock.theta_before(j);
        double hi = lo + clock.jump_sizes[j];
        if (hi > lo) grid.gaps.emplace_back(lo, hi);
    }

    std::vector<double> cell;  // interior points of the current base cell
    size_t jump_cursor = 0;
    for (long k = 1; k <= n; ++k) {
        double t_prev = delta * static_cast<double>(k - 1);
        double t_k = delta * static_cast<double>(k);
        double u0 = grid.nodes.back();
        double u1 = clock.theta(t_k);
        cell.clear();
        // endpoints of gaps opened by jumps inside (t_prev, t_k]
        while (jump_cursor < clock.jump_times.size() &&
               clock.jump_times[jump_cursor] <= t_k) {
            if (clock.jump_times[jump_cursor] > t_prev) {
                double lo = clock.theta_before(jump_cursor);
                double hi = lo + clock.jump_sizes[jump_cursor];
                if (lo > u0 && lo < u1) cell.push_back(lo);
                if (hi > u0 && hi < u1) cell.push_back(hi);
            }
            ++jump_cursor;
        }
        // uniform fill so no interval exceeds delta
        double span = u1 - u0;
        long fills = std::max(1L, static_cast<long>(std::ceil(span / delta - 1e-12)));
        for (long f = 1; f < fills; ++f)
            cell.push_back(u0 + span * static_cast<double>(f) / static_cast<double>(fills));
        std::sort(cell.begin(), cell.end());
        cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        for (double u : cell)
            if (u > grid.nodes.back()) grid.nodes.push_back(u);
        if (u1 > grid.nodes.back()) grid.nodes.push_back(u1);
        grid.base_index[static_cast<size_t>(k)] = grid.nodes.size() - 1;
    }

    if (!extra_nodes.empty()) {
        std::vector<double> merged = grid.nodes;
        for (double u : extra_nodes)
            if (u > 0.0 && u < grid.nodes.back()) merged.push_back(u);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        if (merged.size() != grid.nodes.size()) {
            // recompute base positions in the merged grid
            std::vector<std::size_t> idx(grid.base_index.size());
            for (size_t k = 0; k < grid.base_index.size(); ++k) {
                double u = grid.nodes[grid.base_index[k]];
                idx[k] = static_cast<size_t>(
                    std::lower_bound(merged.begin(), merged.end(), u) - merged.begin());
            }
            grid.nodes = std::move(merged);
            grid.base_index = std::move(idx);
        }
    }

    grid.in_gap.assign(grid.nodes.size() - 1, 0);
    size_t g = 0;
    for (size_t j = 0; j + 1 < grid.nodes.size(); ++j) {
        double a = grid.nodes[j];
        while (g < grid.gaps.size() && grid.gaps[g].second <= a) ++g;
        if (g < grid.gaps.size() && grid.gaps[g].first <= a &&
            grid.nodes[j + 1] <= grid.gaps[g].second)
            grid.in_gap[j] = 1;
    }
    return grid;
}

void simulate_cir_euler(const CirParams& p, const std::vector<double>& nodes,
                        const std::vector<double>& dw, std::vector<double>& x_out) {
    if (nodes.size() < 2 || dw.size() != nodes.size() - 1)
        throw std::invalid_argument("simulate_cir_euler: grid/driver size mismatch");
    x_out.resize(nodes.size());
    x_out[0] = p.x0;
    double x = p.x0;
    for (size_t j = 0; j + 1 < nodes.size(); ++j) {
        double dt = nodes[j + 1] - nodes[j];
        double xp = x > 0.0 ? x : 0.0;
        x += p.kappa * (p.beta - xp) * dt + p.eta * std::sqrt(xp) * dw[j];
        x_out[j + 1] = x;
    }
}

void simulate_jcir_euler(const CirParams& p, const std::vector<double>& nodes,
                         const std::vector<double>& dw,
                         const std::vector<double>& jump_times,
                         const std::vector<double>& jump_sizes,
                         std::vector<double>& x_out) {
    if (nodes.size() < 2 || dw.size() != nodes.size() - 1)
        throw std::invalid_argument("simulate_jcir_euler: grid/driver size mismatch");
    if (jump_times.size() != jump_sizes.size())
        throw std::invalid_argument("simulate_jcir_euler: jump arrays mismatch");
    x_out.resize(nodes.size());
    x_out[0] = p.x0;
    double x = p.x0;
    size_t jc = 0;
    for (size_t j = 0; j + 1 < nodes.size(); ++j) {
        double dt = nodes[j + 1] - nodes[j];
        double xp = x > 0.0 ? x : 0.0;
        x += p.kappa * (p.beta - xp) * dt + p.eta * std::sqrt(xp) * dw[j];
        while (jc < jump_times.size() && jump_times[jc] <= nodes[j + 1]) {
            if (jump_times[jc] > nodes[j]) x += jump_sizes[jc];
            ++jc;
        }
        x_out[j + 1] = x;
    }
}

void correlate_drivers(const std::vector<double>& dwv, const std::vector<double>& dwp,
                       double rho, std::vector<double>& dwl) {
    if (dwv.size() != dwp.size())
        throw std::invalid_argument("correlate_drivers: driver size mismatch");
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::invalid_argument("correlate_drivers: |rho| must be <= 1");
    double c = std::sqrt(1.0 - rho * rho);
    dwl.resize(dwv.size());
    for (size_t j = 0; j < dwv.size(); ++j) dwl[j] = rho * dwv[j] + c * dwp[j];
}

void synchronized_increments(const RefinedGrid& grid, const std::vector<double>& dw,
                             std::vector<double>& dw_sync) {
    if (dw.size() != grid.intervals())
        throw std::invalid_argument("synchronized_increments: driver size mismatch");
    if (grid.in_gap.size() != grid.intervals())
        throw std::invalid_argument("synchronized_increments: grid gap flags missing");
    size_t n = grid.base_index.size() - 1;
    dw_sync.resize(n);
    for (size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (size_t j = grid.base_index[k]; j < grid.base_index[k + 1]; ++j)
            if (!grid.in_gap[j]) acc += dw[j];
        dw_sync[k] = acc;
    }
}

void survival_path(const std::vector<double>& lambda, double delta, const char* context,
                   std::vector<double>& s_out) {
    if (lambda.size() < 2) throw std::invalid_argument("survival_path: too few nodes");
    s_out.resize(lambda.size());
    s_out[0] = 1.0;
    double cum = 0.0;
    double prev = lambda[0];
    for (size_t k = 0; k < lambda.size(); ++k) {
        double lam = lambda[k];
        if (lam < 0.0) {
            if (lam < -1e-8)
                throw NegativeIntensityError(context, delta * static_cast<double>(k), lam);
            lam = 0.0;
        }
        if (k > 0) {
            cum += 0.5 * delta * (prev + lam);
            s_out[k] = std::exp(-cum);
        }
        prev = lam;
    }
}

}  // namespace wwrcva

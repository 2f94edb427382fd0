#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wwrcva/rng.hpp"
#include "wwrcva/types.hpp"

namespace wwrcva {

// One realization of the business clock theta_t = t + sum of jumps by t,
// right-continuous, jumps attached to their arrival time.
struct ClockPath {
    double T = 0.0;
    std::vector<double> jump_times;   // ascending, in (0, T]
    std::vector<double> jump_sizes;   // positive
    std::vector<double> size_prefix;  // cumulative sizes, size_prefix[i] = sum through jump i

    double theta(double t) const;        // image of real time t
    double theta_before(size_t i) const; // image just before jump i
    double total() const { return theta(T); }
};

ClockPath sample_clock(const JumpParams& clock, double T, RandomStream& arrivals,
                       RandomStream& sizes);

// Simulation grid on the clock-image axis [0, theta_T]. Contains the images
// of all base nodes k*delta, both endpoints of every jump gap, and enough
// fill-in nodes that no interval exceeds delta. Intervals lying inside a jump
// gap are flagged so the synchronized driver can skip them.
struct RefinedGrid {
    double delta = 0.0;
    double T = 0.0;
    std::vector<double> nodes;                     // strictly increasing, nodes[0] = 0
    std::vector<std::uint8_t> in_gap;              // one flag per interval
    std::vector<std::size_t> base_index;           // node position of theta(k*delta)
    std::vector<std::pair<double, double>> gaps;   // (theta(t-), theta(t)) per jump

    std::size_t intervals() const { return nodes.size() - 1; }
    std::size_t find_node(double u) const;  // exact lookup, throws if absent
};

RefinedGrid build_refined_grid(const ClockPath& clock, double delta,
                               const std::vector<double>& extra_nodes = {});

// Full-truncation Euler for the square-root diffusion on an arbitrary grid:
// the positive part of the running state feeds drift and diffusion, the state
// itself is left untruncated. dw are Brownian increments over the intervals.
void simulate_cir_euler(const CirParams& p, const std::vector<double>& nodes,
                        const std::vector<double>& dw, std::vector<double>& x_out);

// Same scheme plus compound Poisson jumps, each added at the end of the grid
// step containing its arrival (grid nodes treated as right endpoints).
void simulate_jcir_euler(const CirParams& p, const std::vector<double>& nodes,
                         const std::vector<double>& dw,
                         const std::vector<double>& jump_times,
                         const std::vector<double>& jump_sizes,
                         std::vector<double>& x_out);

// dwl = rho * dwv + sqrt(1-rho^2) * dwp, elementwise.
void correlate_drivers(const std::vector<double>& dwv, const std::vector<double>& dwp,
                       double rho, std::vector<double>& dwl);

// Per-base-cell increments of the synchronized exposure driver: accumulate
// the fine-grid increments of each base cell, skipping jump-gap intervals.
// The result is a standard Brownian increment sequence on the base grid.
void synchronized_increments(const RefinedGrid& grid, const std::vector<double>& dw,
                             std::vector<double>& dw_sync);

// S_k = exp(-trapezoid of lambda up to k*delta). Values in [-1e-8, 0) are
// treated as exact zeros (calibration-grade fp noise); anything below that
// means a negative-shift setup and raises NegativeIntensityError.
void survival_path(const std::vector<double>& lambda, double delta,
                   const char* context, std::vector<double>& s_out);

}  // namespace wwrcva

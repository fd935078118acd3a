#pragma once

#include "deltaiss/matrix.hpp"
#include "deltaiss/models.hpp"

#include <cstdint>
#include <vector>

namespace deltaiss::sim {

/// Simulated run: rows are time steps. `states` has one more row than
/// `inputs` (the initial state is included); `outputs` has one row per input.
struct Trajectory {
    DenseMatrix states;  // (T+1) x n
    DenseMatrix outputs; // T x l
    DenseMatrix inputs;  // T x m
};

/// Input/output records for identification, equal length.
struct Dataset {
    DenseMatrix inputs;   // T x m
    DenseMatrix outputs;  // T x l
    double sample_period = 1.0; // seconds
};

Trajectory simulate(const models::GenericRnn& model, const std::vector<double>& x0,
                    const DenseMatrix& inputs);

/// Per-step distance ||x1(k) - x2(k)|| between two runs of the same model.
struct DivergenceSeries {
    std::vector<double> distances; // T+1 entries
    double terminal() const { return distances.back(); }
    double max() const;
};

DivergenceSeries simulate_pair(const models::GenericRnn& model,
                               const std::vector<double>& x01, const std::vector<double>& x02,
                               const DenseMatrix& u1, const DenseMatrix& u2);

/// Multilevel pseudo-random signal: piecewise constant, each segment's level
/// drawn uniformly from `levels` equispaced values in [low, high].
std::vector<double> mprs(double low, double high, int levels, int hold_steps, int length,
                         std::uint64_t seed);

struct ReadoutFit {
    DenseMatrix w_out1; // l x nu
    DenseMatrix w_out2; // l x m
    double ridge_used = 0.0;
    bool rank_deficient = false;
};

/// Least-squares readout identification for an ESN reservoir, teacher-forced
/// on the dataset outputs; the first `washout` samples are discarded. The
/// readout fields of `reservoir` are ignored. A rank-deficient regressor
/// falls back to a small ridge.
ReadoutFit train_esn_readout(const models::Esn& reservoir, const Dataset& data, int washout,
                             double ridge = 0.0);

/// 100 * (1 - ||y - y_model|| / ||y - mean(y)||), the identification fit
/// index in (-inf, 100].
double fit_percent(const DenseMatrix& y_true, const DenseMatrix& y_model);

/// Plant and observer in lockstep; returns ||x(k) - xhat(k)|| per step.
std::vector<double> observer_run(const models::GenericRnn& model, const DenseMatrix& l_gain,
                                 const std::vector<double>& x0, const std::vector<double>& xhat0,
                                 const DenseMatrix& inputs);

} // namespace deltaiss::sim

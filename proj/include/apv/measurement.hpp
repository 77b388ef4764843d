#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "apv/constants.hpp"
#include "apv/light_shift.hpp"
#include "apv/species.hpp"

namespace apv {

/// Two pi/2 pulses separated by free_time, local oscillator at phase_reference.
struct RamseySequence {
    double free_time = 0.0;        // s
    double phase_reference = 0.0;  // rad/s
    double contrast = 1.0;

    void validate() const;
};

/// p = (1 + C exp(-T/tau) cos((w - w_ref) T)) / 2, clamped to [0, 1].
/// An infinite tau disables decay.
double ramsey_probability(double true_freq, const RamseySequence& sequence, double decoherence_tau);

struct NoiseModel {
    double b_field_sigma = 0.0;   // rad/s, white Gaussian Larmor offset per trial
    double position_sigma = 0.0;  // m, Gaussian displacement along each standing axis
    double decoherence_tau = std::numeric_limits<double>::infinity();  // s
    std::vector<QuenchRate> quench_rates;
    double common_mode_drift = 0.0;  // rad/s, equal shift of both ground sublevels
    double larmor_drift = 0.0;       // rad/s per s of elapsed campaign time
    /// false: every trial contributes its probability instead of a Bernoulli bit.
    bool projection_noise = true;

    void validate() const;
    /// Mean S1/2 (+-1/2) quench rate, applied as extra exponential contrast loss.
    double ground_quench_rate() const;
};

struct ExperimentPlan {
    IonSpecies species;
    LightShiftSetup setup;
    RamseySequence sequence;
    PhysicalConstants constants;
    double zeeman_splitting = 0.0;  // rad/s, bare Larmor splitting
    /// Added to phase_reference for the lasers-on arm so both arms can sit on
    /// the half-fringe point.
    double on_reference_offset = 0.0;
    /// Detuning of E'' from the S-D resonance; enables the common-mode quadrupole shift.
    std::optional<double> quad_detuning;
    std::size_t trials_per_block = 0;
    std::size_t blocks = 0;
    bool interleave = true;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct BlockEstimate {
    std::size_t block = 0;
    bool valid = false;
    double freq_on = 0.0;
    double freq_off = 0.0;
    double larmor_shift = 0.0;
    double variance_on = 0.0;
    double variance_off = 0.0;
};

struct EstimatorResult {
    Estimate freq_on;        // Larmor splitting, lasers on
    Estimate freq_off;       // Larmor splitting, lasers off
    Estimate larmor_shift;   // freq_on - freq_off
    Estimate pnc_shift_estimate;  // per-sublevel shift, larmor_shift / 2
    /// Prediction of the physics core at ideal placement (rad/s, m = +1/2).
    double expected_pnc_shift = 0.0;
    /// Spread of per-block estimates / sqrt(blocks); NaN for a single block.
    double scatter_stderr = std::numeric_limits<double>::quiet_NaN();
    /// Sensitivity relative to the ideal hbar / (E0' sqrt(t tau)) limit.
    double effective_f = std::numeric_limits<double>::quiet_NaN();
    std::size_t trials_used = 0;
    std::size_t blocks_used = 0;
    std::size_t blocks_discarded = 0;
    std::uint64_t seed = 0;
    std::vector<BlockEstimate> blocks;
};

/// One projective readout. Fully determined by (seed, trial_index, lasers_on).
bool simulate_trial(const ExperimentPlan& plan, const NoiseModel& noise, std::uint64_t trial_index,
                    bool lasers_on);

/// The Ramsey probability used by simulate_trial for the same trial (noise
/// draws included, Bernoulli draw excluded).
double trial_probability(const ExperimentPlan& plan, const NoiseModel& noise,
                         std::uint64_t trial_index, bool lasers_on);

/// Contrast assumed by the fringe inversion: sequence contrast times
/// decoherence, quench and magnetic-noise damping.
double effective_contrast(const ExperimentPlan& plan, const NoiseModel& noise);

/// Interleaved lasers-on/off campaign with two-point fringe inversion per block.
/// Throws EstimatorError when every block is out of range.
EstimatorResult run_experiment(const ExperimentPlan& plan, const NoiseModel& noise);

struct ScalingRow {
    double obs_time = 0.0;       // s per arm
    double coherence_tau = 0.0;  // s
    double free_time = 0.0;      // s
    std::size_t trials = 0;      // per arm
    double stderr_empirical = 0.0;  // block scatter, rad/s
    double stderr_reported = 0.0;   // propagated binomial, rad/s
    double predicted_shape = 0.0;   // 1 / sqrt(t tau)
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    /// Least-squares slope of log stderr_empirical against log(t tau).
    double exponent = 0.0;
};

/// Runs the plan on the grid t x tau with free_time = free_time_fraction x tau
/// and trials = t / free_time per arm. Needs at least three values per axis.
ScalingStudy verify_scaling(const ExperimentPlan& base, const NoiseModel& noise,
                            std::span<const double> obs_times, std::span<const double> taus,
                            double free_time_fraction = 0.5);

/// 1 - E'(offset) / E0' for a fixed displacement along the E' standing axis.
double position_offset_bias(const ExperimentPlan& plan, double offset);

struct JitterBias {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo mean of 1 - E'(s) / E0' with s ~ N(0, sigma^2).
JitterBias position_jitter_bias(const ExperimentPlan& plan, double sigma, std::size_t samples);

}  // namespace apv

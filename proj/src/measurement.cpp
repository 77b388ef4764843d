#include "apv/measurement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "apv/budget.hpp"
#include "apv/errors.hpp"
#include "apv/philox.hpp"

namespace apv {

namespace {

constexpr std::uint32_t kStreamLasersOff = 0x0;
constexpr std::uint32_t kStreamLasersOn = 0x1;
constexpr std::uint32_t kStreamJitter = 0x10;

struct TrialDraws {
    double readout;
    double b_field;
    double along_pnc_axis;
    double along_quad_axis;
};

TrialDraws draw(std::uint64_t seed, std::uint64_t trial_index, bool lasers_on) {
    CounterRng rng(seed, trial_index, lasers_on ? kStreamLasersOn : kStreamLasersOff);
    TrialDraws d{};
    d.readout = rng.uniform();
    d.b_field = rng.normal();
    d.along_pnc_axis = rng.normal();
    d.along_quad_axis = rng.normal();
    return d;
}

/// Per-run quantities shared by every trial.
struct TrialContext {
    const ExperimentPlan& plan;
    const NoiseModel& noise;
    SublevelShifts ideal_pnc;
    SublevelShifts ideal_quad;
    double quench_damping;

    TrialContext(const ExperimentPlan& p, const NoiseModel& n)
        : plan(p), noise(n), ideal_pnc(pnc_shifts(p.species, p.setup)) {
        if (p.quad_detuning) ideal_quad = quad_shifts(p.species, p.setup, *p.quad_detuning);
        quench_damping = std::exp(-n.ground_quench_rate() * p.sequence.free_time);
    }

    double reference(bool lasers_on) const {
        return plan.sequence.phase_reference + (lasers_on ? plan.on_reference_offset : 0.0);
    }

    double trial_time(std::uint64_t index, bool lasers_on) const {
        const std::uint64_t n = plan.trials_per_block;
        const std::uint64_t block = index / n;
        const std::uint64_t within = index % n;
        const std::uint64_t slot = plan.interleave ? 2 * (block * n + within) + (lasers_on ? 0 : 1)
                                                   : 2 * block * n + (lasers_on ? within : n + within);
        return static_cast<double>(slot) * plan.sequence.free_time;
    }

    double probability(std::uint64_t index, bool lasers_on, const TrialDraws& d) const {
        const double bare = plan.zeeman_splitting + noise.larmor_drift * trial_time(index, lasers_on) +
                            noise.b_field_sigma * d.b_field;
        double larmor = larmor_splitting(bare, 0.0, 0.0, noise.common_mode_drift);
        if (lasers_on) {
            SublevelShifts pnc = ideal_pnc;
            SublevelShifts quad = ideal_quad;
            if (noise.position_sigma > 0.0) {
                const Eigen::Vector3d position =
                    noise.position_sigma * (d.along_pnc_axis * plan.setup.pnc_field.standing_axis +
                                            d.along_quad_axis * plan.setup.quad_field.standing_axis);
                pnc = pnc_shifts(plan.species, plan.setup, position);
                if (plan.quad_detuning) quad = quad_shifts(plan.species, plan.setup, *plan.quad_detuning, position);
            }
            larmor = larmor_splitting(bare, pnc.plus + quad.plus, pnc.minus + quad.minus, noise.common_mode_drift);
        }
        const double side = (index % 2 == 0) ? 1.0 : -1.0;
        RamseySequence probe = plan.sequence;
        probe.phase_reference = reference(lasers_on) + side * kPi / (2.0 * plan.sequence.free_time);
        probe.contrast *= quench_damping;
        return ramsey_probability(larmor, probe, noise.decoherence_tau);
    }
};

struct SideTally {
    double trials = 0.0;
    double successes = 0.0;  // bit count, or summed probability without projection noise
};

struct ArmInversion {
    bool valid = false;
    double phase = 0.0;  // x = (w - w_ref) T
    double variance = 0.0;
};

ArmInversion invert(const SideTally& plus, const SideTally& minus, double contrast, bool projection_noise) {
    ArmInversion out;
    if (plus.trials == 0.0 || minus.trials == 0.0) return out;
    const double p_plus = plus.successes / plus.trials;
    const double p_minus = minus.successes / minus.trials;
    const double d = p_plus - p_minus;
    if (!(std::abs(d) < contrast)) return out;
    out.valid = true;
    out.phase = std::asin(d / contrast);
    if (projection_noise) {
        const double var_d = p_plus * (1.0 - p_plus) / plus.trials + p_minus * (1.0 - p_minus) / minus.trials;
        out.variance = var_d / (contrast * contrast - d * d);
    }
    return out;
}

BlockEstimate run_block(const TrialContext& ctx, std::size_t block, double contrast) {
    const auto& plan = ctx.plan;
    const std::uint64_t n = plan.trials_per_block;
    SideTally tallies[2][2];  // [lasers_on][side]
    for (std::uint64_t within = 0; within < n; ++within) {
        const std::uint64_t index = block * n + within;
        for (const bool on : {true, false}) {
            const TrialDraws d = draw(plan.seed, index, on);
            const double p = ctx.probability(index, on, d);
            SideTally& t = tallies[on ? 1 : 0][index % 2];
            t.trials += 1.0;
            if (ctx.noise.projection_noise)
                t.successes += (d.readout < p) ? 1.0 : 0.0;
            else
                t.successes += p;
        }
    }

    const double T = plan.sequence.free_time;
    const auto on = invert(tallies[1][0], tallies[1][1], contrast, ctx.noise.projection_noise);
    const auto off = invert(tallies[0][0], tallies[0][1], contrast, ctx.noise.projection_noise);

    BlockEstimate est;
    est.block = block;
    est.valid = on.valid && off.valid;
    if (!est.valid) return est;
    est.freq_on = ctx.reference(true) + on.phase / T;
    est.freq_off = ctx.reference(false) + off.phase / T;
    est.larmor_shift = plan.on_reference_offset + (on.phase - off.phase) / T;
    est.variance_on = on.variance / (T * T);
    est.variance_off = off.variance / (T * T);
    return est;
}

}  // namespace

void RamseySequence::validate() const {
    if (!(free_time > 0.0) || !std::isfinite(free_time))
        throw ValidationError("free_time", "must be finite and strictly positive");
    if (!std::isfinite(phase_reference)) throw ValidationError("phase_reference", "must be finite");
    if (!(contrast > 0.0) || contrast > 1.0) throw ValidationError("contrast", "must lie in (0, 1]");
}

double ramsey_probability(double true_freq, const RamseySequence& sequence, double decoherence_tau) {
    const double decay = std::isinf(decoherence_tau) ? 1.0 : std::exp(-sequence.free_time / decoherence_tau);
    const double p =
        0.5 * (1.0 + sequence.contrast * decay * std::cos((true_freq - sequence.phase_reference) * sequence.free_time));
    return std::clamp(p, 0.0, 1.0);
}

void NoiseModel::validate() const {
    auto non_negative = [](const char* field, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and >= 0");
    };
    non_negative("b_field_sigma", b_field_sigma);
    non_negative("position_sigma", position_sigma);
    if (!(decoherence_tau > 0.0)) throw ValidationError("decoherence_tau", "must be strictly positive");
    for (const auto& q : quench_rates) {
        q.level.validate();
        non_negative("quench_rates", q.rate);
    }
    if (!std::isfinite(common_mode_drift)) throw ValidationError("common_mode_drift", "must be finite");
    if (!std::isfinite(larmor_drift)) throw ValidationError("larmor_drift", "must be finite");
}

double NoiseModel::ground_quench_rate() const {
    double sum = 0.0;
    for (const auto& q : quench_rates)
        if (q.level.manifold == Manifold::S1_2) sum += q.rate;
    return 0.5 * sum;
}

void ExperimentPlan::validate() const {
    species.validate();
    setup.pnc_field.validate();
    setup.quad_field.validate();
    sequence.validate();
    constants.validate();
    if (!(zeeman_splitting > 0.0) || !std::isfinite(zeeman_splitting))
        throw ValidationError("zeeman_splitting", "must be finite and strictly positive");
    if (!std::isfinite(on_reference_offset)) throw ValidationError("on_reference_offset", "must be finite");
    if (quad_detuning && (*quad_detuning == 0.0 || !std::isfinite(*quad_detuning)))
        throw ValidationError("quad_detuning", "must be finite and nonzero");
    if (trials_per_block < 1) throw ValidationError("trials_per_block", "must be >= 1");
    if (blocks < 1) throw ValidationError("blocks", "must be >= 1");
    if (workers < 1) throw ValidationError("workers", "must be >= 1");
}

double effective_contrast(const ExperimentPlan& plan, const NoiseModel& noise) {
    const double T = plan.sequence.free_time;
    const double decay = std::isinf(noise.decoherence_tau) ? 1.0 : std::exp(-T / noise.decoherence_tau);
    const double quench = std::exp(-noise.ground_quench_rate() * T);
    const double b = noise.b_field_sigma * T;
    return plan.sequence.contrast * decay * quench * std::exp(-0.5 * b * b);
}

double trial_probability(const ExperimentPlan& plan, const NoiseModel& noise, std::uint64_t trial_index,
                         bool lasers_on) {
    const TrialContext ctx(plan, noise);
    return ctx.probability(trial_index, lasers_on, draw(plan.seed, trial_index, lasers_on));
}

bool simulate_trial(const ExperimentPlan& plan, const NoiseModel& noise, std::uint64_t trial_index, bool lasers_on) {
    const TrialContext ctx(plan, noise);
    const TrialDraws d = draw(plan.seed, trial_index, lasers_on);
    return d.readout < ctx.probability(trial_index, lasers_on, d);
}

EstimatorResult run_experiment(const ExperimentPlan& plan, const NoiseModel& noise) {
    plan.validate();
    noise.validate();
    const TrialContext ctx(plan, noise);
    const double contrast = effective_contrast(plan, noise);

    std::vector<BlockEstimate> blocks(plan.blocks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < plan.blocks; b = next++) blocks[b] = run_block(ctx, b, contrast);
    };
    const unsigned workers = std::min<std::size_t>(plan.workers, plan.blocks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    EstimatorResult r;
    r.seed = plan.seed;
    r.expected_pnc_shift = ctx.ideal_pnc.plus;
    double sum_on = 0.0, sum_off = 0.0, sum_shift = 0.0;
    double var_on = 0.0, var_off = 0.0;
    for (const auto& b : blocks) {
        if (!b.valid) {
            ++r.blocks_discarded;
            continue;
        }
        ++r.blocks_used;
        sum_on += b.freq_on;
        sum_off += b.freq_off;
        sum_shift += b.larmor_shift;
        var_on += b.variance_on;
        var_off += b.variance_off;
    }
    r.blocks = std::move(blocks);
    if (r.blocks_used == 0)
        throw EstimatorError(fmt::format("estimator out of range: all {} blocks fell outside the invertible fringe",
                                         plan.blocks));

    const double n = static_cast<double>(r.blocks_used);
    r.trials_used = r.blocks_used * plan.trials_per_block * 2;
    r.freq_on = {sum_on / n, std::sqrt(var_on) / n};
    r.freq_off = {sum_off / n, std::sqrt(var_off) / n};
    r.larmor_shift = {sum_shift / n, std::sqrt(var_on + var_off) / n};
    // Antisymmetric shifts: the Larmor change is twice the per-sublevel shift.
    r.pnc_shift_estimate = {0.5 * r.larmor_shift.value, 0.5 * r.larmor_shift.std_error};

    if (r.blocks_used >= 2) {
        const double mean = 0.5 * r.larmor_shift.value;
        double ss = 0.0;
        for (const auto& b : r.blocks)
            if (b.valid) ss += (0.5 * b.larmor_shift - mean) * (0.5 * b.larmor_shift - mean);
        r.scatter_stderr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }

    const double e1 = e1_pnc_si(plan.species, plan.constants);
    const double rate = 1.0 / noise.decoherence_tau + noise.ground_quench_rate();
    if (e1 > 0.0 && r.pnc_shift_estimate.std_error > 0.0 && rate > 0.0) {
        const double shift_per_amplitude = std::abs(r.expected_pnc_shift) / e1;
        const double total_time = static_cast<double>(r.trials_used) * plan.sequence.free_time;
        r.effective_f = plan.constants.hbar * shift_per_amplitude /
                        (plan.setup.pnc_field.amplitude * r.pnc_shift_estimate.std_error *
                         std::sqrt(total_time / rate));
    }
    return r;
}

ScalingStudy verify_scaling(const ExperimentPlan& base, const NoiseModel& noise, std::span<const double> obs_times,
                            std::span<const double> taus, double free_time_fraction) {
    if (obs_times.size() < 3 || taus.size() < 3)
        throw ConfigurationError("scaling study needs at least three values per axis");
    if (!(free_time_fraction > 0.0)) throw ConfigurationError("free_time_fraction must be strictly positive");
    if (base.blocks < 2) throw ConfigurationError("scaling study needs at least two blocks per grid point");

    const SublevelShifts pnc = pnc_shifts(base.species, base.setup);
    SublevelShifts quad;
    if (base.quad_detuning) quad = quad_shifts(base.species, base.setup, *base.quad_detuning);
    const double expected_change = (pnc.plus + quad.plus) - (pnc.minus + quad.minus);

    ScalingStudy study;
    std::uint64_t point = 0;
    for (const double tau : taus) {
        for (const double t : obs_times) {
            if (!(t > 0.0) || !(tau > 0.0)) throw ConfigurationError("grid values must be strictly positive");
            ExperimentPlan plan = base;
            NoiseModel point_noise = noise;
            plan.sequence.free_time = free_time_fraction * tau;
            plan.sequence.phase_reference = base.zeeman_splitting;
            plan.on_reference_offset = expected_change;
            plan.seed = base.seed + 0x9E3779B97F4A7C15ull * ++point;
            point_noise.decoherence_tau = tau;
            const auto trials = static_cast<std::size_t>(std::llround(t / plan.sequence.free_time));
            plan.trials_per_block = trials / plan.blocks;
            if (plan.trials_per_block < 2)
                throw ConfigurationError(fmt::format(
                    "grid point t = {} s, tau = {} s gives fewer than two trials per block", t, tau));

            const auto result = run_experiment(plan, point_noise);
            ScalingRow row;
            row.obs_time = t;
            row.coherence_tau = tau;
            row.free_time = plan.sequence.free_time;
            row.trials = plan.trials_per_block * plan.blocks;
            row.stderr_empirical = result.scatter_stderr;
            row.stderr_reported = result.pnc_shift_estimate.std_error;
            row.predicted_shape = 1.0 / std::sqrt(t * tau);
            study.rows.push_back(row);
        }
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& row : study.rows) {
        const double x = std::log(row.obs_time * row.coherence_tau);
        const double y = std::log(row.stderr_empirical);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(study.rows.size());
    study.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return study;
}

double position_offset_bias(const ExperimentPlan& plan, double offset) {
    StandingWaveField field = plan.setup.pnc_field;
    field.offset = offset;
    return 1.0 - field.envelope_at(Eigen::Vector3d::Zero());
}

JitterBias position_jitter_bias(const ExperimentPlan& plan, double sigma, std::size_t samples) {
    if (samples == 0) throw ConfigurationError("position jitter needs at least one sample");
    if (!(sigma >= 0.0)) throw ValidationError("position_sigma", "must be >= 0");
    StandingWaveField field = plan.setup.pnc_field;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        CounterRng rng(plan.seed, i, kStreamJitter);
        field.offset = sigma * rng.normal();
        const double v = 1.0 - field.envelope_at(Eigen::Vector3d::Zero());
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    JitterBias out;
    out.mean = mean;
    out.samples = samples;
    out.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
    return out;
}

}  // namespace apv

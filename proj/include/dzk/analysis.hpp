#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dzk/sim.hpp"

namespace dzk {

struct TvReport {
    double tv = 0.0;
    double noise_bound = 0.0;  // 0.5 * sqrt(support / min(trials)) for empirical-vs-empirical
    uint64_t support = 0;      // number of cells compared (q, or the bucket count)
    uint64_t trials_a = 0, trials_b = 0;
    bool pass = false;
    double threshold = 0.0;

    std::string to_json() const;
};

// Empirical total variation between two samples over F_q. When `buckets` is
// nonzero the domain is coarsened to that many equal ranges first; coarsened
// TV lower-bounds the field-level TV and keeps the sampling noise
// 0.5*sqrt(buckets/trials) below thresholds q itself would drown.
TvReport estimate_tv(std::span<const uint64_t> samples_a, std::span<const uint64_t> samples_b,
                     uint64_t q, double threshold, uint64_t buckets = 0);

// TV of an empirical sample against the exact uniform distribution on F_q.
TvReport estimate_tv_vs_uniform(std::span<const uint64_t> samples, uint64_t q, double threshold,
                                uint64_t buckets = 0);

struct WilsonInterval {
    double rate = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// 95% Wilson score interval.
WilsonInterval wilson(uint64_t successes, uint64_t trials);

struct SoundnessReport {
    uint64_t trials = 0;
    uint64_t accepted = 0;
    WilsonInterval interval;
    double bound = 0.0;   // theory bound the upper end is compared against
    double slack = 0.0;
    bool pass = false;

    std::string to_json() const;
};

// Runs `trial` for seeds derived from the master seed and checks the Wilson
// upper bound against bound + slack.
template <class Trial>
SoundnessReport soundness_rate(uint64_t trials, uint64_t master_seed, double bound, double slack,
                               Trial&& trial) {
    SoundnessReport rep;
    rep.trials = trials;
    rep.bound = bound;
    rep.slack = slack;
    for (uint64_t i = 0; i < trials; ++i)
        if (trial(derive_seed(master_seed, i))) ++rep.accepted;
    rep.interval = wilson(rep.accepted, trials);
    rep.pass = rep.interval.high <= bound + slack;
    return rep;
}

struct ComplexityReport {
    int interaction_rounds = 0;
    int neighbor_rounds = 0;
    uint64_t max_bits_per_node_round = 0;
    uint64_t max_total_bits_per_node = 0;
    int declared_round_bound = 0;
    uint64_t declared_bit_bound = 0;
    bool pass = false;

    std::string to_json() const;
    std::string to_csv() const;
};

ComplexityReport complexity_audit(const Transcript& tr, int round_bound, uint64_t bit_bound);

struct SumcheckInstance;

struct ViewTvExperiment {
    uint64_t runs = 0;
    int slots = 0;       // flattened view positions compared, over all nodes
    double max_tv = 0.0;
    double mean_tv = 0.0;
    int worst_node = -1;
    int worst_slot = -1;
    double threshold = 0.0;
    bool shapes_match = false;
    bool pass = false;

    std::string to_json() const;
};

// Per-message-slot TV between real zk runs and the simulator, `runs` samples
// of each, on a yes-instance.
ViewTvExperiment view_tv_experiment(const SumcheckInstance& inst, uint64_t runs, uint64_t seed,
                                    double threshold);

}  // namespace dzk

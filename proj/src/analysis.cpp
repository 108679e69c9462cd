#include "dzk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dzk/zk.hpp"
#include "json.hpp"

namespace dzk {

using nlohmann::json;

std::string TvReport::to_json() const {
    json j{{"tv", tv},          {"noise_bound", noise_bound}, {"support", support},
           {"trials_a", trials_a}, {"trials_b", trials_b},    {"threshold", threshold},
           {"pass", pass}};
    return j.dump();
}

namespace {

std::vector<double> histogram(std::span<const uint64_t> samples, uint64_t q, uint64_t cells) {
    std::vector<double> h(cells, 0.0);
    const double w = 1.0 / static_cast<double>(samples.size());
    for (uint64_t s : samples) {
        uint64_t cell = cells == q ? s : (static_cast<unsigned __int128>(s) * cells) / q;
        h.at(cell) += w;
    }
    return h;
}

}  // namespace

TvReport estimate_tv(std::span<const uint64_t> samples_a, std::span<const uint64_t> samples_b,
                     uint64_t q, double threshold, uint64_t buckets) {
    if (samples_a.empty() || samples_b.empty())
        throw std::invalid_argument("estimate_tv needs nonempty samples");
    const uint64_t cells = buckets == 0 ? q : std::min(buckets, q);
    auto ha = histogram(samples_a, q, cells);
    auto hb = histogram(samples_b, q, cells);
    double tv = 0.0;
    for (uint64_t i = 0; i < cells; ++i) tv += std::abs(ha[i] - hb[i]);
    TvReport rep;
    rep.tv = 0.5 * tv;
    rep.support = cells;
    rep.trials_a = samples_a.size();
    rep.trials_b = samples_b.size();
    const double trials = static_cast<double>(std::min(samples_a.size(), samples_b.size()));
    rep.noise_bound = 0.5 * std::sqrt(static_cast<double>(cells) / trials);
    rep.threshold = threshold;
    rep.pass = rep.tv <= threshold;
    return rep;
}

TvReport estimate_tv_vs_uniform(std::span<const uint64_t> samples, uint64_t q, double threshold,
                                uint64_t buckets) {
    if (samples.empty()) throw std::invalid_argument("estimate_tv needs nonempty samples");
    const uint64_t cells = buckets == 0 ? q : std::min(buckets, q);
    auto h = histogram(samples, q, cells);
    double tv = 0.0;
    for (uint64_t i = 0; i < cells; ++i) {
        // Buckets may cover slightly different numbers of residues.
        uint64_t lo = (i * q) / cells, hi = ((i + 1) * q) / cells;
        double p = static_cast<double>(hi - lo) / static_cast<double>(q);
        tv += std::abs(h[i] - p);
    }
    TvReport rep;
    rep.tv = 0.5 * tv;
    rep.support = cells;
    rep.trials_a = samples.size();
    rep.trials_b = 0;
    rep.noise_bound = 0.5 * std::sqrt(static_cast<double>(cells) / static_cast<double>(samples.size()));
    rep.threshold = threshold;
    rep.pass = rep.tv <= threshold;
    return rep;
}

WilsonInterval wilson(uint64_t successes, uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("wilson needs trials > 0");
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    WilsonInterval w;
    w.rate = p;
    w.low = std::max(0.0, center - half);
    w.high = std::min(1.0, center + half);
    return w;
}

std::string SoundnessReport::to_json() const {
    json j{{"trials", trials},
           {"accepted", accepted},
           {"rate", interval.rate},
           {"wilson_low", interval.low},
           {"wilson_high", interval.high},
           {"bound", bound},
           {"slack", slack},
           {"pass", pass}};
    return j.dump();
}

std::string ComplexityReport::to_json() const {
    json j{{"interaction_rounds", interaction_rounds},
           {"neighbor_rounds", neighbor_rounds},
           {"max_bits_per_node_round", max_bits_per_node_round},
           {"max_total_bits_per_node", max_total_bits_per_node},
           {"declared_round_bound", declared_round_bound},
           {"declared_bit_bound", declared_bit_bound},
           {"pass", pass}};
    return j.dump();
}

std::string ComplexityReport::to_csv() const {
    return "interaction_rounds,neighbor_rounds,max_bits_per_node_round,max_total_bits_per_node,"
           "declared_round_bound,declared_bit_bound,pass\n" +
           std::to_string(interaction_rounds) + "," + std::to_string(neighbor_rounds) + "," +
           std::to_string(max_bits_per_node_round) + "," + std::to_string(max_total_bits_per_node) +
           "," + std::to_string(declared_round_bound) + "," + std::to_string(declared_bit_bound) +
           "," + (pass ? "1" : "0") + "\n";
}

ComplexityReport complexity_audit(const Transcript& tr, int round_bound, uint64_t bit_bound) {
    ComplexityReport rep;
    rep.interaction_rounds = tr.interaction_rounds();
    rep.neighbor_rounds = tr.neighbor_rounds();
    rep.max_bits_per_node_round = tr.max_bits_per_node_round();
    uint64_t mx = 0;
    // Max over nodes of total bits.
    std::vector<uint64_t> totals;
    for (const auto& r : tr.rounds)
        for (const auto& m : r.per_node) {
            if (m.id >= static_cast<int>(totals.size())) totals.resize(m.id + 1, 0);
            totals[m.id] += m.bits;
        }
    for (uint64_t v : totals) mx = std::max(mx, v);
    rep.max_total_bits_per_node = mx;
    rep.declared_round_bound = round_bound;
    rep.declared_bit_bound = bit_bound;
    rep.pass = (round_bound == 0 || rep.interaction_rounds <= round_bound) &&
               (bit_bound == 0 || rep.max_bits_per_node_round <= bit_bound);
    return rep;
}

std::string ViewTvExperiment::to_json() const {
    json j{{"runs", runs},           {"slots", slots},       {"max_tv", max_tv},
           {"mean_tv", mean_tv},     {"worst_node", worst_node}, {"worst_slot", worst_slot},
           {"threshold", threshold}, {"shapes_match", shapes_match}, {"pass", pass}};
    return j.dump();
}

ViewTvExperiment view_tv_experiment(const SumcheckInstance& inst, uint64_t runs, uint64_t seed,
                                    double threshold) {
    const uint64_t q = inst.q.q;
    ViewTvExperiment rep;
    rep.runs = runs;
    rep.threshold = threshold;
    rep.shapes_match = true;

    std::vector<std::vector<uint32_t>> real_hist, sim_hist;  // [node][slot*q + value]
    std::vector<std::size_t> slot_count;

    auto accumulate = [&](const std::vector<NodeView>& views, bool real, bool first) {
        if (first && real) {
            real_hist.resize(views.size());
            sim_hist.resize(views.size());
            slot_count.resize(views.size());
            for (std::size_t v = 0; v < views.size(); ++v) {
                slot_count[v] = views[v].flat().size();
                real_hist[v].assign(slot_count[v] * q, 0);
                sim_hist[v].assign(slot_count[v] * q, 0);
            }
        }
        for (std::size_t v = 0; v < views.size(); ++v) {
            auto flat = views[v].flat();
            if (flat.size() != slot_count[v]) {
                rep.shapes_match = false;
                return;
            }
            auto& h = real ? real_hist[v] : sim_hist[v];
            for (std::size_t s = 0; s < flat.size(); ++s) ++h[s * q + flat[s]];
        }
    };

    for (uint64_t r = 0; r < runs; ++r) {
        HonestStrategy h;
        ZkResult zr = zk_sumcheck(inst, h, derive_seed(seed, r));
        accumulate(zr.views, true, r == 0);
        if (!rep.shapes_match) return rep;
    }
    for (uint64_t r = 0; r < runs; ++r) {
        ZkResult zr = simulate_views(inst, derive_seed(seed, runs + r));
        accumulate(zr.views, false, false);
        if (!rep.shapes_match) return rep;
    }

    double sum_tv = 0.0;
    int slots = 0;
    for (std::size_t v = 0; v < real_hist.size(); ++v) {
        for (std::size_t s = 0; s < slot_count[v]; ++s) {
            double tv = 0.0;
            for (uint64_t x = 0; x < q; ++x) {
                double pa = static_cast<double>(real_hist[v][s * q + x]) / runs;
                double pb = static_cast<double>(sim_hist[v][s * q + x]) / runs;
                tv += std::abs(pa - pb);
            }
            tv *= 0.5;
            ++slots;
            sum_tv += tv;
            if (tv > rep.max_tv) {
                rep.max_tv = tv;
                rep.worst_node = static_cast<int>(v);
                rep.worst_slot = static_cast<int>(s);
            }
        }
    }
    rep.slots = slots;
    rep.mean_tv = slots ? sum_tv / slots : 0.0;
    rep.pass = rep.shapes_match && rep.max_tv <= threshold;
    return rep;
}

}  // namespace dzk

// Copyright 2026 The Telesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "telesim/monte_carlo.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "telesim/rng.hpp"

namespace telesim {

std::uint64_t CountTable::count(const std::string& pattern) const {
    auto it = counts.find(pattern);
    return it == counts.end() ? 0 : it->second;
}

std::uint64_t CountTable::count_with(std::span<const std::string> ids,
                                     std::span<const std::string> absent) const {
    std::uint64_t total = 0;
    for (const auto& [name, n] : counts) {
        std::vector<std::string> clicked;
        std::stringstream ss(name);
        for (std::string tok; std::getline(ss, tok, '+');) clicked.push_back(tok);
        auto has = [&](const std::string& id) {
            return std::find(clicked.begin(), clicked.end(), id) != clicked.end();
        };
        if (std::all_of(ids.begin(), ids.end(), has) && std::none_of(absent.begin(), absent.end(), has)) {
            total += n;
        }
    }
    return total;
}

std::string pattern_name(unsigned mask, std::span<const DetectorSpec> detectors) {
    std::string name;
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        if ((mask >> i) & 1u) {
            if (!name.empty()) name += '+';
            name += detectors[i].id;
        }
    }
    return name.empty() ? "none" : name;
}

namespace {

struct SectorOutcomes {
    std::vector<std::vector<int>> counts;
    std::vector<double> cdf;
};

std::size_t sample_index(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

CountTable run_monte_carlo(const Circuit& circuit, std::uint64_t trials, std::uint64_t seed,
                           bool conditional_sampling, unsigned threads) {
    const auto& dets = circuit.detectors;
    if (dets.size() > 16) throw ValidationError("too many detectors for pattern counting");
    for (const auto& d : dets) d.validate();

    CountTable table;
    table.trials = trials;
    table.seed = seed;
    for (const auto& d : dets) table.detector_ids.push_back(d.id);

    // Per-sector photon-count distributions through the circuit without its loss elements;
    // efficiency is applied per detector while sampling.
    const auto sectors = spdc_pulse_sectors(circuit.source);
    double all_weight = 0.0;
    double kept_weight = 0.0;
    std::vector<double> sector_cdf;
    std::vector<SectorOutcomes> outcomes;
    for (const auto& b : sectors) {
        all_weight += b.state.weight();
        if (conditional_sampling && pair_count(b.sector) < 2) continue;
        kept_weight += b.state.weight();
        sector_cdf.push_back(kept_weight);

        const StateVector s = propagate(b.state, circuit,
                                        {Stage::kPreparation, Stage::kBellAnalyzer,
                                         Stage::kBobAnalysis, Stage::kReferenceAnalysis});
        SectorOutcomes o;
        double acc = 0.0;
        for (const auto& [counts, p] : photon_count_distribution(s, dets)) {
            acc += p;
            o.counts.push_back(counts);
            o.cdf.push_back(acc);
        }
        outcomes.push_back(std::move(o));
    }
    table.restriction_factor = all_weight > 0.0 ? kept_weight / all_weight : 0.0;
    if (trials == 0 || outcomes.empty()) return table;

    const unsigned n_patterns = 1u << dets.size();
    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& hist) {
        hist.assign(n_patterns, 0);
        for (std::uint64_t t = begin; t < end; ++t) {
            SplitMix64 rng(seed, t);
            const auto& o = outcomes[sample_index(sector_cdf, rng.uniform())];
            const auto& counts = o.counts[sample_index(o.cdf, rng.uniform())];
            unsigned mask = 0;
            for (std::size_t i = 0; i < dets.size(); ++i) {
                if (rng.uniform() < dets[i].click_probability(counts[i])) mask |= 1u << i;
            }
            ++hist[mask];
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::vector<std::uint64_t>> hists(threads);
    if (threads == 1) {
        run_range(0, trials, hists[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) {
            const std::uint64_t begin = trials * k / threads;
            const std::uint64_t end = trials * (k + 1) / threads;
            pool.emplace_back(run_range, begin, end, std::ref(hists[k]));
        }
        for (auto& th : pool) th.join();
    }

    for (unsigned mask = 0; mask < n_patterns; ++mask) {
        std::uint64_t n = 0;
        for (const auto& h : hists) n += h[mask];
        if (n > 0) table.counts[pattern_name(mask, dets)] = n;
    }
    return table;
}

std::map<std::string, double> exact_pattern_probabilities(const Circuit& circuit,
                                                          bool conditional) {
    const auto dets = circuit.detectors_after_loss();
    const auto sectors = spdc_pulse_sectors(circuit.source);
    double kept = 0.0;
    for (const auto& b : sectors) {
        if (!conditional || pair_count(b.sector) >= 2) kept += b.state.weight();
    }

    const unsigned n_patterns = 1u << dets.size();
    std::map<std::string, double> probs;
    for (unsigned mask = 0; mask < n_patterns; ++mask) probs[pattern_name(mask, dets)] = 0.0;
    if (kept == 0.0) return probs;

    for (const auto& b : sectors) {
        if (conditional && pair_count(b.sector) < 2) continue;
        const StateVector s = propagate(b.state, circuit);
        const double w = b.state.weight() / kept;
        for (unsigned mask = 0; mask < n_patterns; ++mask) {
            ClickPattern pattern;
            for (std::size_t i = 0; i < dets.size(); ++i) {
                pattern[dets[i].id] = (mask >> i) & 1u ? Click::kClick : Click::kNoClick;
            }
            probs[pattern_name(mask, dets)] += w * condition_on_pattern(s, pattern, dets).probability;
        }
    }
    return probs;
}

}  // namespace telesim

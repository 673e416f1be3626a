#ifndef HISTO_SWEEP_HPP_
#define HISTO_SWEEP_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "histo/histogram.hpp"
#include "histo/stream.hpp"

namespace histo {

struct AlgoParams {
    int64_t k = 10;
    double eps = 0.25;
    int64_t space = 0;       // sample/space budget; 0 = algorithm defaults
    uint64_t seed = 0;
    bool theoretical = false;  // onepass/twopass use their analysis parameters
    bool exact_hhh = false;    // twopass: oracle first pass
    item_t support_bound = 0;  // onepass theoretical: switch to L0 sampling
    int scale_k = 0;           // baselines: k = space / scale_k
    int sampler_chains = 2;
};

struct AlgoOutput {
    Histogram hist;
    int64_t space_used = 0;
};

// algo: onepass | twopass | fixed-support | fixed-domain | oracle
AlgoOutput run_algo(const std::string& algo, StreamSource& source, const AlgoParams& p);

struct SweepConfig {
    std::vector<std::string> algos;
    std::vector<int64_t> spaces;
    int64_t k = 10;
    double eps = 0.25;
    int trials = 10;
    uint64_t seed = 0;
    bool theoretical = false;
    int scale_k = 0;
    int threads = 0;  // 0 = hardware concurrency
    int sampler_chains = 2;
};

struct RunRecord {
    std::string algo;
    int64_t space = 0;
    int trial = 0;
    uint64_t seed = 0;
    int64_t space_used = 0;
    int64_t pieces = 0;
    double err_support = 0.0;
    double err_domain = 0.0;
    double wall_ms = 0.0;  // informational; kept out of the CSVs so identical
                           // invocations stay byte-identical
};

std::vector<RunRecord> run_sweep(const std::string& stream_path, const SweepConfig& cfg);

void write_sweep_csv(const std::vector<RunRecord>& detail, const std::string& detail_path,
                     const std::string& summary_path);

}  // namespace histo

#endif  // HISTO_SWEEP_HPP_

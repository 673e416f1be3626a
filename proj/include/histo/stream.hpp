#ifndef HISTO_STREAM_HPP_
#define HISTO_STREAM_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "histo/errors.hpp"

namespace histo {

using item_t = int64_t;
using count_t = int64_t;

struct StreamUpdate {
    item_t item = 0;
    count_t delta = 0;
    bool operator==(const StreamUpdate&) const = default;
};

// ground-truth counts m_i and total m; zero counts are never stored
class ExactDistribution {
public:
    explicit ExactDistribution(item_t n);

    void apply_update(const StreamUpdate& u);
    double mass(item_t i) const;     // m_i / m, throws EmptyStream when m == 0
    count_t count(item_t i) const;   // exact integer path for oracle tests
    count_t total() const { return total_; }
    item_t domain_size() const { return n_; }
    size_t support_size() const { return counts_.size(); }
    const std::map<item_t, count_t>& counts() const { return counts_; }

private:
    item_t n_;
    count_t total_ = 0;
    std::map<item_t, count_t> counts_;
};

// replayable update sequence; two passes see identical updates
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual item_t domain_size() const = 0;
    virtual uint64_t total_updates() const = 0;
    virtual void reset() = 0;
    virtual bool next(StreamUpdate& u) = 0;
    virtual bool replayable() const { return true; }
};

class VectorSource : public StreamSource {
public:
    VectorSource(item_t n, std::vector<StreamUpdate> updates)
        : n_(n), updates_(std::move(updates)) {}

    item_t domain_size() const override { return n_; }
    uint64_t total_updates() const override { return updates_.size(); }
    void reset() override { pos_ = 0; }
    bool next(StreamUpdate& u) override {
        if (pos_ >= updates_.size()) return false;
        u = updates_[pos_++];
        return true;
    }
    const std::vector<StreamUpdate>& updates() const { return updates_; }

private:
    item_t n_;
    std::vector<StreamUpdate> updates_;
    size_t pos_ = 0;
};

// text stream file: header "n=<int>", then one update per line,
// "<item>" (delta +1) or "<item>,<delta>"; '#' lines ignored
class FileSource : public StreamSource {
public:
    explicit FileSource(const std::string& path);

    item_t domain_size() const override { return n_; }
    uint64_t total_updates() const override { return total_updates_; }
    void reset() override { pos_ = 0; }
    bool next(StreamUpdate& u) override {
        if (pos_ >= updates_.size()) return false;
        u = updates_[pos_++];
        return true;
    }

private:
    item_t n_ = 0;
    uint64_t total_updates_ = 0;
    std::vector<StreamUpdate> updates_;
    size_t pos_ = 0;
};

void write_stream_file(const std::string& path, StreamSource& src);

// folds a full replay through apply_update
ExactDistribution exact_from_source(StreamSource& src);

enum class SynthKind { EvenUniform, Zipf, UniformSparse, MiceElephants };

struct SynthParams {
    item_t n = 0;
    count_t count_per_item = 1;   // even-uniform
    double exponent = 1.1;        // zipf
    uint64_t length = 0;          // zipf / uniform-sparse update count
    item_t support_size = 0;      // uniform-sparse
    int64_t mice = 0;             // mice-elephants
    count_t mice_count = 1;
    int64_t elephants = 0;
    count_t elephant_count = 1;
    double churn = 0.0;           // deletion probability per step, 0 = insertion-only
};

std::unique_ptr<VectorSource> generate_synthetic(SynthKind kind, const SynthParams& params,
                                                 uint64_t seed);

SynthKind synth_kind_from_name(const std::string& name);

}  // namespace histo

#endif  // HISTO_STREAM_HPP_

#ifndef HISTO_INGEST_HPP_
#define HISTO_INGEST_HPP_

#include <cstdint>
#include <string>

#include "histo/stream.hpp"

namespace histo {

enum class IngestMode { TextPrefix, Ipv4Prefix, DecimalBucket, TimestampTuple };

struct IngestConfig {
    IngestMode mode = IngestMode::TextPrefix;
    int prefix_len = 3;           // text mode: letters kept per word
    double step = 0.01;           // decimal mode: bucket width
    double lo = -90.0;            // decimal mode: value range
    double hi = 90.0;
};

struct IngestStats {
    item_t domain = 0;
    uint64_t records = 0;   // mapped records
    uint64_t skipped = 0;   // too-short words and blank lines
};

// maps raw records to integer items and writes the aggregated stream file
IngestStats ingest_file(const std::string& raw_path, const IngestConfig& cfg,
                        const std::string& out_path);

IngestMode ingest_mode_from_name(const std::string& name);

// week-second encoding used by timestamp mode, exposed for tests:
// ((dow*24 + hour)*60 + minute)*60 + second + 1, Monday = 0
item_t weeksecond_item(int64_t year, int month, int day, int hour, int minute, int second);

}  // namespace histo

#endif  // HISTO_INGEST_HPP_

// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SAGRNN_LATENCY_H_
#define SAGRNN_LATENCY_H_

#include <cstdint>
#include <vector>

#include "sagrnn/model.h"
#include "sagrnn/stream.h"

namespace sagrnn {

// Algorithmic plus compute latency of one streaming segment:
// total = segment + rtf * segment + future context.
struct LatencyReport {
  double segment_ms = 0.0;
  double rtf = 0.0;
  double future_context_ms = 0.0;
  double total_latency_ms = 0.0;
};

LatencyReport MakeLatencyReport(double segment_ms, double rtf,
                                double future_context_ms);
// Future context taken from DeclaredLookahead(config).
LatencyReport MakeLatencyReport(const ModelConfig& config, double rtf);
double FutureContextMs(const ModelConfig& config);

struct RtfOptions {
  double duration_s = 10.0;  // at least 10 s
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;
};

struct RtfMeasurement {
  LatencyReport report;           // rtf = median over repetitions
  std::vector<double> rtf_per_rep;
  double audio_seconds = 0.0;
};

// Times separation of seeded noise in `stream.mode`. Stateful runs push one
// segment at a time. A shorter warm-up pass precedes the timed repetitions.
RtfMeasurement MeasureRtf(const Separator& separator, const StreamConfig& stream,
                          const RtfOptions& options = {});

}  // namespace sagrnn

#endif  // SAGRNN_LATENCY_H_

#pragma once

#include <string>
#include <vector>

#include "lipstd/dataio.hpp"
#include "lipstd/frame.hpp"
#include "lipstd/scaler.hpp"

namespace lipstd::cli {

/// Parse arguments (excluding argv[0]) and run one subcommand.
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.
int run(const std::vector<std::string>& args);

struct ScaledFrame {
    dataio::DatasetFrame frame;  // values transformed in place
    dataio::ScalingMetadata metadata;
    std::vector<scaler::PlanEntry> plan;
    int exit_code = 0;  // per-column failures leave the rest of the plan intact
};

/// Plan and apply one scaling method to a trick-expanded frame.
/// original_dims is the column count before trick expansion (it sets
/// L* = 1/(D*alpha)).
ScaledFrame scale_frame(dataio::DatasetFrame tricked, std::size_t original_dims,
                        const std::string& method, const std::string& trick, double alpha);

/// Expand discrete columns per the trick setting ("none", "bern", "gamma").
/// With "gamma", categorical columns become K noised Gamma columns named
/// <name>#<k>, and count/binary columns become one noised Gamma column each;
/// with "bern", categorical columns become K Bernoulli columns. Noise streams
/// are split per column from the root seed.
dataio::DatasetFrame apply_tricks(const dataio::DatasetFrame& frame, const std::string& trick,
                                  std::uint64_t seed);

}  // namespace lipstd::cli

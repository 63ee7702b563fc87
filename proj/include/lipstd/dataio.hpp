#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lipstd/frame.hpp"
#include "lipstd/scaler.hpp"

namespace lipstd::dataio {

/// Kind inference from the present raw tokens:
///   binary if the value set is within {0,1}; count if all non-negative
///   integers with more than 2 distinct values; categorical for non-numeric
///   tokens; positive_real if numeric and all > 0; real otherwise.
struct InferredKind {
    ColumnKind kind;
    int k = 0;  // categorical class count
};
InferredKind infer_kind(const std::vector<std::string>& present_tokens);

struct CsvOptions {
    char delimiter = ',';
    /// column name -> kind name (real, positive_real, count, binary,
    /// categorical) or family name (normal, lognormal, gamma, exponential,
    /// ...). Hints always override inference.
    std::map<std::string, std::string> hints;
};

/// Delimited text with a header row; empty cells denote missing values.
DatasetFrame read_csv(const std::string& path, const CsvOptions& options = {});

/// Everything needed to undo train-time scaling at test time without the data.
struct ColumnScaleInfo {
    ColumnSpec spec;  // carries omega, scaling method, trick record
    double target_l = 0.0;
    bool has_achieved = false;
    std::vector<double> achieved_per_param;
    double achieved_total = 0.0;
    std::vector<std::string> warnings;
};

struct ScalingMetadata {
    std::string version = "1";
    scaler::ScalingTarget target;
    std::string method = "none";
    std::string trick = "none";
    std::vector<ColumnScaleInfo> per_column;

    const ColumnScaleInfo* find(const std::string& name) const;
};

void write_metadata(const ScalingMetadata& meta, const std::string& path);
ScalingMetadata read_metadata(const std::string& path);

/// Scaled data as delimited text (17 significant digits, bit round-trip) plus
/// the metadata sidecar.
void write_scaled(const DatasetFrame& frame, const ScalingMetadata& meta,
                  const std::string& out_data_path, const std::string& out_meta_path,
                  char delimiter = ',');

struct RecoveredColumn {
    expfam::Family family;
    expfam::CanonicalParams params;
    bool degenerate = false;
};

/// Map learned scaled-space natural parameters back to original-space
/// likelihoods: unscale, then undo tricks (mean matching / renormalization).
/// Uses only the metadata, never the data. Results are keyed by the original
/// column names, in sidecar order.
std::vector<std::pair<std::string, RecoveredColumn>> recover_parameters(
    const ScalingMetadata& meta, const std::map<std::string, expfam::NaturalParams>& scaled_params,
    double poisson_delta = 1e-6);

/// 17-significant-digit decimal text for doubles (exact double round-trip).
std::string format_double(double v);

}  // namespace lipstd::dataio

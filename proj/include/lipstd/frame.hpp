#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipstd/expfam.hpp"
#include "lipstd/tricks.hpp"

namespace lipstd::dataio {

enum class ColumnKind { Real, PositiveReal, Count, Binary, Categorical };

std::string kind_name(ColumnKind kind);
ColumnKind kind_from_name(const std::string& name);

/// Default likelihood per observable data kind: real -> Normal, positive ->
/// LogNormal, count -> Poisson, binary -> Bernoulli, categorical -> Categorical.
expfam::Family default_family(ColumnKind kind, int k = 0);

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Real;
    expfam::Family family;
    std::vector<std::string> categories;  // categorical token dictionary, sorted
    std::optional<tricks::TrickRecord> trick;
    std::string scaling_method = "none";  // none|std|max|iqr|lip
    double omega = 1.0;
};

struct Column {
    ColumnSpec spec;
    std::vector<double> values;
    std::vector<std::uint8_t> present;

    std::size_t present_count() const;
};

struct DatasetFrame {
    std::vector<Column> columns;
    std::size_t n_rows = 0;

    const Column* find(const std::string& name) const;
};

}  // namespace lipstd::dataio

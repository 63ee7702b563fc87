#include "lipstd/frame.hpp"

namespace lipstd::dataio {

std::string kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Real: return "real";
        case ColumnKind::PositiveReal: return "positive_real";
        case ColumnKind::Count: return "count";
        case ColumnKind::Binary: return "binary";
        case ColumnKind::Categorical: return "categorical";
    }
    return "unknown";
}

ColumnKind kind_from_name(const std::string& name) {
    if (name == "real") return ColumnKind::Real;
    if (name == "positive_real" || name == "positive") return ColumnKind::PositiveReal;
    if (name == "count") return ColumnKind::Count;
    if (name == "binary") return ColumnKind::Binary;
    if (name == "categorical") return ColumnKind::Categorical;
    throw Error(errc::parse, "unknown column kind '" + name + "'");
}

expfam::Family default_family(ColumnKind kind, int k) {
    switch (kind) {
        case ColumnKind::Real: return expfam::Family(expfam::FamilyKind::Normal);
        case ColumnKind::PositiveReal: return expfam::Family(expfam::FamilyKind::LogNormal);
        case ColumnKind::Count: return expfam::Family(expfam::FamilyKind::Poisson);
        case ColumnKind::Binary: return expfam::Family(expfam::FamilyKind::Bernoulli);
        case ColumnKind::Categorical: return expfam::Family::categorical(k);
    }
    return expfam::Family(expfam::FamilyKind::Normal);
}

std::size_t Column::present_count() const {
    if (present.empty()) {
        return values.size();
    }
    std::size_t n = 0;
    for (std::uint8_t p : present) {
        n += p ? 1 : 0;
    }
    return n;
}

const Column* DatasetFrame::find(const std::string& name) const {
    for (const Column& c : columns) {
        if (c.spec.name == name) {
            return &c;
        }
    }
    return nullptr;
}

}  // namespace lipstd::dataio

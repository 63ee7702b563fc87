#include "lipstd/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lipstd::dataio {

using expfam::Family;
using expfam::FamilyKind;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& token, double& out) {
    const std::string t = trim(token);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t row, const std::string& col,
                             const std::string& what) {
    throw Error(errc::parse, path + ": row " + std::to_string(row) + ", column '" + col + "': " + what);
}

// Numeric-aware ascending order so numeric category codes sort naturally.
void sort_categories(std::vector<std::string>& cats) {
    bool all_numeric = true;
    for (const std::string& c : cats) {
        double v;
        if (!parse_number(c, v)) {
            all_numeric = false;
            break;
        }
    }
    if (all_numeric) {
        std::sort(cats.begin(), cats.end(), [](const std::string& a, const std::string& b) {
            double va = 0.0;
            double vb = 0.0;
            parse_number(a, va);
            parse_number(b, vb);
            if (va != vb) return va < vb;
            return a < b;
        });
    } else {
        std::sort(cats.begin(), cats.end());
    }
}

}  // namespace

InferredKind infer_kind(const std::vector<std::string>& present_tokens) {
    if (present_tokens.empty()) {
        throw Error(errc::degenerate_column, "cannot infer a kind for an empty column");
    }
    bool numeric = true;
    std::vector<double> values;
    values.reserve(present_tokens.size());
    for (const std::string& t : present_tokens) {
        double v;
        if (!parse_number(t, v)) {
            numeric = false;
            break;
        }
        values.push_back(v);
    }
    if (!numeric) {
        std::set<std::string> distinct(present_tokens.begin(), present_tokens.end());
        return {ColumnKind::Categorical, static_cast<int>(distinct.size())};
    }
    bool within_01 = true;
    bool nonneg_int = true;
    bool all_positive = true;
    std::set<double> distinct;
    for (double v : values) {
        distinct.insert(v);
        if (v != 0.0 && v != 1.0) within_01 = false;
        if (v < 0.0 || v != std::floor(v)) nonneg_int = false;
        if (!(v > 0.0)) all_positive = false;
    }
    if (within_01) return {ColumnKind::Binary, 0};
    if (nonneg_int && distinct.size() > 2) return {ColumnKind::Count, 0};
    if (all_positive) return {ColumnKind::PositiveReal, 0};
    return {ColumnKind::Real, 0};
}

DatasetFrame read_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(errc::io, "cannot open '" + path + "' for reading");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw Error(errc::parse, path + ": empty file, expected a header row");
    }

    const std::vector<std::string> header = split_line(lines[0], options.delimiter);
    std::set<std::string> seen;
    for (const std::string& h : header) {
        if (h.empty()) {
            throw Error(errc::parse, path + ": empty column name in header");
        }
        if (!seen.insert(h).second) {
            throw Error(errc::parse, path + ": duplicate column name '" + h + "'");
        }
    }
    for (const auto& [name, hint] : options.hints) {
        if (!seen.count(name)) {
            throw Error(errc::parse, path + ": hint names unknown column '" + name + "'");
        }
        (void)hint;
    }

    const std::size_t ncol = header.size();
    std::vector<std::vector<std::string>> cells(ncol);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const std::vector<std::string> row = split_line(lines[r], options.delimiter);
        if (row.size() != ncol) {
            throw Error(errc::parse, path + ": row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                         " fields, expected " + std::to_string(ncol));
        }
        for (std::size_t c = 0; c < ncol; ++c) {
            cells[c].push_back(row[c]);
        }
    }
    const std::size_t n_rows = lines.size() - 1;

    DatasetFrame frame;
    frame.n_rows = n_rows;
    for (std::size_t c = 0; c < ncol; ++c) {
        Column col;
        col.spec.name = header[c];
        col.values.assign(n_rows, 0.0);
        col.present.assign(n_rows, 0);

        std::vector<std::string> present_tokens;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const std::string t = trim(cells[c][r]);
            if (!t.empty()) {
                present_tokens.push_back(t);
            }
        }
        if (present_tokens.empty()) {
            throw Error(errc::degenerate_column, path + ": column '" + header[c] + "' has no present values");
        }

        // Resolve the declared kind/family: hint (kind or family name) wins.
        bool family_hinted = false;
        const auto hint_it = options.hints.find(header[c]);
        if (hint_it != options.hints.end()) {
            const std::string& token = hint_it->second;
            try {
                col.spec.kind = kind_from_name(token);
            } catch (const Error&) {
                col.spec.family = expfam::family_from_name(token);
                family_hinted = true;
                switch (col.spec.family.kind) {
                    case FamilyKind::Normal: col.spec.kind = ColumnKind::Real; break;
                    case FamilyKind::Bernoulli: col.spec.kind = ColumnKind::Binary; break;
                    case FamilyKind::Poisson: col.spec.kind = ColumnKind::Count; break;
                    case FamilyKind::Categorical: col.spec.kind = ColumnKind::Categorical; break;
                    default: col.spec.kind = ColumnKind::PositiveReal; break;
                }
            }
        } else {
            col.spec.kind = infer_kind(present_tokens).kind;
        }

        if (col.spec.kind == ColumnKind::Categorical) {
            std::set<std::string> distinct(present_tokens.begin(), present_tokens.end());
            col.spec.categories.assign(distinct.begin(), distinct.end());
            sort_categories(col.spec.categories);
            if (col.spec.categories.size() < 2) {
                throw Error(errc::degenerate_column,
                            path + ": categorical column '" + header[c] + "' has a single category");
            }
            col.spec.family = Family::categorical(static_cast<int>(col.spec.categories.size()));
            std::map<std::string, double> code;
            for (std::size_t k = 0; k < col.spec.categories.size(); ++k) {
                code[col.spec.categories[k]] = static_cast<double>(k);
            }
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string t = trim(cells[c][r]);
                if (t.empty()) continue;
                col.values[r] = code.at(t);
                col.present[r] = 1;
            }
        } else {
            if (!family_hinted) {
                col.spec.family = default_family(col.spec.kind);
            }
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string t = trim(cells[c][r]);
                if (t.empty()) continue;
                double v;
                if (!parse_number(t, v)) {
                    parse_fail(path, r + 1, header[c], "unparseable numeric cell '" + t + "'");
                }
                if (col.spec.kind == ColumnKind::Binary && v != 0.0 && v != 1.0) {
                    parse_fail(path, r + 1, header[c], "binary column holds " + format_double(v));
                }
                if (col.spec.kind == ColumnKind::Count && (v < 0.0 || v != std::floor(v))) {
                    parse_fail(path, r + 1, header[c], "count column holds " + format_double(v));
                }
                if (family_hinted && !expfam::in_support(col.spec.family, v)) {
                    parse_fail(path, r + 1, header[c],
                               "value " + format_double(v) + " outside the support of " + col.spec.family.name());
                }
                if (!family_hinted && col.spec.kind == ColumnKind::PositiveReal && !(v > 0.0)) {
                    parse_fail(path, r + 1, header[c], "positive_real column holds " + format_double(v));
                }
                col.values[r] = v;
                col.present[r] = 1;
            }
        }
        frame.columns.push_back(std::move(col));
    }
    return frame;
}

// --- Metadata sidecar -------------------------------------------------------------

namespace {

ordered_json trick_to_json(const tricks::TrickRecord& rec) {
    ordered_json j;
    j["source_column"] = rec.source_column;
    j["kind"] = tricks::trick_name(rec.trick);
    j["group"] = rec.group;
    j["noise"] = {{"beta_a", rec.noise.beta_a}, {"beta_b", rec.noise.beta_b}, {"seed", rec.noise.seed}};
    j["original_family"] = rec.original_family.name();
    return j;
}

tricks::TrickRecord trick_from_json(const ordered_json& j) {
    tricks::TrickRecord rec;
    rec.source_column = j.at("source_column").get<std::string>();
    rec.trick = tricks::trick_from_name(j.at("kind").get<std::string>());
    rec.group = j.at("group").get<std::vector<std::string>>();
    const auto& n = j.at("noise");
    rec.noise.beta_a = n.at("beta_a").get<double>();
    rec.noise.beta_b = n.at("beta_b").get<double>();
    rec.noise.seed = n.at("seed").get<std::uint64_t>();
    rec.original_family = expfam::family_from_name(j.at("original_family").get<std::string>());
    return rec;
}

}  // namespace

const ColumnScaleInfo* ScalingMetadata::find(const std::string& name) const {
    for (const ColumnScaleInfo& c : per_column) {
        if (c.spec.name == name) {
            return &c;
        }
    }
    return nullptr;
}

void write_metadata(const ScalingMetadata& meta, const std::string& path) {
    ordered_json j;
    j["version"] = meta.version;
    j["method"] = meta.method;
    j["trick"] = meta.trick;
    j["target"] = {{"l_star", meta.target.l_star}, {"alpha", meta.target.alpha}, {"d_dims", meta.target.d_dims}};
    j["columns"] = ordered_json::array();
    for (const ColumnScaleInfo& c : meta.per_column) {
        ordered_json jc;
        jc["name"] = c.spec.name;
        jc["kind"] = kind_name(c.spec.kind);
        jc["family"] = c.spec.family.name();
        if (!c.spec.categories.empty()) {
            jc["categories"] = c.spec.categories;
        }
        jc["scaling_method"] = c.spec.scaling_method;
        jc["omega"] = c.spec.omega;
        if (c.target_l > 0.0) {
            jc["target_l"] = c.target_l;
        }
        if (c.has_achieved) {
            jc["achieved"] = {{"per_param", c.achieved_per_param}, {"total", c.achieved_total}};
        }
        if (c.spec.trick) {
            jc["trick"] = trick_to_json(*c.spec.trick);
        }
        if (!c.warnings.empty()) {
            jc["warnings"] = c.warnings;
        }
        j["columns"].push_back(std::move(jc));
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(errc::io, "cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw Error(errc::io, "failed writing metadata to '" + path + "'");
    }
}

ScalingMetadata read_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(errc::io, "cannot open '" + path + "' for reading");
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::parse, path + ": invalid metadata document: " + e.what());
    }
    ScalingMetadata meta;
    if (!j.contains("version")) {
        throw Error(errc::parse, path + ": metadata is missing the version field");
    }
    meta.version = j.at("version").get<std::string>();
    meta.method = j.value("method", std::string("none"));
    meta.trick = j.value("trick", std::string("none"));
    if (j.contains("target")) {
        meta.target.l_star = j["target"].value("l_star", 1.0);
        meta.target.alpha = j["target"].value("alpha", 1.0);
        meta.target.d_dims = j["target"].value("d_dims", 1);
    }
    for (const auto& jc : j.value("columns", ordered_json::array())) {
        ColumnScaleInfo c;
        c.spec.name = jc.at("name").get<std::string>();
        c.spec.kind = kind_from_name(jc.at("kind").get<std::string>());
        c.spec.family = expfam::family_from_name(jc.at("family").get<std::string>());
        if (jc.contains("categories")) {
            c.spec.categories = jc["categories"].get<std::vector<std::string>>();
        }
        c.spec.scaling_method = jc.value("scaling_method", std::string("none"));
        c.spec.omega = jc.value("omega", 1.0);
        c.target_l = jc.value("target_l", 0.0);
        if (jc.contains("achieved")) {
            c.has_achieved = true;
            c.achieved_per_param = jc["achieved"].at("per_param").get<std::vector<double>>();
            c.achieved_total = jc["achieved"].at("total").get<double>();
        }
        if (jc.contains("trick")) {
            c.spec.trick = trick_from_json(jc["trick"]);
        }
        if (jc.contains("warnings")) {
            c.warnings = jc["warnings"].get<std::vector<std::string>>();
        }
        meta.per_column.push_back(std::move(c));
    }
    return meta;
}

void write_scaled(const DatasetFrame& frame, const ScalingMetadata& meta,
                  const std::string& out_data_path, const std::string& out_meta_path,
                  char delimiter) {
    std::ofstream out(out_data_path);
    if (!out) {
        throw Error(errc::io, "cannot open '" + out_data_path + "' for writing");
    }
    for (std::size_t c = 0; c < frame.columns.size(); ++c) {
        if (c) out << delimiter;
        out << frame.columns[c].spec.name;
    }
    out << '\n';
    for (std::size_t r = 0; r < frame.n_rows; ++r) {
        for (std::size_t c = 0; c < frame.columns.size(); ++c) {
            if (c) out << delimiter;
            const Column& col = frame.columns[c];
            if (!col.present.empty() && !col.present[r]) {
                continue;  // missing cells round-trip as empty fields
            }
            if (col.spec.kind == ColumnKind::Categorical && !col.spec.categories.empty()) {
                out << col.spec.categories[static_cast<std::size_t>(col.values[r])];
            } else {
                out << format_double(col.values[r]);
            }
        }
        out << '\n';
    }
    if (!out) {
        throw Error(errc::io, "failed writing data to '" + out_data_path + "'");
    }
    write_metadata(meta, out_meta_path);
}

std::vector<std::pair<std::string, RecoveredColumn>> recover_parameters(
    const ScalingMetadata& meta, const std::map<std::string, expfam::NaturalParams>& scaled_params,
    double poisson_delta) {
    const auto lookup = [&](const std::string& name) -> const expfam::NaturalParams& {
        const auto it = scaled_params.find(name);
        if (it == scaled_params.end()) {
            throw Error(errc::metadata_mismatch, "column '" + name + "' is missing from the learned parameters");
        }
        return it->second;
    };

    std::vector<std::pair<std::string, RecoveredColumn>> out;
    std::set<std::string> done_sources;
    for (const ColumnScaleInfo& info : meta.per_column) {
        if (!info.spec.trick) {
            const expfam::NaturalParams& scaled = lookup(info.spec.name);
            RecoveredColumn rec;
            rec.family = info.spec.family;
            if (info.spec.family.is_continuous() && info.spec.omega != 1.0) {
                rec.params = expfam::from_natural(
                    info.spec.family, expfam::unscale_natural(info.spec.family, scaled, info.spec.omega));
            } else {
                rec.params = expfam::from_natural(info.spec.family, scaled);
            }
            out.emplace_back(info.spec.name, std::move(rec));
            continue;
        }

        const tricks::TrickRecord& trick = *info.spec.trick;
        if (done_sources.count(trick.source_column)) {
            continue;  // group already recovered via its first member
        }
        done_sources.insert(trick.source_column);

        // Recover each group member's mean, in group order.
        std::vector<double> means;
        means.reserve(trick.group.size());
        for (const std::string& member : trick.group) {
            const ColumnScaleInfo* minfo = meta.find(member);
            if (!minfo) {
                throw Error(errc::metadata_mismatch, "trick group member '" + member + "' is missing from the sidecar");
            }
            const expfam::NaturalParams& scaled = lookup(member);
            if (trick.trick == tricks::TrickKind::Bernoulli) {
                means.push_back(expfam::from_natural(expfam::FamilyKind::Bernoulli, scaled).values[0]);
            } else {
                const expfam::NaturalParams nat = minfo->spec.omega != 1.0
                                                      ? expfam::unscale_natural(expfam::FamilyKind::Gamma, scaled,
                                                                                minfo->spec.omega)
                                                      : scaled;
                const expfam::CanonicalParams gamma = expfam::from_natural(expfam::FamilyKind::Gamma, nat);
                if (trick.original_family.kind == FamilyKind::Poisson) {
                    means.push_back(tricks::recover_poisson(gamma, trick.noise, poisson_delta));
                } else {
                    means.push_back(tricks::recover_bernoulli(gamma, trick.noise));
                }
            }
        }

        RecoveredColumn rec;
        rec.family = trick.original_family;
        if (trick.original_family.kind == FamilyKind::Categorical) {
            const tricks::CategoricalRecovery cr = tricks::recover_categorical(means);
            rec.params.values = cr.pi;
            rec.degenerate = cr.degenerate;
        } else {
            rec.params.values = {means[0]};
        }
        out.emplace_back(trick.source_column, std::move(rec));
    }
    return out;
}

}  // namespace lipstd::dataio

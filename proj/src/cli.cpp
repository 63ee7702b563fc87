#include "lipstd/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lipstd/dataio.hpp"
#include "lipstd/harness.hpp"
#include "lipstd/scaler.hpp"

namespace lipstd::cli {

using dataio::Column;
using dataio::ColumnKind;
using dataio::DatasetFrame;
using expfam::Family;
using expfam::FamilyKind;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string metadata;
    std::string params_file;
    std::string outdir = "demo_out";
    std::string method = "lip";
    std::string trick = "gamma";
    std::string hints_path;
    std::string format = "table";
    double alpha = 1e-3;
    double delta = 1e-6;
    std::uint64_t seed = 20240101;
    std::string delimiter = ",";
    bool allow_unscaled_discrete = false;
    std::size_t demo_rows = 10000;
    long demo_iters = 2000000;
};

std::map<std::string, std::string> load_hints(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(errc::io, "cannot open hints file '" + path + "'");
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::parse, path + ": invalid hints document: " + e.what());
    }
    std::map<std::string, std::string> hints;
    for (const auto& [key, value] : j.items()) {
        hints[key] = value.get<std::string>();
    }
    return hints;
}

dataio::CsvOptions csv_options(const Options& opt) {
    dataio::CsvOptions csv;
    if (opt.delimiter.size() != 1) {
        throw Error(errc::usage, "--delimiter must be a single character");
    }
    csv.delimiter = opt.delimiter[0];
    if (!opt.hints_path.empty()) {
        csv.hints = load_hints(opt.hints_path);
    }
    return csv;
}

}  // namespace

DatasetFrame apply_tricks(const DatasetFrame& frame, const std::string& trick, std::uint64_t seed) {
    if (trick == "none") {
        return frame;
    }
    if (trick != "bern" && trick != "gamma") {
        throw Error(errc::usage, "unknown trick '" + trick + "' (expected none, bern, or gamma)");
    }
    DatasetFrame out;
    out.n_rows = frame.n_rows;
    for (std::size_t c = 0; c < frame.columns.size(); ++c) {
        const Column& col = frame.columns[c];
        const bool categorical = col.spec.family.kind == FamilyKind::Categorical;
        const bool discrete = col.spec.family.is_discrete();

        if (!discrete || (trick == "bern" && !categorical)) {
            out.columns.push_back(col);
            continue;
        }

        if (categorical) {
            const int k = col.spec.family.k;
            const tricks::BernoulliTrickResult onehot =
                tricks::apply_bernoulli_trick(col.values, col.present, k);
            tricks::TrickRecord record;
            record.source_column = col.spec.name;
            record.trick = trick == "bern" ? tricks::TrickKind::Bernoulli : tricks::TrickKind::BernoulliThenGamma;
            record.original_family = col.spec.family;
            for (int j = 0; j < k; ++j) {
                record.group.push_back(col.spec.name + "#" + std::to_string(j));
            }
            for (int j = 0; j < k; ++j) {
                Column sub;
                sub.spec.name = record.group[j];
                if (trick == "bern") {
                    sub.spec.kind = ColumnKind::Binary;
                    sub.spec.family = Family(FamilyKind::Bernoulli);
                    sub.values = onehot.columns[j];
                    sub.present = onehot.present[j];
                    sub.spec.trick = record;
                } else {
                    tricks::NoiseConfig noise;
                    noise.seed = Rng::derive_seed(seed, c * 1000003 + static_cast<std::size_t>(j));
                    const tricks::GammaTrickResult noised =
                        tricks::apply_gamma_trick(onehot.columns[j], onehot.present[j], noise);
                    sub.spec.kind = ColumnKind::PositiveReal;
                    sub.spec.family = Family(FamilyKind::Gamma);
                    sub.values = noised.values;
                    sub.present = noised.present;
                    tricks::TrickRecord rec = record;
                    rec.noise = noise;
                    sub.spec.trick = rec;
                }
                out.columns.push_back(std::move(sub));
            }
            continue;
        }

        // Count or binary column under the gamma trick: one noised Gamma column.
        tricks::NoiseConfig noise;
        noise.seed = Rng::derive_seed(seed, c * 1000003);
        const tricks::GammaTrickResult noised = tricks::apply_gamma_trick(col.values, col.present, noise);
        Column sub;
        sub.spec.name = col.spec.name;
        sub.spec.kind = ColumnKind::PositiveReal;
        sub.spec.family = Family(FamilyKind::Gamma);
        sub.values = noised.values;
        sub.present = noised.present;
        tricks::TrickRecord record;
        record.source_column = col.spec.name;
        record.trick = tricks::TrickKind::Gamma;
        record.group = {col.spec.name};
        record.noise = noise;
        record.original_family = col.spec.family;
        sub.spec.trick = record;
        out.columns.push_back(std::move(sub));
    }
    return out;
}

ScaledFrame scale_frame(DatasetFrame tricked, std::size_t original_dims,
                        const std::string& method, const std::string& trick, double alpha) {
    ScaledFrame out;
    const scaler::ScaleMethod m = scaler::method_from_name(method);
    const scaler::ScalingTarget target =
        scaler::ScalingTarget::from_learning_rate(alpha, static_cast<int>(original_dims));
    out.plan = scaler::plan_dataset(tricked, target, m);

    for (std::size_t c = 0; c < tricked.columns.size(); ++c) {
        Column& col = tricked.columns[c];
        const scaler::PlanEntry& entry = out.plan[c];
        col.spec.scaling_method = entry.passthrough_discrete ? "none" : method;
        if (!entry.ok) {
            out.exit_code = std::max(out.exit_code, entry.error_class);
            continue;
        }
        col.spec.omega = entry.omega;
        if (!entry.passthrough_discrete && entry.omega != 1.0) {
            const expfam::ScalingLaw law = expfam::scaling_law(col.spec.family);
            for (std::size_t r = 0; r < col.values.size(); ++r) {
                if (!col.present.empty() && !col.present[r]) continue;
                col.values[r] = law.transform == expfam::DataTransform::Power
                                    ? std::pow(col.values[r], entry.omega)
                                    : col.values[r] * entry.omega;
            }
        }
    }

    out.metadata.version = "1";
    out.metadata.method = method;
    out.metadata.trick = trick;
    out.metadata.target = target;
    for (std::size_t c = 0; c < tricked.columns.size(); ++c) {
        const scaler::PlanEntry& entry = out.plan[c];
        dataio::ColumnScaleInfo info;
        info.spec = tricked.columns[c].spec;
        info.target_l = entry.target_l;
        info.warnings = entry.warnings;
        if (entry.ok && entry.has_achieved) {
            info.has_achieved = true;
            info.achieved_per_param = entry.achieved.per_param;
            info.achieved_total = entry.achieved.total;
        }
        if (!entry.ok) {
            info.warnings.push_back("failed: " + entry.error);
        }
        out.metadata.per_column.push_back(std::move(info));
    }
    out.frame = std::move(tricked);
    return out;
}

namespace {

void reject_unscaled_discrete(const DatasetFrame& frame, const Options& opt) {
    if (opt.method != "lip" || opt.trick != "none" || opt.allow_unscaled_discrete) {
        return;
    }
    std::string names;
    for (const Column& col : frame.columns) {
        if (col.spec.family.is_discrete()) {
            names += names.empty() ? col.spec.name : ", " + col.spec.name;
        }
    }
    if (!names.empty()) {
        throw Error(errc::parse,
                    "lip with trick=none cannot scale discrete columns (" + names +
                        "); pass --allow-unscaled-discrete to let them through unscaled");
    }
}


void print_plan(const ScaledFrame& outcome, const Options& opt, std::ostream& os) {
    if (opt.format == "json") {
        ordered_json j = ordered_json::array();
        for (std::size_t c = 0; c < outcome.plan.size(); ++c) {
            const scaler::PlanEntry& e = outcome.plan[c];
            ordered_json row;
            row["column"] = e.column;
            row["family"] = outcome.frame.columns[c].spec.family.name();
            row["ok"] = e.ok;
            if (e.ok) {
                row["omega"] = e.omega;
                if (e.has_achieved) row["achieved_total"] = e.achieved.total;
                if (e.target_l > 0.0) row["target_l"] = e.target_l;
            } else {
                row["error"] = e.error;
            }
            if (!e.warnings.empty()) row["warnings"] = e.warnings;
            j.push_back(std::move(row));
        }
        os << j.dump(2) << "\n";
        return;
    }
    os << "column\tfamily\tomega\tachieved_L\ttarget_L\tnotes\n";
    for (std::size_t c = 0; c < outcome.plan.size(); ++c) {
        const scaler::PlanEntry& e = outcome.plan[c];
        os << e.column << '\t' << outcome.frame.columns[c].spec.family.name() << '\t';
        if (!e.ok) {
            os << "-\t-\t-\terror: " << e.error << "\n";
            continue;
        }
        os << dataio::format_double(e.omega) << '\t'
           << (e.has_achieved ? dataio::format_double(e.achieved.total) : "-") << '\t'
           << (e.target_l > 0.0 ? dataio::format_double(e.target_l) : "-") << '\t';
        for (std::size_t w = 0; w < e.warnings.size(); ++w) {
            os << (w ? "; " : "") << e.warnings[w];
        }
        os << "\n";
    }
}

int cmd_scale(const Options& opt) {
    DatasetFrame frame = dataio::read_csv(opt.input, csv_options(opt));
    reject_unscaled_discrete(frame, opt);
    const std::size_t original_dims = frame.columns.size();
    DatasetFrame tricked = apply_tricks(frame, opt.trick, opt.seed);
    ScaledFrame outcome = scale_frame(std::move(tricked), original_dims, opt.method, opt.trick, opt.alpha);

    const std::string out_data = opt.output.empty() ? opt.input + ".scaled.csv" : opt.output;
    const std::string out_meta = opt.metadata.empty() ? opt.input + ".meta.json" : opt.metadata;
    dataio::write_scaled(outcome.frame, outcome.metadata, out_data, out_meta, opt.delimiter[0]);
    print_plan(outcome, opt, std::cout);
    return outcome.exit_code;
}

int cmd_recover(const Options& opt) {
    const dataio::ScalingMetadata meta = dataio::read_metadata(opt.metadata);
    std::ifstream in(opt.params_file);
    if (!in) {
        throw Error(errc::io, "cannot open params file '" + opt.params_file + "'");
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::parse, opt.params_file + ": invalid params document: " + e.what());
    }
    std::map<std::string, expfam::NaturalParams> params;
    for (const auto& [key, value] : j.items()) {
        params[key] = expfam::NaturalParams{value.get<std::vector<double>>()};
    }

    const auto recovered = dataio::recover_parameters(meta, params, opt.delta);
    ordered_json out;
    out["version"] = "1";
    out["columns"] = ordered_json::object();
    for (const auto& [name, rec] : recovered) {
        ordered_json col;
        col["family"] = rec.family.name();
        col["params"] = rec.params.values;
        if (rec.degenerate) col["degenerate"] = true;
        out["columns"][name] = std::move(col);
    }
    if (opt.output.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream os(opt.output);
        if (!os) {
            throw Error(errc::io, "cannot open '" + opt.output + "' for writing");
        }
        os << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_analyze(const Options& opt) {
    DatasetFrame frame = dataio::read_csv(opt.input, csv_options(opt));
    const std::size_t original_dims = frame.columns.size();
    DatasetFrame tricked = apply_tricks(frame, opt.trick, opt.seed);
    const scaler::ScalingTarget target =
        scaler::ScalingTarget::from_learning_rate(opt.alpha, static_cast<int>(original_dims));

    const std::array<scaler::ScaleMethod, 5> methods = {
        scaler::ScaleMethod::None, scaler::ScaleMethod::Std, scaler::ScaleMethod::Max,
        scaler::ScaleMethod::Iqr, scaler::ScaleMethod::Lip};

    ordered_json jout = ordered_json::array();
    std::ostringstream table;
    table << "column\tfamily\tparams\tL_i\tL_none\tL_std\tL_max\tL_iqr\tL_lip\n";
    int exit_code = 0;
    for (const Column& col : tricked.columns) {
        ordered_json row;
        row["column"] = col.spec.name;
        row["family"] = col.spec.family.name();
        table << col.spec.name << '\t' << col.spec.family.name() << '\t';
        if (col.spec.family.is_discrete()) {
            table << "-\t-\t-\t-\t-\t-\t-\n";
            row["note"] = "discrete column; apply a trick to scale";
            jout.push_back(std::move(row));
            continue;
        }
        try {
            const expfam::CanonicalParams fit = expfam::fit_empirical(col.spec.family, col.values, col.present);
            const expfam::NaturalParams nat = expfam::to_natural(col.spec.family, fit);
            const smoothness::SmoothnessEstimate local = smoothness::estimate(col.spec.family, nat);
            row["params"] = fit.values;
            row["L_local"] = local.per_param;
            {
                std::string ps;
                for (std::size_t i = 0; i < fit.values.size(); ++i) {
                    ps += (i ? "," : "") + dataio::format_double(fit.values[i]);
                }
                table << ps << '\t';
                std::string ls;
                for (std::size_t i = 0; i < local.per_param.size(); ++i) {
                    ls += (i ? "," : "") + dataio::format_double(local.per_param[i]);
                }
                table << ls << '\t';
            }
            for (scaler::ScaleMethod m : methods) {
                double total = 0.0;
                if (m == scaler::ScaleMethod::Lip) {
                    const std::size_t group =
                        col.spec.trick ? std::max<std::size_t>(col.spec.trick->group.size(), 1) : 1;
                    scaler::ScalingTarget budget = target;
                    budget.l_star = target.l_star / static_cast<double>(group);
                    // The solver's scaled-law objective; equals the budgeted
                    // target whenever the solve is feasible.
                    total = scaler::solve_omega(col.spec.family, nat, budget).achieved.total;
                } else {
                    double omega = 1.0;
                    if (m != scaler::ScaleMethod::None) {
                        const scaler::BaselineMethod bm = m == scaler::ScaleMethod::Std ? scaler::BaselineMethod::Std
                                                          : m == scaler::ScaleMethod::Max
                                                              ? scaler::BaselineMethod::Max
                                                              : scaler::BaselineMethod::Iqr;
                        std::vector<double> obs;
                        for (std::size_t r = 0; r < col.values.size(); ++r) {
                            if (col.present.empty() || col.present[r]) {
                                obs.push_back(col.spec.family.kind == FamilyKind::LogNormal
                                                  ? std::log(col.values[r])
                                                  : col.values[r]);
                            }
                        }
                        omega = scaler::baseline_omega(bm, obs);
                    }
                    // Local constants of the likelihood actually evaluated on
                    // the rescaled data.
                    total = smoothness::estimate(col.spec.family,
                                                 expfam::scale_natural(col.spec.family, nat, omega))
                                .total;
                }
                row["L_" + scaler::method_name(m)] = total;
                table << dataio::format_double(total) << (m == scaler::ScaleMethod::Lip ? '\n' : '\t');
            }
        } catch (const Error& e) {
            table << "error: " << e.what() << "\n";
            row["error"] = e.what();
            exit_code = std::max(exit_code, exit_class(e.code()));
        }
        jout.push_back(std::move(row));
    }
    if (opt.format == "json") {
        std::cout << jout.dump(2) << "\n";
    } else {
        std::cout << table.str();
    }
    return exit_code;
}

struct DemoMethod {
    std::string method;
    std::string trick;
    std::string label() const { return method + "-" + trick; }
};

int cmd_demo(const Options& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.outdir);

    // Mixed fixture: wide Normal, sharp Exponential, Categorical(4).
    std::vector<harness::SyntheticSpec> specs;
    specs.push_back({"gauss", Family(FamilyKind::Normal), expfam::CanonicalParams{{50.0, 100.0}}});
    specs.push_back({"expo", Family(FamilyKind::Exponential), expfam::CanonicalParams{{10.0}}});
    specs.push_back({"cat", Family::categorical(4), expfam::CanonicalParams{{0.1, 0.2, 0.3, 0.4}}});
    const DatasetFrame fixture = harness::generate_synthetic(specs, opt.demo_rows, opt.seed, 0.0);

    const std::vector<DemoMethod> grid = {{"std", "none"}, {"max", "none"}, {"iqr", "none"},
                                          {"lip", "none"}, {"std", "gamma"}, {"lip", "gamma"}};

    std::ostringstream report;
    report << "method\tgradient_norm_ratio\tdispersion_t0\tmax_dispersion\tconvergence_spread\tall_converged\n";
    for (const DemoMethod& dm : grid) {
        DatasetFrame tricked = apply_tricks(fixture, dm.trick, opt.seed);
        ScaledFrame outcome =
            scale_frame(std::move(tricked), fixture.columns.size(), dm.method, dm.trick, opt.alpha);
        for (const scaler::PlanEntry& e : outcome.plan) {
            if (!e.ok) {
                throw Error(errc::divergence, "demo scaling failed for " + dm.label() + ": " + e.error);
            }
        }
        const harness::FitTrace trace = harness::fit_columns(outcome.frame, opt.alpha, opt.demo_iters);
        const harness::BalanceReport balance = harness::balance_report(trace);

        report << dm.label() << '\t' << dataio::format_double(balance.gradient_norm_ratio) << '\t'
               << dataio::format_double(balance.improvement_dispersion.front()) << '\t'
               << dataio::format_double(*std::max_element(balance.improvement_dispersion.begin(),
                                                          balance.improvement_dispersion.end()))
               << '\t' << dataio::format_double(balance.convergence_spread) << '\t'
               << (balance.all_converged ? "yes" : "no") << '\n';

        std::ofstream tf(fs::path(opt.outdir) / ("trace_" + dm.label() + ".csv"));
        tf << "iter";
        for (const auto& ct : trace.columns) {
            tf << ',' << ct.column << "_loglik," << ct.column << "_gradnorm";
        }
        tf << '\n';
        // Thin the trace so the files stay plottable but small.
        const long stride = std::max<long>(1, trace.iterations / 200);
        for (long t = 0; t <= trace.iterations; t += stride) {
            tf << t;
            for (const auto& ct : trace.columns) {
                tf << ',' << dataio::format_double(ct.loglik[t]) << ','
                   << dataio::format_double(ct.grad_norm[t]);
            }
            tf << '\n';
        }
    }

    std::ofstream rf(fs::path(opt.outdir) / "report.csv");
    rf << report.str();
    std::cout << report.str();
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Per-column likelihood-smoothness scaling for mixed tabular data"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env_seed = std::getenv("LIPSTD_SEED")) {
        opt.seed = std::strtoull(env_seed, nullptr, 10);
    }

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--method", opt.method, "Scaling method: lip, std, max, iqr, none");
        sub->add_option("--trick", opt.trick, "Discrete-column trick: none, bern, gamma");
        sub->add_option("--alpha", opt.alpha, "Practitioner learning rate; L* = 1/(D*alpha)");
        sub->add_option("--seed", opt.seed, "Root seed (env LIPSTD_SEED sets the default)");
        sub->add_option("--hints", opt.hints_path, "JSON file mapping column name -> kind or family");
        sub->add_option("--delimiter", opt.delimiter, "Field delimiter, single character");
        sub->add_option("--delta", opt.delta, "Positivity floor for Poisson recovery");
        sub->add_option("--format", opt.format, "Output format: table or json");
        sub->add_flag("--allow-unscaled-discrete", opt.allow_unscaled_discrete,
                      "With lip and trick=none, pass discrete columns through unscaled");
    };

    CLI::App* scale = app.add_subcommand("scale", "Scale a dataset and write data + metadata sidecar");
    scale->add_option("input", opt.input, "Input delimited file")->required();
    scale->add_option("-o,--output", opt.output, "Scaled data path (default <input>.scaled.csv)");
    scale->add_option("-m,--metadata", opt.metadata, "Metadata sidecar path (default <input>.meta.json)");
    add_common(scale);

    CLI::App* recover = app.add_subcommand("recover", "Map learned scaled-space parameters back");
    recover->add_option("metadata", opt.metadata, "Metadata sidecar written by scale")->required();
    recover->add_option("params", opt.params_file, "JSON of column -> natural parameters")->required();
    recover->add_option("-o,--output", opt.output, "Output path (default stdout)");
    add_common(recover);

    CLI::App* analyze = app.add_subcommand("analyze", "Per-column smoothness under each method");
    analyze->add_option("input", opt.input, "Input delimited file")->required();
    add_common(analyze);

    CLI::App* demo = app.add_subcommand("demo", "Synthetic balanced-learning demonstration");
    demo->add_option("--outdir", opt.outdir, "Directory for report and trace files");
    demo->add_option("--rows", opt.demo_rows, "Fixture rows");
    demo->add_option("--iters", opt.demo_iters, "Gradient-ascent iteration budget");
    add_common(demo);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (scale->parsed()) return cmd_scale(opt);
        if (recover->parsed()) return cmd_recover(opt);
        if (analyze->parsed()) return cmd_analyze(opt);
        if (demo->parsed()) return cmd_demo(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_class(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace lipstd::cli

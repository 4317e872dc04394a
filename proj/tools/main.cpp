// radpipe: volumetric feature-extraction and classification pipeline.
//
// Subcommands cover the full path from synthetic data generation through
// feature extraction, cross-validated evaluation, model training/inference,
// and segmentation scoring. Exit codes: 0 success, 1 runtime/data failure,
// 2 usage error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radpipe/config.hpp"
#include "radpipe/error.hpp"
#include "radpipe/eval.hpp"
#include "radpipe/features_io.hpp"
#include "radpipe/gbdt.hpp"
#include "radpipe/nifti.hpp"
#include "radpipe/phantom.hpp"
#include "radpipe/pipeline.hpp"
#include "radpipe/roi.hpp"

namespace {

using radpipe::PipelineConfig;

// Options shared across subcommands (CLI11 fallthrough lets them appear
// before or after the subcommand name).
struct GlobalOptions {
    std::string config_path;
    int jobs = 1;
    std::uint64_t seed = 0;
};

PipelineConfig make_config(const GlobalOptions& g) {
    if (g.config_path.empty()) {
        PipelineConfig cfg;
        cfg.validate();
        return cfg;
    }
    return radpipe::load_config(g.config_path);
}

std::string format2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

// ---------------------------------------------------------------- phantom

int run_phantom(const GlobalOptions& g, int n_pos, int n_neg, const std::string& out_dir) {
    const auto rows = radpipe::generate_dataset(n_pos, n_neg, g.seed, out_dir);
    std::cout << "wrote " << rows.size() << " cases (" << n_pos << " positive, " << n_neg
              << " negative) to " << out_dir << "\n";
    return 0;
}

// --------------------------------------------------------------- features

int run_features(const GlobalOptions& g, const std::string& manifest, const std::string& out_csv) {
    const PipelineConfig cfg = make_config(g);
    const auto cases = radpipe::manifest_case_paths(manifest);
    const auto batch = radpipe::extract_features_batch(cases, cfg, g.jobs);
    for (const auto& f : batch.failures)
        std::cerr << "case " << f.case_id << ": " << f.message << "\n";
    radpipe::save_features(batch.records, out_csv);
    std::cout << "extracted " << batch.records.size() << "/" << cases.size() << " cases -> "
              << out_csv << "\n";
    if (!batch.failures.empty()) {
        std::cerr << batch.failures.size() << " case(s) failed\n";
        return 1;
    }
    return 0;
}

// --------------------------------------------------------------------- cv

nlohmann::ordered_json hyperparams_json(const radpipe::GbdtHyperParams& hp) {
    return {{"n_estimators", hp.n_estimators},   {"max_depth", hp.max_depth},
            {"learning_rate", hp.learning_rate}, {"l2_lambda", hp.l2_lambda},
            {"gamma_min_gain", hp.gamma_min_gain}, {"min_child_weight", hp.min_child_weight},
            {"base_score", hp.base_score}};
}

int run_cv(const GlobalOptions& g, const std::string& features_csv, const std::string& report_path) {
    const PipelineConfig cfg = make_config(g);
    const auto data = radpipe::load_features(features_csv);
    const radpipe::MetricSummary s =
        radpipe::cross_validate(data, cfg.gbdt, cfg.eval.k, g.seed);

    std::printf("%-8s%12s%12s%12s\n", "Fold", "Accuracy", "Precision", "Recall");
    for (std::size_t i = 0; i < s.per_fold.size(); ++i)
        std::printf("%-8zu%12.2f%12.2f%12.2f\n", i + 1, s.per_fold[i][0], s.per_fold[i][1],
                    s.per_fold[i][2]);
    std::printf("%-8s", "Average");
    for (int m = 0; m < 3; ++m) {
        const std::string cell = format2(s.mean[static_cast<std::size_t>(m)]) + " (+/-" +
                                 format2(s.stddev[static_cast<std::size_t>(m)]) + ")";
        std::printf("%20s", cell.c_str());
    }
    std::printf("\n");

    static const char* kMetricNames[3] = {"accuracy", "precision", "recall"};
    nlohmann::ordered_json report;
    report["seed"] = g.seed;
    report["k"] = cfg.eval.k;
    report["hyperparams"] = hyperparams_json(cfg.gbdt);
    report["per_fold"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.per_fold.size(); ++i) {
        nlohmann::ordered_json row;
        row["fold"] = i;
        for (int m = 0; m < 3; ++m)
            row[kMetricNames[m]] = radpipe::round2(s.per_fold[i][static_cast<std::size_t>(m)]);
        report["per_fold"].push_back(row);
    }
    for (const char* agg : {"mean", "std"})
        report[agg] = nlohmann::ordered_json::object();
    for (int m = 0; m < 3; ++m) {
        report["mean"][kMetricNames[m]] = radpipe::round2(s.mean[static_cast<std::size_t>(m)]);
        report["std"][kMetricNames[m]] = radpipe::round2(s.stddev[static_cast<std::size_t>(m)]);
    }
    std::ofstream out(report_path);
    if (!out) throw radpipe::IoError("cannot open " + report_path);
    out << report.dump(2) << "\n";
    std::cout << "report -> " << report_path << "\n";
    return 0;
}

// ------------------------------------------------------------ train/predict

int run_train(const GlobalOptions& g, const std::string& features_csv,
              const std::string& model_path) {
    const PipelineConfig cfg = make_config(g);
    const auto data = radpipe::load_features(features_csv);
    const radpipe::GbdtModel model = radpipe::train(data, cfg.gbdt);
    radpipe::save_model(model, model_path);

    std::size_t correct = 0;
    for (const auto& r : data)
        if (radpipe::predict_label(radpipe::predict_proba(model, *r.features)) == r.label)
            ++correct;
    std::printf("training accuracy: %.2f%% (%zu/%zu cases), model -> %s\n",
                100.0 * static_cast<double>(correct) / static_cast<double>(data.size()), correct,
                data.size(), model_path.c_str());
    return 0;
}

int run_predict(const std::string& model_path, const std::string& features_csv,
                const std::string& out_csv) {
    const radpipe::GbdtModel model = radpipe::load_model(model_path);
    const auto data = radpipe::load_features(features_csv);

    std::ofstream out(out_csv);
    if (!out) throw radpipe::IoError("cannot open " + out_csv);
    out << "case_id,probability,predicted_label\n";
    for (const auto& r : data) {
        const double p = radpipe::predict_proba(model, *r.features);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", p);
        out << r.case_id << "," << buf << "," << radpipe::predict_label(p) << "\n";
    }
    std::cout << "wrote predictions for " << data.size() << " cases -> " << out_csv << "\n";
    return 0;
}

// ------------------------------------------------------------- segmetrics

std::set<std::string> mask_filenames(const std::string& dir) {
    std::set<std::string> names;
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw radpipe::IoError("cannot read directory " + dir + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() >= 4 && name.compare(name.size() - 4, 4, ".nii") == 0)
            names.insert(name);
        else if (name.size() >= 7 && name.compare(name.size() - 7, 7, ".nii.gz") == 0)
            names.insert(name);
    }
    return names;
}

struct VoxelCounts {
    std::int64_t tp = 0, fp = 0, fn = 0;
};

VoxelCounts voxel_counts(const radpipe::Mask& pred, const radpipe::Mask& truth) {
    VoxelCounts c;
    for (std::size_t i = 0; i < pred.voxels.size(); ++i) {
        if (pred.voxels[i] && truth.voxels[i])
            ++c.tp;
        else if (pred.voxels[i])
            ++c.fp;
        else if (truth.voxels[i])
            ++c.fn;
    }
    return c;
}

int run_segmetrics(const std::string& pred_dir, const std::string& truth_dir,
                   const std::string& report_path) {
    const auto pred_names = mask_filenames(pred_dir);
    const auto truth_names = mask_filenames(truth_dir);

    std::vector<std::string> unmatched;
    for (const auto& n : pred_names)
        if (!truth_names.count(n)) unmatched.push_back(n + " (only in " + pred_dir + ")");
    for (const auto& n : truth_names)
        if (!pred_names.count(n)) unmatched.push_back(n + " (only in " + truth_dir + ")");
    if (!unmatched.empty()) {
        for (const auto& u : unmatched) std::cerr << "unmatched mask: " << u << "\n";
        return 1;
    }
    if (pred_names.empty()) throw radpipe::IoError("no .nii/.nii.gz masks found in " + pred_dir);

    nlohmann::ordered_json per_case = nlohmann::ordered_json::array();
    double sums[4] = {0, 0, 0, 0};
    std::printf("%-24s%10s%10s%12s%10s\n", "Case", "Dice", "mIoU", "Precision", "Recall");
    for (const auto& name : pred_names) {
        const radpipe::Mask pred =
            radpipe::load_mask((std::filesystem::path(pred_dir) / name).string());
        const radpipe::Mask truth =
            radpipe::load_mask((std::filesystem::path(truth_dir) / name).string());
        radpipe::check_aligned(pred.grid, truth.grid);

        const VoxelCounts c = voxel_counts(pred, truth);
        const double metrics[4] = {
            radpipe::dice(pred, truth),
            radpipe::miou(pred, truth),
            c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0,
            c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0,
        };
        std::printf("%-24s%10.4f%10.4f%12.4f%10.4f\n", name.c_str(), metrics[0], metrics[1],
                    metrics[2], metrics[3]);
        per_case.push_back({{"case", name},
                            {"dice", metrics[0]},
                            {"miou", metrics[1]},
                            {"precision", metrics[2]},
                            {"recall", metrics[3]}});
        for (int i = 0; i < 4; ++i) sums[i] += metrics[i];
    }
    const auto n = static_cast<double>(pred_names.size());
    std::printf("%-24s%10.4f%10.4f%12.4f%10.4f\n", "Mean", sums[0] / n, sums[1] / n, sums[2] / n,
                sums[3] / n);

    if (!report_path.empty()) {
        nlohmann::ordered_json report;
        report["per_case"] = per_case;
        report["mean"] = {{"dice", sums[0] / n},
                          {"miou", sums[1] / n},
                          {"precision", sums[2] / n},
                          {"recall", sums[3] / n}};
        std::ofstream out(report_path);
        if (!out) throw radpipe::IoError("cannot open " + report_path);
        out << report.dump(2) << "\n";
        std::cout << "report -> " << report_path << "\n";
    }
    return 0;
}

// ----------------------------------------------------------- export-slices

int run_export_slices(const GlobalOptions& g, const std::string& manifest,
                      const std::string& out_dir) {
    const PipelineConfig cfg = make_config(g);
    const auto cases = radpipe::manifest_case_paths(manifest);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);  // reuse existing dirs

    struct Slot {
        std::size_t slice_count = 0;
        bool failed = false;
        std::string message;
    };
    std::vector<Slot> slots(cases.size());

    const auto process = [&](std::size_t idx) {
        Slot& slot = slots[idx];
        try {
            const radpipe::Volume v = radpipe::load_volume(cases[idx].image_path);
            const radpipe::Mask m = radpipe::load_mask(cases[idx].mask_path);
            const radpipe::RoiResult roi = radpipe::prepare_roi(v, m, cfg);
            const auto slices = radpipe::export_slices(roi.roi_volume, cfg.roi.export_size,
                                                       cfg.roi.export_size, cfg.roi.export_axis);
            for (std::size_t s = 0; s < slices.size(); ++s) {
                char name[64];
                std::snprintf(name, sizeof name, "%s_z%03zu.pgm", cases[idx].case_id.c_str(), s);
                radpipe::write_pgm16(slices[s],
                                     (std::filesystem::path(out_dir) / name).string());
            }
            slot.slice_count = slices.size();
        } catch (const std::exception& e) {
            slot.failed = true;
            slot.message = e.what();
        }
    };

    const int jobs = std::max(1, g.jobs);
    if (jobs <= 1 || cases.size() <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), cases.size());
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cases.size(); i = next.fetch_add(1))
                    process(i);
            });
        for (auto& t : pool) t.join();
    }

    std::size_t total = 0, failures = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (slots[i].failed) {
            std::cerr << "case " << cases[i].case_id << ": " << slots[i].message << "\n";
            ++failures;
        } else {
            total += slots[i].slice_count;
        }
    }
    std::cout << "wrote " << total << " slice images for " << (cases.size() - failures) << "/"
              << cases.size() << " cases -> " << out_dir << "\n";
    if (failures > 0) {
        std::cerr << failures << " case(s) failed\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volumetric feature-extraction and classification pipeline"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file (defaults used when omitted)");
    app.add_option("--jobs", g.jobs, "Worker threads for per-case stages")
        ->check(CLI::Range(1, 1024));
    app.add_option("--seed", g.seed, "Seed for stochastic stages");

    int rc = 0;

    std::string out_dir, out_csv, manifest, features_csv, report_path, model_path;
    std::string pred_dir, truth_dir;
    int n_pos = 0, n_neg = 0;

    CLI::App* phantom = app.add_subcommand("phantom", "Generate a synthetic labeled dataset");
    phantom->fallthrough();
    phantom->add_option("--pos", n_pos, "Positive cases")->required()->check(CLI::NonNegativeNumber);
    phantom->add_option("--neg", n_neg, "Negative cases")->required()->check(CLI::NonNegativeNumber);
    phantom->add_option("--out", out_dir, "Output directory")->required();
    phantom->callback([&] { rc = run_phantom(g, n_pos, n_neg, out_dir); });

    CLI::App* features =
        app.add_subcommand("features", "Extract the full feature set for every manifest case");
    features->fallthrough();
    features->add_option("--manifest", manifest, "Dataset manifest CSV")->required();
    features->add_option("--out", out_csv, "Output feature CSV")->required();
    features->callback([&] { rc = run_features(g, manifest, out_csv); });

    CLI::App* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation of the classifier");
    cv->fallthrough();
    cv->add_option("--features", features_csv, "Feature CSV")->required();
    cv->add_option("--report", report_path, "Output JSON report")->required();
    cv->callback([&] { rc = run_cv(g, features_csv, report_path); });

    CLI::App* train = app.add_subcommand("train", "Fit the classifier on a full feature CSV");
    train->fallthrough();
    train->add_option("--features", features_csv, "Feature CSV")->required();
    train->add_option("--model", model_path, "Output model JSON")->required();
    train->callback([&] { rc = run_train(g, features_csv, model_path); });

    CLI::App* predict = app.add_subcommand("predict", "Score cases with a saved model");
    predict->fallthrough();
    predict->add_option("--model", model_path, "Model JSON")->required();
    predict->add_option("--features", features_csv, "Feature CSV")->required();
    predict->add_option("--out", out_csv, "Output prediction CSV")->required();
    predict->callback([&] { rc = run_predict(model_path, features_csv, out_csv); });

    CLI::App* segmetrics =
        app.add_subcommand("segmetrics", "Compare predicted and reference mask directories");
    segmetrics->fallthrough();
    segmetrics->add_option("--pred", pred_dir, "Predicted mask directory")->required();
    segmetrics->add_option("--truth", truth_dir, "Reference mask directory")->required();
    segmetrics->add_option("--report", report_path, "Optional JSON report path");
    segmetrics->callback([&] { rc = run_segmetrics(pred_dir, truth_dir, report_path); });

    CLI::App* slices =
        app.add_subcommand("export-slices", "Write normalized ROI slices as 16-bit PGM images");
    slices->fallthrough();
    slices->add_option("--manifest", manifest, "Dataset manifest CSV")->required();
    slices->add_option("--out", out_dir, "Output directory")->required();
    slices->callback([&] { rc = run_export_slices(g, manifest, out_dir); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const radpipe::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

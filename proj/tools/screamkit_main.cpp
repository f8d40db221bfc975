// screamkit command line: extract / split / train / eval / project / stats.
// Exit codes: 0 success, 1 partial failure (some manifest rows failed),
// 2 invalid config or schema.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <screamkit/screamkit.hpp>

namespace {

using nlohmann::json;

json load_config(const std::string& path)
{
    if (path.empty()) return json::object();
    try {
        return json::parse(screamkit::read_text_file(path));
    } catch (const json::parse_error& e) {
        throw screamkit::ConfigError(std::string("config file: ") + e.what());
    }
}

void require_seed(const json& cfg, const std::string& name)
{
    if (!cfg.contains("seeds") || !cfg["seeds"].contains(name))
        throw screamkit::ConfigError("config: seeds." + name +
                                     " is required (pass it in the config file or via --seed)");
}

void set_seed(json& cfg, const std::string& name, std::uint64_t value)
{
    if (!cfg.contains("seeds")) cfg["seeds"] = json::object();
    cfg["seeds"][name] = value;
}

std::vector<screamkit::FeatureSetId> parse_sets(const std::vector<std::string>& names)
{
    std::vector<screamkit::FeatureSetId> sets;
    for (const auto& n : names) sets.push_back(screamkit::feature_set_from_string(n));
    return sets;
}

int run_extract_cmd(const json& cfg, const std::vector<std::string>& set_names)
{
    const std::string manifest = cfg.value("manifest", "");
    if (manifest.empty()) throw screamkit::ConfigError("extract: --manifest is required");
    auto sets = parse_sets(set_names.empty() ? std::vector<std::string>{"fs1"} : set_names);
    const auto result = screamkit::run_extract(manifest, sets, cfg.value("out_dir", "out"),
                                               cfg.value("vggish_embeddings", ""));
    for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
    std::cout << "extract: " << result.songs_done << " songs, " << result.files_written.size()
              << " feature files, " << result.errors.size() << " errors\n";
    return result.errors.empty() ? 0 : 1;
}

int run_split_cmd(const json& cfg)
{
    require_seed(cfg, "split");
    require_seed(cfg, "undersample");
    const std::string features = cfg.value("features", "");
    if (features.empty()) throw screamkit::ConfigError("split: --features is required");
    std::array<double, 3> ratios{0.70, 0.15, 0.15};
    if (cfg.contains("ratios")) {
        const auto r = cfg["ratios"].get<std::vector<double>>();
        if (r.size() != 3) throw screamkit::ConfigError("split: ratios must have 3 entries");
        ratios = {r[0], r[1], r[2]};
    }
    const std::string out = cfg.value("split_file", cfg.value("out_dir", "out") + "/split.json");
    screamkit::run_split(features, ratios, cfg.value("classes", 3),
                         cfg["seeds"]["split"].get<std::uint64_t>(),
                         cfg["seeds"]["undersample"].get<std::uint64_t>(), out);
    std::cout << "split: wrote " << out << "\n";
    return 0;
}

int run_train_cmd(const json& cfg)
{
    for (const auto& exp_json : screamkit::expand_experiments(cfg)) {
        require_seed(exp_json, "model");
        const auto exp = screamkit::parse_experiment_config(exp_json);
        const auto result = screamkit::run_train(exp);
        std::cout << "train: wrote " << result.model_path << "\n";
    }
    return 0;
}

int run_eval_cmd(const json& cfg, const std::string& model_flag)
{
    const auto experiments = screamkit::expand_experiments(cfg);
    for (const auto& exp_json : experiments) {
        const auto exp = screamkit::parse_experiment_config(exp_json);
        std::string model_path = model_flag;
        if (model_path.empty() || experiments.size() > 1)
            model_path = exp.out_dir + "/model_" + exp.tag() + ".json";
        const auto result = screamkit::run_eval(exp, model_path);
        std::cout << "eval: " << exp.tag() << " acc=" << result.report.metrics.acc
                  << " bal_acc=" << result.report.metrics.bal_acc
                  << " macro_f1=" << result.report.metrics.macro_f1 << " -> "
                  << result.report_path << "\n";
    }
    return 0;
}

int run_project_cmd(const json& cfg, double perplexity, int iters)
{
    const std::string features = cfg.value("features", "");
    if (features.empty()) throw screamkit::ConfigError("project: --features is required");
    screamkit::TsneParams params;
    params.perplexity = perplexity;
    params.iters = iters;
    if (cfg.contains("seeds") && cfg["seeds"].contains("projection"))
        params.seed = cfg["seeds"]["projection"].get<std::uint64_t>();
    const auto result = screamkit::run_project(features, cfg.value("classes", 3),
                                               cfg.value("out_dir", "out"), params);
    std::cout << "project: final_kl=" << result.projection.final_kl << " -> " << result.json_path
              << "\n";
    return 0;
}

int run_stats_cmd(const json& cfg)
{
    const std::string manifest = cfg.value("manifest", "");
    if (manifest.empty()) throw screamkit::ConfigError("stats: --manifest is required");
    const std::string out = cfg.value("out_dir", "out");
    std::filesystem::create_directories(out);
    const auto result = screamkit::run_stats(manifest, out + "/stats.json");
    for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
    std::cout << "stats: wrote " << result.json_path << "\n";
    return result.errors.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"screamkit: heavy-metal vocal technique classification benchmark"};
    app.require_subcommand(1);

    std::string config_path, manifest, out_dir, features, split_file, model_path, vggish;
    std::vector<std::string> feature_sets;
    int classes = 0;
    std::uint64_t seed = 0, undersample_seed = 0;
    bool seed_given = false, undersample_seed_given = false;
    double perplexity = 30.0;
    int iters = 1000;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* extract = app.add_subcommand("extract", "extract per-block feature files from a manifest");
    add_common(extract);
    extract->add_option("--manifest", manifest, "manifest CSV");
    extract->add_option("--feature-set", feature_sets, "feature sets (fs1..fs5)")->delimiter(',');
    extract->add_option("--vggish", vggish, "precomputed VGGish embeddings (JSONL, for fs2)");

    auto* split = app.add_subcommand("split", "undersample and band-split a feature file");
    add_common(split);
    split->add_option("--features", features, "feature JSONL file");
    split->add_option("--split-file", split_file, "output split JSON path");
    split->add_option("--classes", classes, "class scheme (3 or 6)");
    split->add_option("--seed", seed, "split seed")->each([&](const std::string&) { seed_given = true; });
    split->add_option("--undersample-seed", undersample_seed, "undersample seed")
        ->each([&](const std::string&) { undersample_seed_given = true; });

    auto* train = app.add_subcommand("train", "train the configured classifier");
    add_common(train);
    train->add_option("--features", features, "feature JSONL file");
    train->add_option("--split-file", split_file, "split JSON file");
    train->add_option("--feature-set", feature_sets, "feature set")->delimiter(',');
    train->add_option("--classes", classes, "class scheme (3 or 6)");
    train->add_option("--seed", seed, "model seed")->each([&](const std::string&) { seed_given = true; });

    auto* eval = app.add_subcommand("eval", "evaluate a trained model on the test partition");
    add_common(eval);
    eval->add_option("--features", features, "feature JSONL file");
    eval->add_option("--split-file", split_file, "split JSON file");
    eval->add_option("--feature-set", feature_sets, "feature set")->delimiter(',');
    eval->add_option("--classes", classes, "class scheme (3 or 6)");
    eval->add_option("--model", model_path, "model file (defaults to out_dir/model_<tag>.json)");

    auto* project = app.add_subcommand("project", "t-SNE projection of a feature file");
    add_common(project);
    project->add_option("--features", features, "feature JSONL file");
    project->add_option("--classes", classes, "class scheme for colors (3 or 6)");
    project->add_option("--seed", seed, "projection seed")->each([&](const std::string&) { seed_given = true; });
    project->add_option("--perplexity", perplexity, "t-SNE perplexity");
    project->add_option("--iters", iters, "t-SNE iterations");

    auto* stats = app.add_subcommand("stats", "dataset statistics from a manifest");
    add_common(stats);
    stats->add_option("--manifest", manifest, "manifest CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        json cfg = load_config(config_path);
        // flags override config keys
        if (!manifest.empty()) cfg["manifest"] = manifest;
        if (!out_dir.empty()) cfg["out_dir"] = out_dir;
        if (!features.empty()) cfg["features"] = features;
        if (!split_file.empty()) cfg["split_file"] = split_file;
        if (!vggish.empty()) cfg["vggish_embeddings"] = vggish;
        if (classes != 0) cfg["classes"] = classes;
        if (feature_sets.size() == 1 && !extract->parsed()) cfg["feature_set"] = feature_sets[0];
        if (!cfg.contains("out_dir")) cfg["out_dir"] = "out";

        if (extract->parsed()) {
            std::vector<std::string> sets = feature_sets;
            if (sets.empty() && cfg.contains("feature_set"))
                sets.push_back(cfg["feature_set"].get<std::string>());
            return run_extract_cmd(cfg, sets);
        }
        if (split->parsed()) {
            if (seed_given) set_seed(cfg, "split", seed);
            if (undersample_seed_given) set_seed(cfg, "undersample", undersample_seed);
            return run_split_cmd(cfg);
        }
        if (train->parsed()) {
            if (seed_given) set_seed(cfg, "model", seed);
            return run_train_cmd(cfg);
        }
        if (eval->parsed()) return run_eval_cmd(cfg, model_path);
        if (project->parsed()) {
            if (seed_given) set_seed(cfg, "projection", seed);
            return run_project_cmd(cfg, perplexity, iters);
        }
        if (stats->parsed()) return run_stats_cmd(cfg);
    } catch (const screamkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

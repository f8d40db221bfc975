// Acceptance suite: one line per criterion, each with its tolerance and
// runtime budget pinned in code. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <screamkit/screamkit.hpp>

#include "support/oracles.hpp"
#include "support/signals.hpp"

using namespace screamkit;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

bool expect(bool cond, const std::string& what, std::string& detail)
{
    if (!cond && detail.empty()) detail = what;
    return cond;
}

Block block_of(std::vector<double> samples)
{
    Block b;
    b.samples = std::move(samples);
    b.source_id = "acc";
    b.block_index = 0;
    return b;
}

// --- 1. DSP oracle suite -----------------------------------------------------

bool dsp_oracles(std::string& detail)
{
    bool ok = true;
    const Block tone = block_of(testsupport::sine(1000.0, 2.0));
    const Spectrogram spec = stft(tone);

    // spectral centroid of a 1 kHz sine within 1% (steady-state frames)
    const FrameSeries centroid = spectral_centroid(spec);
    for (std::size_t t = 1; t + 1 < centroid.n_frames(); ++t)
        ok &= expect(std::abs(centroid.values.at(0, t) - 1000.0) / 1000.0 < 0.01,
                     "centroid off 1 kHz by more than 1%", detail);

    // ZCR of a 1 kHz sine within 5% of 2*f/sr = 0.04535
    const FrameSeries zcr = frame_zcr(tone);
    for (std::size_t t = 0; t < zcr.n_frames(); ++t)
        ok &= expect(std::abs(zcr.values.at(0, t) - 0.04535) / 0.04535 < 0.05,
                     "zcr off 0.04535 by more than 5%", detail);

    // RMS of a unit sine within 1e-3 of 1/sqrt(2)
    const FrameSeries rms = frame_rms(tone);
    for (std::size_t t = 0; t < rms.n_frames(); ++t)
        ok &= expect(std::abs(rms.values.at(0, t) - 0.70711) < 1e-3, "rms not 0.70711 +- 1e-3",
                     detail);

    // flatness of a flat spectrum == 1 +- 1e-9
    Spectrogram flat;
    flat.window_size = 2048;
    flat.frame_hop = 1024;
    flat.sample_rate = 44100.0;
    flat.magnitudes = Mat(1025, 4, 0.5);
    flat.bin_freqs.resize(1025);
    for (std::size_t k = 0; k < 1025; ++k) flat.bin_freqs[k] = k * 44100.0 / 2048.0;
    const FrameSeries flatness = spectral_flatness(flat);
    for (double v : flatness.values.v)
        ok &= expect(std::abs(v - 1.0) < 1e-9, "flat-spectrum flatness not 1 +- 1e-9", detail);

    // STFT peak bin on steady-state frames
    for (std::size_t t = 1; t + 1 < spec.n_frames(); ++t) {
        std::size_t argmax = 0;
        for (std::size_t k = 1; k < spec.n_bins(); ++k)
            if (spec.magnitudes.at(k, t) > spec.magnitudes.at(argmax, t)) argmax = k;
        ok &= expect(argmax == 46, "stft peak not at bin 46", detail);
    }

    // FFT vs direct DFT oracle, 1e-6 relative
    const auto x = testsupport::white_noise(1024, 17);
    const auto ours = rfft(x);
    const auto ref = oracles::naive_dft(x);
    for (std::size_t k = 0; k < ours.size(); ++k)
        ok &= expect(std::abs(ours[k] - ref[k]) / std::max(1.0, std::abs(ref[k])) < 1e-6,
                     "fft differs from direct DFT oracle", detail);

    // Parseval with symmetric-bin doubling, 1e-6 relative, interior frames
    const auto noise = testsupport::white_noise(88200, 23);
    const Spectrogram nspec = stft(block_of(noise));
    std::vector<double> hann(2048);
    for (int n = 0; n < 2048; ++n) hann[static_cast<std::size_t>(n)] = 0.5 - 0.5 * std::cos(2.0 * kPi * n / 2048.0);
    for (std::size_t t = 1; t <= 20; ++t) {
        double energy = 0.0;
        for (int n = 0; n < 2048; ++n) {
            const double v = noise[(t - 1) * 1024 + static_cast<std::size_t>(n)] * hann[static_cast<std::size_t>(n)];
            energy += v * v;
        }
        double power = nspec.magnitudes.at(0, t) * nspec.magnitudes.at(0, t) +
                       nspec.magnitudes.at(1024, t) * nspec.magnitudes.at(1024, t);
        for (std::size_t k = 1; k < 1024; ++k)
            power += 2.0 * nspec.magnitudes.at(k, t) * nspec.magnitudes.at(k, t);
        power /= 2048.0;
        ok &= expect(std::abs(power - energy) / energy < 1e-6, "Parseval violated beyond 1e-6",
                     detail);
    }
    return ok;
}

// --- 2. MFCC properties ------------------------------------------------------

bool mfcc_properties(std::string& detail)
{
    bool ok = true;

    // DCT of a constant log-mel column: c1..c12 == 0 +- 1e-9
    LogMelSpectrogram constant;
    constant.n_mels = 128;
    constant.log_scale = true;
    constant.values = Mat(128, 4, -3.7);
    const FrameSeries c = mfcc(constant, 13);
    for (std::size_t t = 0; t < 4; ++t)
        for (std::size_t k = 1; k < 13; ++k)
            ok &= expect(std::abs(c.values.at(k, t)) < 1e-9, "constant input leaks into c1..c12",
                         detail);

    // amplitude-scale invariance of c1..c12 (+- 1e-6); broadband bed keeps
    // every mel band above the power floor
    auto signal = testsupport::sine(1000.0, 2.0);
    {
        const auto bed = testsupport::white_noise(signal.size(), 29, 0.01);
        for (std::size_t i = 0; i < signal.size(); ++i) signal[i] += bed[i];
    }
    const MelFilterbank bank(128, 0.0, 22050.0, 2048, 44100.0);
    auto coeffs = [&](double amp) {
        auto scaled = signal;
        for (auto& v : scaled) v *= amp;
        return mfcc(log_compress(mel_spectrogram(stft(block_of(std::move(scaled))), bank)), 13);
    };
    const FrameSeries a = coeffs(1.0);
    const FrameSeries b = coeffs(2.0);
    for (std::size_t t = 0; t < a.n_frames(); ++t)
        for (std::size_t k = 1; k < 13; ++k)
            ok &= expect(std::abs(a.values.at(k, t) - b.values.at(k, t)) <
                             1e-6 * std::max(1.0, std::abs(a.values.at(k, t))),
                         "scale invariance beyond 1e-6", detail);

    // independent log-mel -> DCT oracle (+- 1e-6)
    const LogMelSpectrogram mel = log_compress(mel_spectrogram(stft(block_of(signal)), bank));
    const FrameSeries ours = mfcc(mel, 13);
    for (std::size_t t = 0; t < mel.n_frames(); t += 5) {
        std::vector<double> column(128);
        for (std::size_t m = 0; m < 128; ++m) column[m] = mel.values.at(m, t);
        const auto ref = oracles::dct2_ortho(column);
        for (std::size_t k = 0; k < 13; ++k)
            ok &= expect(std::abs(ours.values.at(k, t) - ref[k]) <
                             1e-6 * std::max(1.0, std::abs(ref[k])),
                         "mfcc differs from DCT oracle", detail);
    }
    return ok;
}

// --- 3. dimensional contracts ------------------------------------------------

bool dimensional_contracts(std::string& detail)
{
    bool ok = true;
    const FeatureExtractor extractor;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Block b = block_of(testsupport::white_noise(88200, seed, 0.9));
        ok &= expect(extractor.extract(b, FeatureSetId::FS1).values.size() == 76, "FS1 != 76",
                     detail);
        ok &= expect(extractor.extract(b, FeatureSetId::FS3).values.size() == 52, "FS3 != 52",
                     detail);
        ok &= expect(extractor.extract(b, FeatureSetId::FS4).values.size() == 24, "FS4 != 24",
                     detail);
        const Mat fs5 = extractor.extract(b, FeatureSetId::FS5).matrix;
        ok &= expect(fs5.rows == 128 && fs5.cols == 87, "FS5 != 128x87", detail);
    }
    return ok;
}

// --- 4. SVM suite ------------------------------------------------------------

bool svm_suite(std::string& detail)
{
    bool ok = true;

    // 2-point symmetric problem: boundary at the midpoint
    {
        SvmParams params;
        params.kernel = KernelKind::Linear;
        params.C = 1000.0;
        const std::vector<std::vector<double>> X = {{-1.0}, {1.0}};
        const std::vector<int> y = {+1, -1};
        const SmoResult res = smo_solve(X, y, params, 0.0);
        ok &= expect(res.converged, "2-point SMO did not converge", detail);
        ok &= expect(std::abs(res.bias) < 1e-6, "2-point bias shift >= 1e-6", detail);
        ok &= expect(res.alpha[0] > 0.0 && res.alpha[1] > 0.0,
                     "2-point problem must keep both support vectors", detail);
        ok &= expect(max_kkt_violation(X, y, res.alpha, res.bias, params, 0.0) <= 1e-3,
                     "2-point KKT above 1e-3", detail);
    }

    // separable Gaussian blobs: 100% training accuracy, KKT within 1e-3
    {
        std::vector<std::vector<double>> X;
        std::vector<int> y;
        testsupport::make_blobs({{0.0, 0.0}, {10.0, 0.0}}, 100, 1.0, 41, X, y);
        SvmParams params;
        params.compute_kkt = true;
        const SvmModel model = svm_train(X, y, params);
        for (std::size_t i = 0; i < X.size(); ++i)
            ok &= expect(svm_predict(model, X[i]).label == y[i], "blob training accuracy < 100%",
                         detail);
        for (const auto& m : model.machines)
            ok &= expect(m.max_kkt <= 1e-3, "blob KKT above 1e-3", detail);
    }

    // XOR with RBF: 100% training accuracy
    {
        const std::vector<std::vector<double>> X = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
        const std::vector<int> y = {0, 0, 1, 1};
        SvmParams params;
        params.gamma = 1.0;
        params.C = 10.0;
        params.compute_kkt = true;
        const SvmModel model = svm_train(X, y, params);
        for (std::size_t i = 0; i < X.size(); ++i)
            ok &= expect(svm_predict(model, X[i]).label == y[i], "XOR accuracy < 100%", detail);
        for (const auto& m : model.machines)
            ok &= expect(m.max_kkt <= 1e-3, "XOR KKT above 1e-3", detail);
    }
    return ok;
}

// --- 5. CNN suite ------------------------------------------------------------

bool cnn_suite(std::string& detail)
{
    bool ok = true;

    // analytic vs central finite differences, double precision, < 1e-4 relative
    {
        CnnArch arch;
        arch.conv_channels = {2};
        arch.dense_dims = {4};
        arch.n_classes = 3;
        arch.in_rows = 8;
        arch.in_cols = 7;
        auto model = cnn_init<double>(arch, 51);
        Rng rng(52);
        std::vector<Mat> X;
        for (int i = 0; i < 2; ++i) {
            Mat m(8, 7);
            for (auto& v : m.v) v = rng.normal();
            X.push_back(std::move(m));
        }
        const std::vector<int> y = {0, 2};
        auto grads = cnn_loss_and_grads(model, X, y).second;
        auto gblocks = cnn_grad_blocks(grads);
        auto pblocks = cnn_param_blocks(model);
        const double h = 1e-6;
        double max_rel = 0.0;
        for (std::size_t b = 0; b < pblocks.size(); ++b) {
            auto& params = *pblocks[b];
            const auto& g = *gblocks[b];
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double orig = params[i];
                params[i] = orig + h;
                const double up = cnn_loss_and_grads(model, X, y).first;
                params[i] = orig - h;
                const double down = cnn_loss_and_grads(model, X, y).first;
                params[i] = orig;
                const double numeric = (up - down) / (2.0 * h);
                max_rel = std::max(max_rel, std::abs(numeric - g[i]) /
                                                std::max({std::abs(numeric), std::abs(g[i]), 1e-8}));
            }
        }
        ok &= expect(max_rel < 1e-4, "gradient check beyond 1e-4 relative", detail);
    }

    // overfit 32 class-striped log-mel samples within 200 epochs
    {
        CnnArch arch;
        arch.conv_channels = {2, 4, 4};
        arch.dense_dims = {16, 8};
        arch.n_classes = 4;
        arch.in_rows = 128;
        arch.in_cols = 87;
        Rng rng(61);
        std::vector<Mat> X;
        std::vector<int> y;
        for (int i = 0; i < 32; ++i) {
            const int cls = i % 4;
            X.push_back(testsupport::mel_pattern(cls, 4, 128, 87, rng));
            y.push_back(cls);
        }
        auto model = cnn_init<float>(arch, 62);
        CnnTrainConfig cfg;
        cfg.lr = 3e-3;
        cfg.batch_size = 8;
        cfg.max_epochs = 200;
        cfg.patience = 200;
        cfg.seed = 63;
        const auto history = cnn_train(model, X, y, {}, {}, cfg);
        double best = 0.0;
        for (const auto& e : history.epochs) best = std::max(best, e.train_acc);
        ok &= expect(best == 1.0, "overfit run never reached 100% train accuracy", detail);
    }

    // softmax rows sum to 1 +- 1e-9
    {
        Rng rng(71);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> logits(1 + rng.uniform_below(8));
            for (auto& z : logits) z = rng.normal() * 10.0;
            const auto p = softmax(logits);
            double sum = 0.0;
            for (double v : p) sum += v;
            ok &= expect(std::abs(sum - 1.0) < 1e-9, "softmax row sum beyond 1e-9", detail);
        }
    }
    return ok;
}

// --- 6. metrics suite --------------------------------------------------------

bool metrics_suite(std::string& detail)
{
    bool ok = true;
    {
        const ConfusionMatrix cm = confusion_matrix({0, 1, 1}, {0, 1, 0}, 2);
        const EvalMetrics m = metrics(cm);
        ok &= expect(m.acc == 2.0 / 3.0, "acc != 2/3", detail);
        ok &= expect(m.bal_acc == 0.75, "bal_acc != 0.75", detail);
        ok &= expect(m.macro_f1 == 2.0 / 3.0, "macro_f1 != 2/3", detail);
    }
    {
        Rng rng(81);
        for (int trial = 0; trial < 1000; ++trial) {
            const int k = 2 + static_cast<int>(rng.uniform_below(5));
            ConfusionMatrix cm;
            cm.counts.assign(static_cast<std::size_t>(k),
                             std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
            for (auto& row : cm.counts)
                for (auto& v : row) v = static_cast<std::int64_t>(rng.uniform_below(200));
            for (int i = 0; i < k; ++i) cm.names.push_back("c");
            const EvalMetrics m = metrics(cm);
            double mean = 0.0;
            for (double r : m.class_recall) mean += r;
            mean /= static_cast<double>(k);
            ok &= expect(m.bal_acc == mean, "bal_acc != mean(recall)", detail);
        }
    }
    {
        Rng rng(82);
        const std::vector<int> mapping = {0, 1, 1, 1, 1, 2};
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> y_true, y_pred, t3, p3;
            for (int i = 0; i < 120; ++i) {
                y_true.push_back(static_cast<int>(rng.uniform_below(6)));
                y_pred.push_back(static_cast<int>(rng.uniform_below(6)));
                t3.push_back(mapping[static_cast<std::size_t>(y_true.back())]);
                p3.push_back(mapping[static_cast<std::size_t>(y_pred.back())]);
            }
            const ConfusionMatrix collapsed =
                collapse_confusion(confusion_matrix(y_true, y_pred, 6), mapping);
            const ConfusionMatrix direct = confusion_matrix(t3, p3, 3);
            ok &= expect(collapsed.counts == direct.counts, "6->3 collapse mismatch", detail);
            const EvalMetrics a = metrics(collapsed);
            const EvalMetrics b = metrics(direct);
            ok &= expect(a.acc == b.acc && a.bal_acc == b.bal_acc && a.macro_f1 == b.macro_f1,
                         "collapsed metrics differ from direct metrics", detail);
        }
    }
    return ok;
}

// --- 7. dataset tooling ------------------------------------------------------

bool dataset_tooling(std::string& detail)
{
    bool ok = true;

    // band-disjoint splits: 0 violations in 1000 randomized trials
    {
        Rng rng(91);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<LabeledBlock> blocks;
            const int n_bands = 2 + static_cast<int>(rng.uniform_below(10));
            for (int band = 0; band < n_bands; ++band) {
                const int n = 1 + static_cast<int>(rng.uniform_below(30));
                for (int i = 0; i < n; ++i) {
                    LabeledBlock b;
                    b.block_ref = {"song" + std::to_string(band), i};
                    b.band_id = "band" + std::to_string(band);
                    b.label6 = Label6::Sing;
                    b.label3 = Label3::Sing;
                    blocks.push_back(std::move(b));
                }
            }
            const Split split = band_split(blocks, {0.70, 0.15, 0.15}, trial);
            ok &= expect(split.train.size() + split.validation.size() + split.test.size() ==
                             blocks.size(),
                         "split does not partition the input", detail);
            std::set<std::string> train_bands, rest_bands;
            for (const auto& b : split.train) train_bands.insert(b.band_id);
            for (const auto& b : split.validation) rest_bands.insert(b.band_id);
            for (const auto& b : split.test) rest_bands.insert(b.band_id);
            for (const auto& band : train_bands)
                ok &= expect(rest_bands.count(band) == 0, "band-disjointness violated", detail);
        }
    }

    // undersample determinism and count rules
    {
        auto make = [](std::size_t sing, std::size_t scream, std::size_t novocal) {
            std::vector<LabeledBlock> blocks;
            int idx = 0;
            auto push = [&](Label6 l, std::size_t n) {
                for (std::size_t i = 0; i < n; ++i) {
                    LabeledBlock b;
                    b.block_ref = {"s", idx++};
                    b.band_id = "b";
                    b.label6 = l;
                    b.label3 = map_3class(l);
                    blocks.push_back(std::move(b));
                }
            };
            push(Label6::Sing, sing);
            push(Label6::MidFry, scream);
            push(Label6::NoVocal, novocal);
            return blocks;
        };
        const auto blocks = make(3100, 5200, 9400);
        const auto out = undersample(blocks, 3, 5);
        std::map<Label3, std::size_t> counts;
        for (const auto& b : out) ++counts[b.label3];
        ok &= expect(counts[Label3::Sing] == 3000 && counts[Label3::Scream] == 3000 &&
                         counts[Label3::NoVocal] == 3000,
                     "floor-to-thousand rule violated", detail);

        const auto small = make(800, 4000, 0);
        const auto out_small = undersample(small, 3, 5);
        std::map<Label3, std::size_t> counts_small;
        for (const auto& b : out_small) ++counts_small[b.label3];
        ok &= expect(counts_small[Label3::Sing] == 800 && counts_small[Label3::Scream] == 800,
                     "sub-thousand rule violated", detail);

        const auto again = undersample(blocks, 3, 5);
        ok &= expect(again.size() == out.size(), "undersample not deterministic", detail);
        for (std::size_t i = 0; i < again.size(); ++i)
            ok &= expect(again[i].block_ref == out[i].block_ref, "undersample not deterministic",
                         detail);
    }

    // block-count formula on randomized durations
    {
        Rng rng(92);
        for (int trial = 0; trial < 200; ++trial) {
            const double seconds = rng.uniform() * 12.0;
            AudioClip clip;
            clip.sample_rate = 44100;
            clip.source_id = "r";
            clip.samples = {std::vector<double>(
                static_cast<std::size_t>(std::llround(seconds * 44100)), 0.1)};
            const auto blocks = make_blocks(clip);
            const std::size_t len = clip.samples[0].size();
            const std::size_t expected = len >= 88200 ? (len - 88200) / 44100 + 1 : 0;
            ok &= expect(blocks.size() == expected, "block-count formula violated", detail);
        }
    }
    return ok;
}

// --- 8. t-SNE ---------------------------------------------------------------

bool tsne_suite(std::string& detail)
{
    bool ok = true;

    // P-matrix contracts on random data
    {
        Rng rng(95);
        std::vector<std::vector<double>> X;
        for (int i = 0; i < 120; ++i) {
            std::vector<double> v(8);
            for (auto& x : v) x = rng.normal();
            X.push_back(std::move(v));
        }
        std::vector<double> achieved;
        const Mat P = tsne_joint_p(X, 20.0, 1e-3, &achieved);
        double sum = 0.0;
        for (std::size_t i = 0; i < P.rows; ++i)
            for (std::size_t j = 0; j < P.cols; ++j) {
                ok &= expect(P.at(i, j) >= 0.0, "negative P entry", detail);
                ok &= expect(P.at(i, j) == P.at(j, i), "P not symmetric", detail);
                sum += P.at(i, j);
            }
        ok &= expect(std::abs(sum - 1.0) < 1e-9, "P does not sum to 1 +- 1e-9", detail);
        for (double p : achieved)
            ok &= expect(std::abs(std::log(p) - std::log(20.0)) <= 1e-3,
                         "conditional perplexity beyond 1e-3 of target", detail);
    }

    // two 50-sigma-separated clusters, n = 200, separable for 5 fixed seeds
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(200 + seed);
        std::vector<std::vector<double>> X;
        std::vector<int> labels;
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 100; ++i) {
                X.push_back({c * 50.0 + rng.normal(), rng.normal(), rng.normal()});
                labels.push_back(c);
            }
        TsneParams params;
        params.perplexity = 30.0;
        params.iters = 600;
        params.seed = seed;
        const Projection2D proj = tsne(X, params, labels);
        ok &= expect(proj.final_kl < proj.initial_kl, "final KL not below initial KL", detail);
        std::vector<std::array<double, 2>> a, b;
        for (std::size_t i = 0; i < proj.points.size(); ++i)
            (labels[i] == 0 ? a : b).push_back(proj.points[i]);
        ok &= expect(oracles::linearly_separable(a, b),
                     "clusters not linearly separable in the embedding (seed " +
                         std::to_string(seed) + ")",
                     detail);
    }
    return ok;
}

// --- 9. end-to-end smoke test ------------------------------------------------

std::string run_chain(const fs::path& dir, const std::string& manifest)
{
    const std::string feat_dir = (dir / "features").string();
    const auto extract_result = run_extract(manifest, {FeatureSetId::FS1}, feat_dir);
    if (!extract_result.errors.empty()) throw std::runtime_error("extract failed");
    const std::string features = feat_dir + "/features_fs1.jsonl";
    run_split(features, {0.70, 0.15, 0.15}, 3, 101, 102, (dir / "split.json").string());

    nlohmann::json cfg_json;
    cfg_json["classes"] = 3;
    cfg_json["feature_set"] = "fs1";
    cfg_json["classifier"] = "svm";
    cfg_json["features"] = features;
    cfg_json["split_file"] = (dir / "split.json").string();
    cfg_json["out_dir"] = dir.string();
    cfg_json["seeds"] = {{"split", 101}, {"undersample", 102}, {"model", 103}};
    const ExperimentConfig cfg = parse_experiment_config(cfg_json);
    const TrainResult trained = run_train(cfg);
    const EvalResult result = run_eval(cfg, trained.model_path);
    return result.report_path;
}

bool end_to_end(std::string& detail)
{
    const fs::path root = fs::temp_directory_path() / "screamkit_acceptance_e2e";
    fs::remove_all(root);
    const auto corpus = testsupport::make_synth_corpus(root / "corpus", 5, 2, 301);

    const std::string report_a = run_chain(root / "run_a", corpus.manifest_path);
    const std::string report_b = run_chain(root / "run_b", corpus.manifest_path);

    bool ok = true;
    const auto report = report_from_json(nlohmann::ordered_json::parse(read_text_file(report_a)));
    ok &= expect(report.metrics.bal_acc > 0.9,
                 "3-class balanced accuracy " + std::to_string(report.metrics.bal_acc) +
                     " not above 0.9",
                 detail);
    ok &= expect(read_text_file(report_a) == read_text_file(report_b),
                 "seeded reruns produced different report bytes", detail);
    fs::remove_all(root);
    return ok;
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {"dsp-oracles", 10.0, dsp_oracles},
        {"mfcc-properties", 30.0, mfcc_properties},
        {"dimensional-contracts", 60.0, dimensional_contracts},
        {"svm-suite", 30.0, svm_suite},
        {"cnn-suite", 180.0, cnn_suite},
        {"metrics-suite", 30.0, metrics_suite},
        {"dataset-tooling", 60.0, dataset_tooling},
        {"tsne", 60.0, tsne_suite},
        {"end-to-end-smoke", 300.0, end_to_end},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criterion.budget_seconds) {
            ok = false;
            detail = "runtime " + std::to_string(seconds) + " s exceeds budget " +
                     std::to_string(criterion.budget_seconds) + " s";
        }
        std::printf("[%s] %-22s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                    seconds, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}

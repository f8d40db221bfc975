#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screamkit/util.hpp"

namespace screamkit {

/// Row = true class, column = predicted class.
struct ConfusionMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<std::int64_t>> counts;

    std::size_t k() const { return counts.size(); }
    std::int64_t total() const
    {
        std::int64_t t = 0;
        for (const auto& row : counts)
            for (auto c : row) t += c;
        return t;
    }
};

inline ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                        const std::vector<int>& y_pred, int k,
                                        std::vector<std::string> names = {})
{
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion_matrix: length mismatch");
    if (k < 1) throw std::invalid_argument("confusion_matrix: k must be >= 1");
    ConfusionMatrix cm;
    cm.counts.assign(static_cast<std::size_t>(k),
                     std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
    if (names.empty())
        for (int i = 0; i < k; ++i) names.push_back("class" + std::to_string(i));
    if (names.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("confusion_matrix: wrong number of class names");
    cm.names = std::move(names);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= k || y_pred[i] < 0 || y_pred[i] >= k)
            throw std::invalid_argument("confusion_matrix: label out of range");
        ++cm.counts[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])];
    }
    return cm;
}

struct EvalMetrics {
    double acc = 0.0;
    double bal_acc = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> class_recall;
};

/// acc = trace/total; recall of an empty class is 0 and still counts toward
/// the macro averages; macro F1 uses per-class harmonic precision/recall.
inline EvalMetrics metrics(const ConfusionMatrix& cm)
{
    const std::size_t k = cm.k();
    EvalMetrics m;
    m.class_recall.assign(k, 0.0);

    std::int64_t total = 0, diag = 0;
    std::vector<std::int64_t> row_sum(k, 0), col_sum(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const std::int64_t c = cm.counts[i][j];
            total += c;
            row_sum[i] += c;
            col_sum[j] += c;
            if (i == j) diag += c;
        }
    }
    m.acc = total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;

    double recall_sum = 0.0, f1_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double recall =
            row_sum[i] > 0 ? static_cast<double>(cm.counts[i][i]) / static_cast<double>(row_sum[i]) : 0.0;
        const double precision =
            col_sum[i] > 0 ? static_cast<double>(cm.counts[i][i]) / static_cast<double>(col_sum[i]) : 0.0;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        m.class_recall[i] = recall;
        recall_sum += recall;
        f1_sum += f1;
    }
    m.bal_acc = recall_sum / static_cast<double>(k);
    m.macro_f1 = f1_sum / static_cast<double>(k);
    return m;
}

/// Sum cells into mapped classes. mapping[i] gives the target class of
/// source class i.
inline ConfusionMatrix collapse_confusion(const ConfusionMatrix& cm,
                                          const std::vector<int>& mapping,
                                          std::vector<std::string> names = {})
{
    if (mapping.size() != cm.k())
        throw std::invalid_argument("collapse_confusion: mapping size mismatch");
    int k_out = 0;
    for (int t : mapping) {
        if (t < 0) throw std::invalid_argument("collapse_confusion: negative target class");
        k_out = std::max(k_out, t + 1);
    }
    ConfusionMatrix out;
    out.counts.assign(static_cast<std::size_t>(k_out),
                      std::vector<std::int64_t>(static_cast<std::size_t>(k_out), 0));
    if (names.empty())
        for (int i = 0; i < k_out; ++i) names.push_back("class" + std::to_string(i));
    out.names = std::move(names);
    for (std::size_t i = 0; i < cm.k(); ++i)
        for (std::size_t j = 0; j < cm.k(); ++j)
            out.counts[static_cast<std::size_t>(mapping[i])][static_cast<std::size_t>(mapping[j])] +=
                cm.counts[i][j];
    return out;
}

/// Which run produced a report.
struct ExperimentDesc {
    std::string feature_set;
    std::string classifier;
    int classes = 3;
    std::uint64_t seed = 0;
};

struct EvalReport {
    ExperimentDesc experiment;
    ConfusionMatrix confusion;
    EvalMetrics metrics;
};

inline nlohmann::ordered_json report_to_json(const EvalReport& report)
{
    nlohmann::ordered_json j;
    j["experiment"] = {{"feature_set", report.experiment.feature_set},
                       {"classifier", report.experiment.classifier},
                       {"classes", report.experiment.classes},
                       {"seed", report.experiment.seed}};
    j["confusion"] = report.confusion.counts;
    j["acc"] = report.metrics.acc;
    j["bal_acc"] = report.metrics.bal_acc;
    j["macro_f1"] = report.metrics.macro_f1;
    nlohmann::ordered_json recall;
    for (std::size_t i = 0; i < report.confusion.names.size(); ++i)
        recall[report.confusion.names[i]] = report.metrics.class_recall[i];
    j["class_recall"] = recall;
    return j;
}

inline EvalReport report_from_json(const nlohmann::ordered_json& j)
{
    EvalReport report;
    report.experiment.feature_set = j.at("experiment").at("feature_set").get<std::string>();
    report.experiment.classifier = j.at("experiment").at("classifier").get<std::string>();
    report.experiment.classes = j.at("experiment").at("classes").get<int>();
    report.experiment.seed = j.at("experiment").at("seed").get<std::uint64_t>();
    report.confusion.counts = j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
    for (const auto& [name, value] : j.at("class_recall").items()) {
        report.confusion.names.push_back(name);
        report.metrics.class_recall.push_back(value.get<double>());
    }
    report.metrics.acc = j.at("acc").get<double>();
    report.metrics.bal_acc = j.at("bal_acc").get<double>();
    report.metrics.macro_f1 = j.at("macro_f1").get<double>();
    return report;
}

} // namespace screamkit

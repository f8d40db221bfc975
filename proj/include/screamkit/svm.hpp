#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "screamkit/util.hpp"

namespace screamkit {

enum class KernelKind { Rbf, Linear };

inline std::string to_string(KernelKind k) { return k == KernelKind::Rbf ? "rbf" : "linear"; }

inline KernelKind kernel_from_string(const std::string& s)
{
    if (s == "rbf") return KernelKind::Rbf;
    if (s == "linear") return KernelKind::Linear;
    throw std::invalid_argument("unknown kernel: " + s);
}

struct SvmParams {
    KernelKind kernel = KernelKind::Rbf;
    double C = 1.0;
    double gamma = 0.0; // <= 0 means auto: 1 / (d * Var(X))
    double tol = 1e-3;  // KKT / stopping tolerance
    std::size_t max_iter = 10'000'000;
    bool compute_kkt = false; // per-pair KKT audit after convergence
};

inline double kernel_value(KernelKind kind, double gamma, const std::vector<double>& a,
                           const std::vector<double>& b)
{
    if (kind == KernelKind::Linear) {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
        return dot;
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d2 += diff * diff;
    }
    return std::exp(-gamma * d2);
}

/// gamma = 1 / (d * Var(X)) with Var taken over all feature entries.
inline double resolve_gamma(const std::vector<std::vector<double>>& X)
{
    if (X.empty() || X[0].empty()) return 1.0;
    const double d = static_cast<double>(X[0].size());
    double mean = 0.0, count = 0.0;
    for (const auto& row : X)
        for (double v : row) {
            mean += v;
            count += 1.0;
        }
    mean /= count;
    double var = 0.0;
    for (const auto& row : X)
        for (double v : row) var += (v - mean) * (v - mean);
    var /= count;
    return var > 0.0 ? 1.0 / (d * var) : 1.0 / d;
}

namespace detail {

/// LRU kernel row cache. SMO touches two rows per iteration and support
/// vectors recur, so a modest budget captures most reuse. Access refreshes
/// recency, which also guarantees the two rows of the current iteration are
/// never evicted from under their references (max_rows >= 2).
class KernelRowCache {
public:
    KernelRowCache(const std::vector<std::vector<double>>& X, KernelKind kind, double gamma,
                   std::size_t budget_bytes = 64u << 20)
        : X_(X), kind_(kind), gamma_(gamma)
    {
        const std::size_t row_bytes = X.size() * sizeof(double);
        max_rows_ = std::max<std::size_t>(2, row_bytes ? budget_bytes / row_bytes : 2);
    }

    const std::vector<double>& row(std::size_t i)
    {
        auto it = entries_.find(i);
        if (it != entries_.end()) {
            order_.splice(order_.end(), order_, it->second.use); // refresh recency
            return it->second.values;
        }
        if (entries_.size() >= max_rows_) {
            entries_.erase(order_.front());
            order_.pop_front();
        }
        std::vector<double> r(X_.size());
        for (std::size_t t = 0; t < X_.size(); ++t)
            r[t] = kernel_value(kind_, gamma_, X_[i], X_[t]);
        order_.push_back(i);
        auto use = std::prev(order_.end());
        return entries_.emplace(i, Entry{std::move(r), use}).first->second.values;
    }

private:
    struct Entry {
        std::vector<double> values;
        std::list<std::size_t>::iterator use;
    };

    const std::vector<std::vector<double>>& X_;
    KernelKind kind_;
    double gamma_;
    std::size_t max_rows_;
    std::unordered_map<std::size_t, Entry> entries_;
    std::list<std::size_t> order_;
};

} // namespace detail

/// Result of one binary SMO run.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double dual_objective = 0.0;
    std::vector<double> dual_trace; // filled when record_dual
};

/// Sequential minimal optimization with maximal-violating-pair working set
/// selection. y must be +1/-1. The dual objective is monitored every
/// iteration and must never decrease.
inline SmoResult smo_solve(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           const SvmParams& params, double gamma, bool record_dual = false)
{
    const std::size_t n = X.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("smo_solve: bad problem size");
    const double C = params.C;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> G(n, -1.0); // gradient of 1/2 a'Qa - e'a at a = 0
    detail::KernelRowCache cache(X, params.kernel, gamma);

    auto dual_value = [&] {
        double w = 0.0;
        for (std::size_t t = 0; t < n; ++t) w += alpha[t] * (1.0 - G[t]);
        return 0.5 * w;
    };

    SmoResult res;
    double dual_prev = 0.0;
    if (record_dual) res.dual_trace.push_back(dual_prev);

    double m_val = 0.0, M_val = 0.0;
    while (true) {
        // maximal violating pair
        m_val = -std::numeric_limits<double>::infinity();
        M_val = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * G[t];
            const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
            const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
            if (in_up && v > m_val) {
                m_val = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < M_val) {
                M_val = v;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i < 0 || j < 0 || m_val - M_val < params.tol) {
            res.converged = true;
            break;
        }
        if (res.iterations >= params.max_iter) break;

        const auto& Ki = cache.row(static_cast<std::size_t>(i));
        const auto& Kj = cache.row(static_cast<std::size_t>(j));
        const std::size_t ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);

        double quad = Ki[ui] + Kj[uj] - 2.0 * Ki[uj];
        if (quad <= 0.0) quad = 1e-12;

        const double old_ai = alpha[ui], old_aj = alpha[uj];
        if (y[ui] != y[uj]) {
            const double delta = (-G[ui] - G[uj]) / quad;
            const double diff = alpha[ui] - alpha[uj];
            alpha[ui] += delta;
            alpha[uj] += delta;
            if (diff > 0) {
                if (alpha[uj] < 0) {
                    alpha[uj] = 0;
                    alpha[ui] = diff;
                }
            } else {
                if (alpha[ui] < 0) {
                    alpha[ui] = 0;
                    alpha[uj] = -diff;
                }
            }
            if (diff > 0) {
                if (alpha[ui] > C) {
                    alpha[ui] = C;
                    alpha[uj] = C - diff;
                }
            } else {
                if (alpha[uj] > C) {
                    alpha[uj] = C;
                    alpha[ui] = C + diff;
                }
            }
        } else {
            const double delta = (G[ui] - G[uj]) / quad;
            const double sum = alpha[ui] + alpha[uj];
            alpha[ui] -= delta;
            alpha[uj] += delta;
            if (sum > C) {
                if (alpha[ui] > C) {
                    alpha[ui] = C;
                    alpha[uj] = sum - C;
                }
            } else {
                if (alpha[uj] < 0) {
                    alpha[uj] = 0;
                    alpha[ui] = sum;
                }
            }
            if (sum > C) {
                if (alpha[uj] > C) {
                    alpha[uj] = C;
                    alpha[ui] = sum - C;
                }
            } else {
                if (alpha[ui] < 0) {
                    alpha[ui] = 0;
                    alpha[uj] = sum;
                }
            }
        }

        const double dai = alpha[ui] - old_ai;
        const double daj = alpha[uj] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            G[t] += y[t] * (y[ui] * Ki[t] * dai + y[uj] * Kj[t] * daj);

        ++res.iterations;

        const double dual_now = dual_value();
        if (dual_now < dual_prev - 1e-9 * std::max(1.0, std::abs(dual_prev)))
            throw std::logic_error("smo_solve: dual objective decreased");
        if (record_dual) res.dual_trace.push_back(dual_now);
        dual_prev = dual_now;
    }

    // bias from the midpoint of the optimal-bias interval
    if (!std::isfinite(m_val) && !std::isfinite(M_val))
        res.bias = 0.0;
    else if (!std::isfinite(m_val))
        res.bias = M_val;
    else if (!std::isfinite(M_val))
        res.bias = m_val;
    else
        res.bias = (m_val + M_val) / 2.0;

    res.alpha = std::move(alpha);
    res.dual_objective = dual_prev;
    return res;
}

/// Largest KKT violation over all training points, decision values recomputed
/// from scratch.
inline double max_kkt_violation(const std::vector<std::vector<double>>& X,
                                const std::vector<int>& y, const std::vector<double>& alpha,
                                double bias, const SvmParams& params, double gamma)
{
    const std::size_t n = X.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = bias;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] > 0.0)
                f += alpha[j] * y[j] * kernel_value(params.kernel, gamma, X[j], X[i]);
        const double margin = y[i] * f;
        double v = 0.0;
        if (alpha[i] <= 1e-12)
            v = std::max(0.0, 1.0 - margin);
        else if (alpha[i] >= params.C - 1e-12)
            v = std::max(0.0, margin - 1.0);
        else
            v = std::abs(margin - 1.0);
        worst = std::max(worst, v);
    }
    return worst;
}

/// One one-vs-one machine: f(x) = sum coef_i K(sv_i, x) + bias,
/// f > 0 votes pos_class.
struct BinarySvm {
    int pos_class = 0;
    int neg_class = 0;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coef; // alpha_i * y_i, non-zero by construction
    double bias = 0.0;

    std::size_t iterations = 0;
    bool converged = false;
    double dual_objective = 0.0;
    double max_kkt = -1.0; // filled when compute_kkt
};

struct SvmModel {
    SvmParams params;        // gamma resolved at training time
    std::vector<int> classes; // ascending class ids
    std::size_t dim = 0;
    std::vector<BinarySvm> machines;
};

inline SvmModel svm_train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                          SvmParams params = {})
{
    if (X.empty() || y.size() != X.size())
        throw std::invalid_argument("svm_train: empty problem or size mismatch");
    const std::size_t dim = X[0].size();
    for (const auto& row : X) {
        if (row.size() != dim) throw std::invalid_argument("svm_train: inconsistent dimensions");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("svm_train: non-finite feature value");
    }

    std::vector<int> classes(y);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() < 2) throw std::invalid_argument("svm_train: need at least 2 classes");

    if (params.kernel == KernelKind::Rbf && params.gamma <= 0.0) params.gamma = resolve_gamma(X);

    SvmModel model;
    model.params = params;
    model.classes = classes;
    model.dim = dim;

    for (std::size_t a = 0; a < classes.size(); ++a) {
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            std::vector<std::vector<double>> Xp;
            std::vector<int> yp;
            for (std::size_t t = 0; t < X.size(); ++t) {
                if (y[t] == classes[a]) {
                    Xp.push_back(X[t]);
                    yp.push_back(+1);
                } else if (y[t] == classes[b]) {
                    Xp.push_back(X[t]);
                    yp.push_back(-1);
                }
            }
            const SmoResult res = smo_solve(Xp, yp, params, params.gamma);

            BinarySvm machine;
            machine.pos_class = classes[a];
            machine.neg_class = classes[b];
            machine.bias = res.bias;
            machine.iterations = res.iterations;
            machine.converged = res.converged;
            machine.dual_objective = res.dual_objective;
            if (params.compute_kkt)
                machine.max_kkt =
                    max_kkt_violation(Xp, yp, res.alpha, res.bias, params, params.gamma);
            for (std::size_t t = 0; t < Xp.size(); ++t) {
                if (res.alpha[t] > 0.0) {
                    machine.support_vectors.push_back(Xp[t]);
                    machine.dual_coef.push_back(res.alpha[t] * yp[t]);
                }
            }
            if (!res.converged)
                log_warn("svm pair (" + std::to_string(classes[a]) + "," +
                         std::to_string(classes[b]) + ") hit iteration cap before tolerance");
            model.machines.push_back(std::move(machine));
        }
    }
    return model;
}

inline double svm_decision(const SvmModel& model, const BinarySvm& machine,
                           const std::vector<double>& v)
{
    double f = machine.bias;
    for (std::size_t i = 0; i < machine.support_vectors.size(); ++i)
        f += machine.dual_coef[i] *
             kernel_value(model.params.kernel, model.params.gamma, machine.support_vectors[i], v);
    return f;
}

struct SvmVote {
    int label = 0;
    std::vector<int> votes; // aligned with model.classes
};

/// One-vs-one voting; ties go to the lowest class index.
inline SvmVote svm_predict(const SvmModel& model, const std::vector<double>& v)
{
    if (v.size() != model.dim) throw std::invalid_argument("svm_predict: dimension mismatch");
    SvmVote out;
    out.votes.assign(model.classes.size(), 0);
    for (const auto& machine : model.machines) {
        const double f = svm_decision(model, machine, v);
        const int winner = f > 0.0 ? machine.pos_class : machine.neg_class;
        const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), winner);
        ++out.votes[static_cast<std::size_t>(it - model.classes.begin())];
    }
    const auto best = std::max_element(out.votes.begin(), out.votes.end());
    out.label = model.classes[static_cast<std::size_t>(best - out.votes.begin())];
    return out;
}

} // namespace screamkit

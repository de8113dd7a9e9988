#include "bugnet/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "bugnet/error.hpp"
#include "bugnet/kernels.hpp"
#include "bugnet/rng.hpp"

namespace bugnet {

using nlohmann::json;

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "in_lcc",   "evcent",   "betweenness", "closeness", "clustering",
    "coreness", "deg_in",   "deg_out",     "deg_total"};

FeatureArray to_feature_array(const NodeMetrics& m) {
    return {m.in_lcc ? 1.0 : 0.0,
            m.eigenvector,
            m.betweenness,
            m.closeness,
            m.clustering,
            static_cast<double>(m.coreness),
            static_cast<double>(m.degree_in),
            static_cast<double>(m.degree_out),
            static_cast<double>(m.degree_total)};
}

std::pair<Dataset, Dataset> split_train_eval(const Dataset& data, double fraction,
                                             std::uint64_t seed) {
    const std::size_t n = data.rows.size();
    if (n == 0) throw Error(Errc::EmptyDataset, "cannot split an empty dataset");
    // ceil(fraction * n); the epsilon keeps exact decimal products (e.g.
    // 0.05 * 100) from ceiling one row too high.
    std::size_t k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    k = std::min(n, std::max<std::size_t>(1, k));

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);
    std::vector<char> in_train(n, 0);
    for (std::size_t i = 0; i < k; ++i) in_train[idx[i]] = 1;

    Dataset train, eval;
    train.community = eval.community = data.community;
    for (std::size_t i = 0; i < n; ++i) {
        (in_train[i] ? train : eval).rows.push_back(data.rows[i]);
    }
    return {std::move(train), std::move(eval)};
}

Label lcc_classify(const NodeMetrics& m) {
    return m.in_lcc ? Label::Valid : Label::Faulty;
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1) return values[0];
    const double h = (static_cast<double>(n) - 1.0) * q / 100.0;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

double f_score_on(const Dataset& data, const ThresholdModel& model) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& row : data.rows) {
        const bool predicted_valid = evcent_classify(row.metrics, model) == Label::Valid;
        const bool is_valid = row.label == Label::Valid;
        if (predicted_valid && is_valid) ++tp;
        else if (predicted_valid) ++fp;
        else if (is_valid) ++fn;
    }
    const double p = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

ThresholdModel tune_threshold(const Dataset& train, std::span<const double> grid) {
    std::vector<double> scores;
    for (const auto& row : train.rows) {
        if (row.metrics.in_lcc) scores.push_back(row.metrics.eigenvector);
    }
    if (scores.empty()) {
        throw Error(Errc::NoLccMembers, "no training row lies in the LCC");
    }
    std::vector<double> ordered(grid.begin(), grid.end());
    std::sort(ordered.begin(), ordered.end());
    ThresholdModel best;
    double best_f = -1.0;
    for (double q : ordered) {
        ThresholdModel candidate{q, percentile(scores, q)};
        const double f = f_score_on(train, candidate);
        if (f > best_f) {  // strict: ties keep the smaller percentile
            best_f = f;
            best = candidate;
        }
    }
    return best;
}

Label evcent_classify(const NodeMetrics& m, const ThresholdModel& model) {
    return m.in_lcc && m.eigenvector >= model.threshold ? Label::Valid : Label::Faulty;
}

StandardizationStats compute_standardization(std::span<const DataRow> rows) {
    StandardizationStats stats;
    const double n = static_cast<double>(rows.size());
    if (rows.empty()) return stats;
    FeatureArray lo = to_feature_array(rows.front().metrics);
    FeatureArray hi = lo;
    for (const auto& row : rows) {
        const FeatureArray x = to_feature_array(row.metrics);
        for (int f = 0; f < kFeatureCount; ++f) {
            stats.mean[f] += x[f];
            lo[f] = std::min(lo[f], x[f]);
            hi[f] = std::max(hi[f], x[f]);
        }
    }
    for (int f = 0; f < kFeatureCount; ++f) stats.mean[f] /= n;
    for (const auto& row : rows) {
        const FeatureArray x = to_feature_array(row.metrics);
        for (int f = 0; f < kFeatureCount; ++f) {
            const double d = x[f] - stats.mean[f];
            stats.stddev[f] += d * d;
        }
    }
    for (int f = 0; f < kFeatureCount; ++f) {
        // constant features get an exact zero, not accumulated rounding dust
        stats.stddev[f] = lo[f] == hi[f] ? 0.0 : std::sqrt(stats.stddev[f] / n);
    }
    return stats;
}

FeatureArray StandardizationStats::apply(const FeatureArray& x) const {
    FeatureArray out{};
    for (int f = 0; f < kFeatureCount; ++f) {
        out[f] = stddev[f] > 0.0 ? (x[f] - mean[f]) / stddev[f] : 0.0;
    }
    return out;
}

namespace {

/// Kernel value between two standardized feature vectors.
double kernel_value(const SvmParams& params, const FeatureArray& a, const FeatureArray& b) {
    if (params.kernel == SvmKernel::Linear) {
        return kernels::active().dot(a.data(), b.data(), kFeatureCount);
    }
    double d2 = 0.0;
    for (int f = 0; f < kFeatureCount; ++f) {
        const double d = a[f] - b[f];
        d2 += d * d;
    }
    return std::exp(-params.gamma * d2);
}

}  // namespace

SvmModel train_svm(const Dataset& train, Label target, const SvmParams& params,
                   std::uint64_t seed) {
    const std::size_t n = train.rows.size();
    std::vector<double> y(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = train.rows[i].label == target ? 1.0 : -1.0;
        (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw Error(Errc::SingleClassTraining, "training set contains a single class");
    }

    SvmModel model;
    model.params = params;
    model.target = target;
    model.seed = seed;
    model.stats = compute_standardization(train.rows);

    std::vector<FeatureArray> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = model.stats.apply(to_feature_array(train.rows[i].metrics));
    }

    // Full kernel matrix for moderate n; rows recomputed on demand above
    // that. Either path yields identical values.
    const bool cache = n <= 2048;
    std::vector<double> kmat;
    if (cache) {
        kmat.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double v = kernel_value(params, x[i], x[j]);
                kmat[i * n + j] = v;
                kmat[j * n + i] = v;
            }
        }
    }
    auto kval = [&](std::size_t i, std::size_t j) {
        return cache ? kmat[i * n + j] : kernel_value(params, x[i], x[j]);
    };

    std::vector<double> alpha(n, 0.0);
    double b = 0.0;
    auto decision = [&](std::size_t i) {
        double f = b;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] != 0.0) f += alpha[j] * y[j] * kval(j, i);
        }
        return f;
    };

    Rng rng(seed);
    const double c = params.c;

    // One pairwise step; returns false when the (i, j) direction is
    // degenerate (clipped box empty, eta >= 0, or negligible movement).
    auto try_update = [&](std::size_t i, std::size_t j, double ei) {
        const double ej = decision(j) - y[j];
        const double ai_old = alpha[i], aj_old = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(c, c + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - c);
            hi = std::min(c, ai_old + aj_old);
        }
        if (lo >= hi) return false;
        const double eta = 2.0 * kval(i, j) - kval(i, i) - kval(j, j);
        if (eta >= 0.0) return false;

        double aj = aj_old - y[j] * (ei - ej) / eta;
        aj = std::clamp(aj, lo, hi);
        if (std::fabs(aj - aj_old) < 1e-12) return false;
        const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
        alpha[i] = ai;
        alpha[j] = aj;

        const double b1 = b - ei - y[i] * (ai - ai_old) * kval(i, i) -
                          y[j] * (aj - aj_old) * kval(i, j);
        const double b2 = b - ej - y[i] * (ai - ai_old) * kval(i, j) -
                          y[j] * (aj - aj_old) * kval(j, j);
        if (ai > 0.0 && ai < c) b = b1;
        else if (aj > 0.0 && aj < c) b = b2;
        else b = (b1 + b2) / 2.0;
        return true;
    };

    bool converged = false;
    for (int pass = 0; pass < params.max_passes; ++pass) {
        int changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = decision(i) - y[i];
            if (!((y[i] * ei < -params.tol && alpha[i] < c) ||
                  (y[i] * ei > params.tol && alpha[i] > 0))) {
                continue;
            }
            // Partner search from a random offset. Exhausting every j without
            // progress means this violation is not fixable by a pair
            // involving i, so a zero-change pass certifies KKT within tol.
            const std::size_t start = rng.index(n);
            for (std::size_t off = 0; off < n; ++off) {
                const std::size_t j = (start + off) % n;
                if (j == i) continue;
                if (try_update(i, j, ei)) {
                    ++changed;
                    break;
                }
            }
        }
        if (changed == 0) {
            converged = true;
            break;
        }
    }

    model.converged = converged;
    model.bias = b;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.coeff.push_back(alpha[i] * y[i]);
            for (int f = 0; f < kFeatureCount; ++f) model.support[f].push_back(x[i][f]);
        }
    }
    return model;
}

std::pair<Label, double> svm_classify(const NodeMetrics& m, const SvmModel& model) {
    const FeatureArray x = model.stats.apply(to_feature_array(m));
    const std::size_t nsv = model.support_count();
    double margin = model.bias;
    if (nsv > 0) {
        if (model.params.kernel == SvmKernel::Rbf) {
            // Squared distances to every support vector, accumulated
            // feature-major so the inner loop runs across support vectors.
            std::vector<double> d2(nsv, 0.0);
            const auto& ops = kernels::active();
            for (int f = 0; f < kFeatureCount; ++f) {
                ops.sqdist_accumulate(d2.data(), model.support[f].data(), x[f], nsv);
            }
            for (std::size_t i = 0; i < nsv; ++i) {
                margin += model.coeff[i] * std::exp(-model.params.gamma * d2[i]);
            }
        } else {
            std::vector<double> dots(nsv, 0.0);
            for (int f = 0; f < kFeatureCount; ++f) {
                for (std::size_t i = 0; i < nsv; ++i) {
                    dots[i] += model.support[f][i] * x[f];
                }
            }
            margin += kernels::active().dot(model.coeff.data(), dots.data(), nsv);
        }
    }
    const Label other = model.target == Label::Valid ? Label::Faulty : Label::Valid;
    return {margin > 0.0 ? model.target : other, margin};
}

Label select_target_class(const Dataset& data, TargetMode mode) {
    switch (mode) {
        case TargetMode::Valid: return Label::Valid;
        case TargetMode::Faulty: return Label::Faulty;
        case TargetMode::Auto: break;
    }
    std::size_t valid = 0, faulty = 0;
    for (const auto& row : data.rows) {
        if (row.label == Label::Valid) ++valid;
        else if (row.label == Label::Faulty) ++faulty;
    }
    return faulty < valid ? Label::Faulty : Label::Valid;  // tie -> Valid
}

std::string save_model_json(const SvmModel& svm, const ThresholdModel& threshold, int window_days,
                            double train_fraction) {
    json j;
    j["format_version"] = 1;
    j["kind"] = "bugnet-model";
    j["window_days"] = window_days;
    j["train_fraction"] = train_fraction;
    j["threshold"] = {{"percentile", threshold.percentile}, {"value", threshold.threshold}};
    json s;
    s["kernel"] = svm.params.kernel == SvmKernel::Rbf ? "rbf" : "linear";
    s["c"] = svm.params.c;
    s["gamma"] = svm.params.gamma;
    s["tol"] = svm.params.tol;
    s["max_passes"] = svm.params.max_passes;
    s["target"] = label_name(svm.target);
    s["seed"] = svm.seed;
    s["converged"] = svm.converged;
    s["bias"] = svm.bias;
    s["coeff"] = svm.coeff;
    s["standardization"] = {{"mean", svm.stats.mean}, {"stddev", svm.stats.stddev}};
    json sv = json::array();
    for (int f = 0; f < kFeatureCount; ++f) sv.push_back(svm.support[f]);
    s["support"] = std::move(sv);
    j["svm"] = std::move(s);
    return j.dump(2) + "\n";
}

ModelFile load_model_json(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "bugnet-model") {
        throw Error(Errc::InvalidConfig, "not a bugnet model file");
    }
    if (j.value("format_version", 0) != 1) {
        throw Error(Errc::InvalidConfig, "unsupported model format version");
    }
    ModelFile out;
    out.window_days = j.at("window_days").get<int>();
    out.train_fraction = j.at("train_fraction").get<double>();
    out.threshold.percentile = j.at("threshold").at("percentile").get<double>();
    out.threshold.threshold = j.at("threshold").at("value").get<double>();
    const json& s = j.at("svm");
    out.svm.params.kernel = s.at("kernel").get<std::string>() == "rbf" ? SvmKernel::Rbf
                                                                       : SvmKernel::Linear;
    out.svm.params.c = s.at("c").get<double>();
    out.svm.params.gamma = s.at("gamma").get<double>();
    out.svm.params.tol = s.at("tol").get<double>();
    out.svm.params.max_passes = s.at("max_passes").get<int>();
    out.svm.target = s.at("target").get<std::string>() == "Valid" ? Label::Valid : Label::Faulty;
    out.svm.seed = s.at("seed").get<std::uint64_t>();
    out.svm.converged = s.at("converged").get<bool>();
    out.svm.bias = s.at("bias").get<double>();
    out.svm.coeff = s.at("coeff").get<std::vector<double>>();
    const json& mean = s.at("standardization").at("mean");
    const json& stddev = s.at("standardization").at("stddev");
    for (int f = 0; f < kFeatureCount; ++f) {
        out.svm.stats.mean[f] = mean.at(f).get<double>();
        out.svm.stats.stddev[f] = stddev.at(f).get<double>();
        out.svm.support[f] = s.at("support").at(f).get<std::vector<double>>();
    }
    for (int f = 0; f < kFeatureCount; ++f) {
        if (out.svm.support[f].size() != out.svm.coeff.size()) {
            throw Error(Errc::InvalidConfig, "inconsistent support vector arrays");
        }
    }
    return out;
}

}  // namespace bugnet

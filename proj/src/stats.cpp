#include "slovasc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "slovasc/errors.hpp"

namespace slovasc {

namespace {

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_pairs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "paired series differ in length");
    if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two pairs");
}

}  // namespace

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    require_pairs(a, b);
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
    require_pairs(a, b);
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

std::optional<double> icc_3_1(std::span<const double> a, std::span<const double> b) {
    require_pairs(a, b);
    const std::size_t n = a.size();
    constexpr double k = 2.0;
    const double grand = (mean(a) + mean(b)) / 2.0;
    double ss_rows = 0.0, ss_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double row = (a[i] + b[i]) / 2.0;
        ss_rows += k * (row - grand) * (row - grand);
        ss_total += (a[i] - grand) * (a[i] - grand) + (b[i] - grand) * (b[i] - grand);
    }
    const double ma = mean(a) - grand, mb = mean(b) - grand;
    const double ss_cols = static_cast<double>(n) * (ma * ma + mb * mb);
    const double ss_err = std::max(0.0, ss_total - ss_rows - ss_cols);
    const double ms_rows = ss_rows / static_cast<double>(n - 1);
    const double ms_err = ss_err / ((static_cast<double>(n) - 1.0) * (k - 1.0));
    const double denom = ms_rows + (k - 1.0) * ms_err;
    if (denom <= 0.0) return std::nullopt;
    return (ms_rows - ms_err) / denom;
}

AgreementReport agreement(const PairedSeries& p) {
    require_pairs(p.a, p.b);
    AgreementReport r;
    r.n = p.a.size();
    std::vector<double> diff(r.n);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) {
        diff[i] = p.a[i] - p.b[i];
        abs_sum += std::abs(diff[i]);
    }
    r.mae = abs_sum / static_cast<double>(r.n);
    const double md = mean(diff);
    const double sd = sample_sd(diff);
    r.bland_altman = {md, md - 1.96 * sd, md + 1.96 * sd};
    r.pearson = pearson(p.a, p.b);
    r.spearman = spearman(p.a, p.b);
    // ICC is reported alongside the correlations, so it shares their zero-variance guard.
    if (r.pearson) r.icc_3_1 = icc_3_1(p.a, p.b);

    if (!p.eye_ids.empty() && p.eye_ids.size() == r.n) {
        // One entry per distinct eye, in order of first appearance.
        std::map<std::string, std::size_t> slot;
        std::vector<std::vector<double>> values;
        for (std::size_t i = 0; i < r.n; ++i) {
            auto [it, fresh] = slot.try_emplace(p.eye_ids[i], values.size());
            if (fresh) values.emplace_back();
            values[it->second].push_back(p.a[i]);
            values[it->second].push_back(p.b[i]);
        }
        try {
            r.lambda_per_eye = lambda_noise(values);
        } catch (const Error&) {
            r.lambda_per_eye.clear();
        }
    }
    return r;
}

std::vector<double> lambda_noise(const std::vector<std::vector<double>>& values) {
    if (values.size() < 2) throw Error(ErrorCode::DegeneratePopulation, "need at least two eyes");
    std::vector<double> means;
    for (const auto& eye : values) {
        if (eye.size() < 2) throw Error(ErrorCode::InvalidArgument, "each eye needs at least two repeats");
        means.push_back(mean(eye));
    }
    const double between = sample_sd(means);
    if (!(between > 0.0)) throw Error(ErrorCode::DegeneratePopulation, "between-eye sd is zero");
    std::vector<double> out;
    for (const auto& eye : values) out.push_back(100.0 * sample_sd(eye) / between);
    return out;
}

double dice(const BinaryMask& a, const BinaryMask& b) {
    if (a.dims() != b.dims()) throw Error(ErrorCode::DimensionMismatch, "dice: mask sizes differ");
    const std::size_t na = a.count(), nb = b.count();
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(mask_and(a, b).count()) / static_cast<double>(na + nb);
}

double auc(const RealGrid& prob, const BinaryMask& truth) {
    if (prob.dims() != truth.dims()) throw Error(ErrorCode::DimensionMismatch, "auc: raster sizes differ");
    const auto ranks = average_ranks(prob.pixels());
    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (truth.pixels()[i]) {
            pos_rank_sum += ranks[i];
            ++n_pos;
        }
    }
    const std::size_t n_neg = ranks.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::SingleClass, "auc needs both classes");
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace slovasc

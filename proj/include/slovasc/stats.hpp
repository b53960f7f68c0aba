#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slovasc/grid.hpp"

namespace slovasc {

struct PairedSeries {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::string> eye_ids;  ///< optional; one id per pair
};

struct BlandAltman {
    double mean_diff = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
};

struct AgreementReport {
    std::size_t n = 0;
    double mae = 0.0;
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::optional<double> icc_3_1;
    BlandAltman bland_altman;  ///< differences are a - b
    std::vector<double> lambda_per_eye;  ///< percent; empty when not computable
};

/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> v);

/// Average ranks starting at 1; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

/// nullopt when either series has zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// Two-way mixed, consistency, single measurement. nullopt when the ANOVA
/// denominator vanishes.
std::optional<double> icc_3_1(std::span<const double> a, std::span<const double> b);

/// Throws InvalidArgument for mismatched lengths or n < 2. Correlations are
/// left empty on zero variance. When eye ids are present, lambda is computed
/// treating each pair as two repeats of that eye, one value per distinct id in
/// order of first appearance.
AgreementReport agreement(const PairedSeries& p);

/// values[e] holds the repeated measurements of eye e. Returns
/// 100 * sd(within eye e) / sd(per-eye means) for each eye.
/// Throws DegeneratePopulation (fewer than two eyes or zero between-eye sd)
/// and InvalidArgument (an eye with fewer than two repeats).
std::vector<double> lambda_noise(const std::vector<std::vector<double>>& values);

/// 2|a ∩ b| / (|a| + |b|); 1 when both are empty. Throws DimensionMismatch.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Mann-Whitney AUC with midranks. Throws SingleClass or DimensionMismatch.
double auc(const RealGrid& prob, const BinaryMask& truth);

}  // namespace slovasc

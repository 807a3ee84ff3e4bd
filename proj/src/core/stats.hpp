#ifndef CSMAHS_CORE_STATS_HPP
#define CSMAHS_CORE_STATS_HPP

#include <cstdint>
#include <vector>

namespace csmahs {

// 0.5 * sum |a_k - b_k|; vectors padded with zeros to equal length.
double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0; // at the requested significance
    double p_value = 1.0;
    int bins = 0;
    int64_t samples = 0;
    bool pass = false;
};

// Pearson goodness of fit of hist (index k = count of value k, k >= 1)
// against the geometric law with parameter p_of.  Tail bins are merged until
// every expected count is at least 5; one degree of freedom is charged for
// the estimated parameter.  Histograms larger than the cap are thinned
// proportionally first: the test is meant to resolve shape disagreement at
// the few-percent scale, which caps the useful sample size.
inline constexpr int64_t kChiSquareSampleCap = 2500;

ChiSquareResult chi_square_geometric(const std::vector<int64_t>& hist,
                                     double p_of, double significance);

// Geometric MLE from a histogram of run lengths: 1 / mean.
double geometric_mle(const std::vector<int64_t>& hist);

} // namespace csmahs

#endif

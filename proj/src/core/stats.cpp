#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "error.hpp"

namespace csmahs {

double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b) {
    double acc = 0.0;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        double x = i < a.size() ? a[i] : 0.0;
        double y = i < b.size() ? b[i] : 0.0;
        acc += std::abs(x - y);
    }
    return 0.5 * acc;
}

ChiSquareResult chi_square_geometric(const std::vector<int64_t>& hist,
                                     double p_of, double significance) {
    if (!(p_of > 0.0 && p_of < 1.0)) {
        fail(ErrorKind::invalid_argument, "p_of out of (0, 1)");
    }
    if (!(significance > 0.0 && significance < 1.0)) {
        fail(ErrorKind::invalid_argument, "significance out of (0, 1)");
    }
    ChiSquareResult res;
    int64_t raw = 0;
    for (size_t k = 1; k < hist.size(); ++k) raw += hist[k];
    if (raw < 25) {
        // too few samples for a meaningful test; report a vacuous pass
        res.samples = raw;
        res.pass = true;
        return res;
    }
    // bound the sample so the test resolves shape at the few-percent scale;
    // with unbounded n any approximate law is rejected eventually
    std::vector<int64_t> thinned;
    const std::vector<int64_t>* data = &hist;
    int64_t n = raw;
    if (raw > kChiSquareSampleCap) {
        thinned.assign(hist.size(), 0);
        double scale = static_cast<double>(kChiSquareSampleCap) / raw;
        n = 0;
        for (size_t k = 1; k < hist.size(); ++k) {
            thinned[k] = std::llround(hist[k] * scale);
            n += thinned[k];
        }
        data = &thinned;
    }
    res.samples = n;

    // expected counts; extend k until tail expectation drops under 5,
    // then merge the tail into the last bin
    std::vector<double> expected;
    std::vector<int64_t> observed;
    double tail = static_cast<double>(n); // n * Pr{X >= k}
    size_t k = 1;
    while (true) {
        double pk = std::pow(1.0 - p_of, k - 1) * p_of;
        double e = n * pk;
        if (tail - e < 5.0 || e < 5.0) break;
        expected.push_back(e);
        observed.push_back(k < data->size() ? (*data)[k] : 0);
        tail -= e;
        ++k;
    }
    int64_t tail_obs = 0;
    for (size_t j = k; j < data->size(); ++j) tail_obs += (*data)[j];
    expected.push_back(tail);
    observed.push_back(tail_obs);

    res.bins = static_cast<int>(expected.size());
    if (res.bins < 3) {
        res.pass = true; // not enough resolution to test anything
        return res;
    }
    double stat = 0.0;
    for (size_t i = 0; i < expected.size(); ++i) {
        double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    res.statistic = stat;
    res.dof = res.bins - 2; // one parameter estimated from the data
    boost::math::chi_squared dist(res.dof);
    res.critical = boost::math::quantile(dist, 1.0 - significance);
    res.p_value = boost::math::cdf(boost::math::complement(dist, stat));
    res.pass = stat <= res.critical;
    return res;
}

double geometric_mle(const std::vector<int64_t>& hist) {
    int64_t n = 0;
    double total = 0.0;
    for (size_t k = 1; k < hist.size(); ++k) {
        n += hist[k];
        total += static_cast<double>(k) * hist[k];
    }
    if (n == 0 || total <= 0.0) return 0.0;
    return static_cast<double>(n) / total;
}

} // namespace csmahs

#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"
#include "series.hpp"

namespace qgd {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (static_cast<double>(v.size()) - 1.0);
}

double cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    if (na < 2 || nb < 2) return nan_value();
    const double va = sample_variance(a), vb = sample_variance(b);
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    if (pooled <= 0.0) return nan_value();
    return (mean_of(a) - mean_of(b)) / std::sqrt(pooled);
}

double cliffs_delta(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw Error(Errc::invalid_argument, "cliffs_delta: empty sample");
    long gt = 0, lt = 0;
    for (double x : a)
        for (double y : b) {
            if (x > y) ++gt;
            else if (x < y) ++lt;
        }
    return static_cast<double>(gt - lt) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

int bootstrap_block_length(int n) {
    return static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-9));
}

namespace {

std::vector<double> block_resample(const std::vector<double>& v, SplitMix64& rng) {
    const int n = static_cast<int>(v.size());
    const int block = bootstrap_block_length(n);
    std::vector<double> out;
    out.reserve(n);
    while (static_cast<int>(out.size()) < n) {
        const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        for (int i = 0; i < block && static_cast<int>(out.size()) < n; ++i)
            out.push_back(v[(start + i) % n]);
    }
    return out;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

BootstrapCi block_bootstrap_ci(const std::vector<double>& crisis, const std::vector<double>& normal,
                               int n_resamples, std::uint64_t seed) {
    if (crisis.size() < 4 || normal.size() < 4)
        throw Error(Errc::invalid_argument, "block_bootstrap_ci: samples must have >= 4 points");
    SplitMix64 rng(seed);
    std::vector<double> ds;
    ds.reserve(n_resamples);
    int undefined = 0;
    for (int b = 0; b < n_resamples; ++b) {
        const std::vector<double> c = block_resample(crisis, rng);
        const std::vector<double> n = block_resample(normal, rng);
        const double d = cohens_d(c, n);
        if (is_defined(d))
            ds.push_back(d);
        else
            ++undefined;
    }
    if (ds.empty()) throw Error(Errc::numerical, "block_bootstrap_ci: all resamples undefined");
    std::sort(ds.begin(), ds.end());
    BootstrapCi ci;
    ci.lo = percentile_sorted(ds, 0.025);
    ci.hi = percentile_sorted(ds, 0.975);
    ci.flagged = undefined > n_resamples / 100;
    return ci;
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    if (na < 2 || nb < 2) throw Error(Errc::invalid_argument, "welch_t: samples must have >= 2 points");
    const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;
    WelchResult r;
    if (va + vb <= 0.0) {
        r.t = 0.0;
        r.dof = na + nb - 2.0;
        r.p = 1.0;
        return r;
    }
    r.t = (mean_of(a) - mean_of(b)) / std::sqrt(va + vb);
    r.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p = student_t_sf_two_sided(r.t, r.dof);
    return r;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    const size_t m = p_values.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return p_values[i] < p_values[j]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (size_t rank = 0; rank < m; ++rank) {
        const double scaled = std::min(1.0, static_cast<double>(m - rank) * p_values[order[rank]]);
        running = std::max(running, scaled);
        adjusted[order[rank]] = running;
    }
    return adjusted;
}

double permutation_test(const std::vector<double>& crisis, const std::vector<double>& normal,
                        int n_perm, std::uint64_t seed) {
    if (crisis.size() + normal.size() < 10)
        throw Error(Errc::invalid_argument, "permutation_test: combined sample too small");
    std::vector<double> pool = crisis;
    pool.insert(pool.end(), normal.begin(), normal.end());
    const size_t nc = crisis.size();
    const double observed = std::abs(mean_of(crisis) - mean_of(normal));

    SplitMix64 rng(seed);
    int hits = 0;
    std::vector<double> work = pool;
    for (int it = 0; it < n_perm; ++it) {
        // Fisher-Yates over the pooled sample
        for (size_t i = work.size() - 1; i > 0; --i) {
            const size_t j = static_cast<size_t>(rng.below(i + 1));
            std::swap(work[i], work[j]);
        }
        double sc = 0.0, sn = 0.0;
        for (size_t i = 0; i < work.size(); ++i) {
            if (i < nc)
                sc += work[i];
            else
                sn += work[i];
        }
        const double diff =
            std::abs(sc / static_cast<double>(nc) - sn / static_cast<double>(work.size() - nc));
        if (diff >= observed) ++hits;
    }
    return (1.0 + hits) / (static_cast<double>(n_perm) + 1.0);
}

namespace {

// midranks of one crisis row, rank 1 = largest value
std::vector<double> midranks_desc(const std::vector<double>& row) {
    const size_t k = row.size();
    std::vector<size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return row[i] > row[j]; });
    std::vector<double> ranks(k);
    size_t i = 0;
    while (i < k) {
        size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t q = i; q <= j; ++q) ranks[order[q]] = mid;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

FriedmanResult friedman_nemenyi(const RMatrix& scores, double alpha) {
    const int n = scores.rows();  // crises
    const int k = scores.cols();  // methods
    if (n < 2 || k < 2) throw Error(Errc::invalid_argument, "friedman_nemenyi: need >= 2 methods and crises");

    FriedmanResult out;
    out.mean_ranks.assign(k, 0.0);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(k);
        for (int j = 0; j < k; ++j) row[j] = scores(i, j);
        const std::vector<double> ranks = midranks_desc(row);
        for (int j = 0; j < k; ++j) out.mean_ranks[j] += ranks[j];
    }
    for (auto& r : out.mean_ranks) r /= n;

    const double center = (k + 1.0) / 2.0;
    double ssq = 0.0;
    for (double r : out.mean_ranks) ssq += (r - center) * (r - center);
    out.chi2 = 12.0 * n / (static_cast<double>(k) * (k + 1.0)) * ssq;
    out.p = regularized_gamma_q((k - 1.0) / 2.0, out.chi2 / 2.0);
    out.cd = studentized_range_q(alpha, k) * std::sqrt(static_cast<double>(k) * (k + 1.0) / (6.0 * n));
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error(Errc::invalid_argument, "regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double regularized_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_sf_two_sided(double t, double dof) {
    return regularized_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

namespace {

// P(range of k standard normals <= q), infinite dof
double studentized_range_cdf(double q, int k) {
    if (q <= 0.0) return 0.0;
    // k * integral phi(z) [Phi(z) - Phi(z - q)]^(k-1) dz, Simpson on [-9, 9+q]
    const double lo = -9.0, hi = 9.0 + q;
    const int steps = 3000;  // even
    const double h = (hi - lo) / steps;
    auto f = [&](double z) {
        const double diff = normal_cdf(z) - normal_cdf(z - q);
        if (diff <= 0.0) return 0.0;
        const double phi = std::exp(-0.5 * z * z) * 0.39894228040143267794;
        return phi * std::pow(diff, k - 1);
    };
    double s = f(lo) + f(hi);
    for (int i = 1; i < steps; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return std::min(1.0, k * s * h / 3.0);
}

}  // namespace

double studentized_range_q(double alpha, int k) {
    if (k < 2) throw Error(Errc::invalid_argument, "studentized_range_q: k must be >= 2");
    const double target = 1.0 - alpha;
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (studentized_range_cdf(mid, k) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) * 0.70710678118654752440;
}

}  // namespace qgd

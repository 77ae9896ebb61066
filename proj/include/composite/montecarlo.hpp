#pragma once

// Desk-scale Monte Carlo of the explicit constructions: uncoded
// transmission, random-codebook quantization, two-stage MSVQ and the
// superposition broadcast code. Codebooks are bit-packed; every trial draws
// from its own counter-keyed generator, so results are independent of the
// thread count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "composite/channels.hpp"
#include "composite/errors.hpp"
#include "composite/parallel.hpp"
#include "composite/rng.hpp"
#include "composite/specfn.hpp"

namespace composite {

/// Largest codebook a simulation may allocate, as log2(entries).
inline constexpr double kCodebookLog2Cap = 24.0;

struct TrialConfig {
    std::size_t blocklength = 1000;
    std::size_t trials = 200;
    std::uint64_t seed = 1;

    void validate() const {
        if (blocklength < 1) detail::domain_fail("TrialConfig", "blocklength must be >= 1");
        if (trials < 1) detail::domain_fail("TrialConfig", "trials must be >= 1");
    }
};

struct TrialReport {
    double mean = 0.0;
    double half_width_95 = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

namespace detail {

inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) return std::accumulate(v.begin(), v.end(), 0.0);
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

/// Mean and 95% normal half-width 1.96 s / sqrt(T) of per-trial outcomes.
inline TrialReport summarize(std::span<const double> per_trial, std::uint64_t seed) {
    TrialReport rep;
    rep.trials = per_trial.size();
    rep.seed = seed;
    if (per_trial.empty()) return rep;
    const double n = static_cast<double>(per_trial.size());
    rep.mean = detail::pairwise_sum(per_trial) / n;
    if (per_trial.size() > 1) {
        std::vector<double> sq(per_trial.size());
        for (std::size_t i = 0; i < per_trial.size(); ++i) {
            const double d = per_trial[i] - rep.mean;
            sq[i] = d * d;
        }
        const double var = detail::pairwise_sum(sq) / (n - 1.0);
        rep.half_width_95 = 1.96 * std::sqrt(var) / std::sqrt(n);
    }
    return rep;
}

/// Row-major packed binary matrix: `rows` words of `bits` bits each.
class BitMatrix {
public:
    BitMatrix(std::size_t rows, std::size_t bits)
        : rows_(rows), bits_(bits), stride_((bits + 63) / 64), data_(rows * stride_, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t bits() const noexcept { return bits_; }
    std::size_t stride() const noexcept { return stride_; }

    std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {data_.data() + r * stride_, stride_};
    }

private:
    std::size_t rows_;
    std::size_t bits_;
    std::size_t stride_;
    std::vector<std::uint64_t> data_;
};

using BitWord = std::vector<std::uint64_t>;

namespace detail {

inline std::uint64_t tail_mask(std::size_t bits) {
    const std::size_t rem = bits % 64;
    return rem == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
}

}  // namespace detail

/// Fill `out` with i.i.d. Bernoulli(p) bits; bits past `bits` are zero.
/// p is resolved to 2^-32, except p = 1/2 which uses raw generator bits.
inline void fill_bernoulli(std::span<std::uint64_t> out, std::size_t bits, double p, CounterRng& rng) {
    if (out.empty()) return;
    if (p == 0.5) {
        for (auto& w : out) w = rng.next();
    } else if (p <= 0.0) {
        std::fill(out.begin(), out.end(), 0);
    } else if (p >= 1.0) {
        std::fill(out.begin(), out.end(), ~std::uint64_t{0});
    } else {
        const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 32));
        std::size_t pos = 0;
        for (auto& w : out) {
            std::uint64_t word = 0;
            const std::size_t n = std::min<std::size_t>(64, bits > pos ? bits - pos : 0);
            for (std::size_t i = 0; i < n; i += 2) {
                const std::uint64_t r = rng.next();
                if ((r & 0xffffffffULL) < threshold) word |= std::uint64_t{1} << i;
                if (i + 1 < n && (r >> 32) < threshold) word |= std::uint64_t{1} << (i + 1);
            }
            w = word;
            pos += 64;
        }
    }
    out.back() &= detail::tail_mask(bits);
}

inline std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
    return d;
}

inline std::size_t hamming_weight(std::span<const std::uint64_t> a) {
    std::size_t d = 0;
    for (auto w : a) d += static_cast<std::size_t>(std::popcount(w));
    return d;
}

inline void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

struct NearestResult {
    std::size_t index = 0;
    std::size_t distance = 0;
    bool unique = true;
};

/// Minimum-distance codeword; `unique` is false when the minimum is shared.
inline NearestResult nearest_codeword(const BitMatrix& book, std::span<const std::uint64_t> word) {
    NearestResult best{0, std::numeric_limits<std::size_t>::max(), true};
    for (std::size_t r = 0; r < book.rows(); ++r) {
        const std::size_t d = hamming_distance(book.row(r), word);
        if (d < best.distance) {
            best = {r, d, true};
        } else if (d == best.distance) {
            best.unique = false;
        }
    }
    return best;
}

/// ceil(2^{length * rate}) codebook entries, enforcing the desk-scale cap.
inline std::size_t codebook_size(std::size_t length, double rate, const char* where) {
    if (!(rate >= 0.0)) detail::domain_fail(where, "rate must be >= 0");
    const double log2_size = static_cast<double>(length) * rate;
    if (log2_size > kCodebookLog2Cap + 1e-9) {
        std::ostringstream msg;
        msg << where << ": codebook of 2^" << log2_size << " entries exceeds the 2^" << kCodebookLog2Cap
            << " cap";
        throw BudgetError(msg.str());
    }
    return static_cast<std::size_t>(std::ceil(std::exp2(log2_size) - 1e-9));
}

namespace detail {

enum Stream : std::uint64_t {
    kSource = 1,
    kNoise = 2,
    kNoiseAlt = 3,
    kCodebookA = 4,
    kCodebookB = 5,
    kMessage = 6
};

// Keep concurrent codebooks under roughly 1 GiB.
inline unsigned threads_for(std::size_t bytes_per_trial) {
    constexpr std::size_t kBudget = std::size_t{1} << 30;
    if (bytes_per_trial == 0) return ~0u;
    return static_cast<unsigned>(std::max<std::size_t>(1, kBudget / bytes_per_trial));
}

template <class TrialFn>
std::vector<double> run_trials(const TrialConfig& cfg, TrialFn&& fn, std::size_t bytes_per_trial = 0) {
    cfg.validate();
    std::vector<double> out(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) { out[t] = fn(static_cast<std::uint64_t>(t)); },
                 threads_for(bytes_per_trial));
    return out;
}

inline std::size_t book_bytes(std::size_t rows, std::size_t bits) { return rows * ((bits + 63) / 64) * 8; }

}  // namespace detail

/// Uncoded BSS bits through a BSC(alpha): mean Hamming distortion.
inline TrialReport simulate_uncoded_bsc(const TrialConfig& cfg, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) detail::domain_fail("simulate_uncoded_bsc", "alpha outside [0,1]");
    const std::size_t n = cfg.blocklength;
    auto per = detail::run_trials(cfg, [&](std::uint64_t t) {
        CounterRng src(cfg.seed, t, detail::kSource);
        CounterRng noise(cfg.seed, t, detail::kNoise);
        const std::size_t words = (n + 63) / 64;
        BitWord v(words), z(words), e(words);
        fill_bernoulli(v, n, 0.5, src);
        fill_bernoulli(e, n, alpha, noise);
        for (std::size_t i = 0; i < words; ++i) z[i] = v[i] ^ e[i];
        return static_cast<double>(hamming_distance(v, z)) / static_cast<double>(n);
    });
    return summarize(per, cfg.seed);
}

/// Linear transmission X = sqrt(P/sigma2) V over Y = sqrt(gamma) X + N with a
/// linear MMSE estimate at the receiver; mean squared error per block.
inline TrialReport simulate_uncoded_gaussian(const TrialConfig& cfg, const RayleighSystem& sys, double gamma) {
    if (!(gamma >= 0.0)) detail::domain_fail("simulate_uncoded_gaussian", "gamma must be >= 0");
    const double s2 = sys.sigma2();
    const double gain = std::sqrt(sys.power() / s2);
    const double amp = std::sqrt(gamma);
    const double lmmse = s2 * amp * gain / (gamma * sys.power() + 1.0);
    const std::size_t n = cfg.blocklength;
    auto per = detail::run_trials(cfg, [&](std::uint64_t t) {
        CounterRng src(cfg.seed, t, detail::kSource);
        CounterRng noise(cfg.seed, t, detail::kNoise);
        double se = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::sqrt(s2) * src.normal();
            const double y = amp * gain * v + noise.normal();
            const double err = v - lmmse * y;
            se += err * err;
        }
        return se / static_cast<double>(n);
    });
    return summarize(per, cfg.seed);
}

/// Single-stage random quantizer: ceil(2^{nR}) uniform codewords, each source
/// word mapped to its nearest codeword. Rates that cover all 2^n words use the
/// exhaustive codebook.
inline TrialReport simulate_random_quantizer(const TrialConfig& cfg, double rate) {
    cfg.validate();
    const std::size_t n = cfg.blocklength;
    const std::size_t size = codebook_size(n, rate, "simulate_random_quantizer");
    const bool exhaustive = static_cast<double>(n) * rate >= static_cast<double>(n);
    auto per = detail::run_trials(cfg, [&](std::uint64_t t) {
        CounterRng src(cfg.seed, t, detail::kSource);
        BitWord v((n + 63) / 64);
        fill_bernoulli(v, n, 0.5, src);
        if (exhaustive) return 0.0;
        CounterRng cb(cfg.seed, t, detail::kCodebookA);
        BitMatrix book(size, n);
        for (std::size_t r = 0; r < size; ++r) fill_bernoulli(book.row(r), n, 0.5, cb);
        return static_cast<double>(nearest_codeword(book, v).distance) / static_cast<double>(n);
    }, exhaustive ? 0 : detail::book_bytes(size, n));
    return summarize(per, cfg.seed);
}

struct MsvqReport {
    TrialReport base;
    TrialReport refined;
};

/// Two-stage MSVQ: a Bernoulli(1/2) base codebook at rate r2, then a
/// Bernoulli(lambda) refinement codebook at rate r1 quantizing the base
/// residue, lambda = (D2 - D1)/(1 - 2 D1) with D2 = D(r2), D1 = D(r1 + r2).
inline MsvqReport simulate_msvq(const TrialConfig& cfg, double r2, double r1) {
    cfg.validate();
    const std::size_t n = cfg.blocklength;
    if (!(r1 >= 0.0 && r2 >= 0.0)) detail::domain_fail("simulate_msvq", "rates must be >= 0");
    codebook_size(n, r1 + r2, "simulate_msvq");
    const std::size_t size2 = codebook_size(n, r2, "simulate_msvq");
    const std::size_t size1 = codebook_size(n, r1, "simulate_msvq");
    const double dist2 = bss_distortion_rate(r2);
    const double dist1 = bss_distortion_rate(r1 + r2);
    const double lambda = (dist1 < 0.5) ? std::clamp((dist2 - dist1) / (1.0 - 2.0 * dist1), 0.0, 0.5) : 0.0;

    std::vector<double> base(cfg.trials), refined(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) {
        CounterRng src(cfg.seed, t, detail::kSource);
        CounterRng cb2(cfg.seed, t, detail::kCodebookA);
        CounterRng cb1(cfg.seed, t, detail::kCodebookB);
        const std::size_t words = (n + 63) / 64;
        BitWord v(words);
        fill_bernoulli(v, n, 0.5, src);
        BitMatrix book2(size2, n), book1(size1, n);
        for (std::size_t r = 0; r < size2; ++r) fill_bernoulli(book2.row(r), n, 0.5, cb2);
        for (std::size_t r = 0; r < size1; ++r) fill_bernoulli(book1.row(r), n, lambda, cb1);

        const auto q2 = nearest_codeword(book2, v);
        BitWord residue = v;
        xor_into(residue, book2.row(q2.index));
        const auto q1 = nearest_codeword(book1, residue);
        base[t] = static_cast<double>(q2.distance) / static_cast<double>(n);
        refined[t] = static_cast<double>(q1.distance) / static_cast<double>(n);
    }, detail::threads_for(detail::book_bytes(size1 + size2, n)));
    return {summarize(base, cfg.seed), summarize(refined, cfg.seed)};
}

struct SuperpositionReport {
    TrialReport err_state1;
    TrialReport err_state2;
    std::size_t base_codewords = 0;
    std::size_t cloud_codewords = 0;
    /// Correctly decoded blocks whose codeword still fell outside the nominal
    /// typicality radius (alpha*beta for the base layer, alpha1 for the cloud).
    std::size_t radius_miss_state1 = 0;
    std::size_t radius_miss_state2 = 0;
};

/// Superposition BC code X = Q_beta(w1) xor U(w2) with fresh random codebooks
/// per block. State 2 decodes w2 by minimum distance; state 1 decodes w2,
/// strips U(w2) and decodes w1. Ties and wrong indices count as block errors.
inline SuperpositionReport simulate_superposition_bc(const TrialConfig& cfg, const CompositeBsc& ch,
                                                     double beta, const RatePair& rates) {
    cfg.validate();
    if (!(beta >= 0.0 && beta <= 0.5)) detail::domain_fail("simulate_superposition_bc", "beta outside [0,1/2]");
    const std::size_t m = cfg.blocklength;
    const std::size_t size2 = codebook_size(m, rates.r2, "simulate_superposition_bc");
    const std::size_t size1 = codebook_size(m, rates.r1, "simulate_superposition_bc");
    const double a1 = ch.alpha1();
    const double a2 = ch.alpha2();
    const double radius_base1 = binary_convolve(a1, beta) * static_cast<double>(m);
    const double radius_base2 = binary_convolve(a2, beta) * static_cast<double>(m);
    const double radius_cloud = a1 * static_cast<double>(m);

    std::vector<double> e1(cfg.trials), e2(cfg.trials);
    std::vector<unsigned char> miss1(cfg.trials), miss2(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) {
        CounterRng cb_u(cfg.seed, t, detail::kCodebookA);
        CounterRng cb_q(cfg.seed, t, detail::kCodebookB);
        CounterRng msg(cfg.seed, t, detail::kMessage);
        CounterRng noise1(cfg.seed, t, detail::kNoise);
        CounterRng noise2(cfg.seed, t, detail::kNoiseAlt);
        const std::size_t words = (m + 63) / 64;

        BitMatrix ubook(size2, m), qbook(size1, m);
        for (std::size_t r = 0; r < size2; ++r) fill_bernoulli(ubook.row(r), m, 0.5, cb_u);
        for (std::size_t r = 0; r < size1; ++r) fill_bernoulli(qbook.row(r), m, beta, cb_q);
        const std::size_t w2 = msg.below(size2);
        const std::size_t w1 = msg.below(size1);

        BitWord x(ubook.row(w2).begin(), ubook.row(w2).end());
        xor_into(x, qbook.row(w1));

        BitWord z2 = x, n2(words);
        fill_bernoulli(n2, m, a2, noise2);
        xor_into(z2, n2);
        const auto d2 = nearest_codeword(ubook, z2);
        const bool ok2 = d2.unique && d2.index == w2;
        e2[t] = ok2 ? 0.0 : 1.0;
        miss2[t] = ok2 && static_cast<double>(d2.distance) > radius_base2;

        BitWord z1 = x, n1(words);
        fill_bernoulli(n1, m, a1, noise1);
        xor_into(z1, n1);
        const auto base = nearest_codeword(ubook, z1);
        bool ok1 = base.unique && base.index == w2;
        bool miss = ok1 && static_cast<double>(base.distance) > radius_base1;
        if (ok1) {
            xor_into(z1, ubook.row(base.index));
            const auto cloud = nearest_codeword(qbook, z1);
            ok1 = cloud.unique && cloud.index == w1;
            miss = miss || (ok1 && static_cast<double>(cloud.distance) > radius_cloud);
        }
        e1[t] = ok1 ? 0.0 : 1.0;
        miss1[t] = miss;
    }, detail::threads_for(detail::book_bytes(size1 + size2, m)));

    SuperpositionReport rep;
    rep.err_state1 = summarize(e1, cfg.seed);
    rep.err_state2 = summarize(e2, cfg.seed);
    rep.base_codewords = size2;
    rep.cloud_codewords = size1;
    rep.radius_miss_state1 = static_cast<std::size_t>(std::count(miss1.begin(), miss1.end(), 1));
    rep.radius_miss_state2 = static_cast<std::size_t>(std::count(miss2.begin(), miss2.end(), 1));
    return rep;
}

}  // namespace composite

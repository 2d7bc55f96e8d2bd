#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wtail/errors.hpp"
#include "wtail/tail.hpp"

using namespace wtail;

namespace {

const KernelSpec kAsym{KernelId::asymmetric_linear};
const KernelSpec kBiq{KernelId::biquadratic};

CensoredSample make_sample(const std::vector<double>& xs, const std::vector<double>& z,
                           const std::vector<int>& delta) {
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < z.size(); ++i) {
        obs.push_back({xs[i], z[i], delta[i] == 1});
    }
    return CensoredSample(obs);
}

CensoredSample uniform_sample(const std::vector<double>& z,
                              const std::vector<int>& delta) {
    return make_sample(std::vector<double>(z.size(), 0.5), z, delta);
}

struct Instance {
    std::vector<double> xs, z;
    std::vector<int> delta;
};

Instance random_instance(std::mt19937& rng, std::size_t max_n, bool censoring) {
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::uniform_real_distribution<double> uz(0.2, 20.0);
    const std::size_t n = 6 + rng() % (max_n - 5);
    Instance inst;
    inst.xs.resize(n);
    inst.z.resize(n);
    inst.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        inst.xs[i] = ux(rng);
        inst.z[i] = uz(rng);
        inst.delta[i] = censoring ? int(rng() % 3 != 0) : 1;
    }
    return inst;
}

}  // namespace

TEST_CASE("unconditional estimator: worked example and degeneracies") {
    const std::vector<double> y{1, 2, 3, 6};
    const auto est = gamma_unconditional(y, 2);
    CHECK(est.gamma_hat == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(est.y_n == 3.0);
    CHECK_FALSE(est.degenerate_tail);

    // all top-k equal: zero numerator flagged, not thrown
    const std::vector<double> flat{1, 2, 5, 5, 5};
    const auto est2 = gamma_unconditional(flat, 2);
    CHECK(est2.gamma_hat == 0.0);
    CHECK(est2.degenerate_tail);

    CHECK_THROWS_AS(gamma_unconditional(y, 1), invalid_k);
    CHECK_THROWS_AS(gamma_unconditional(y, 4), invalid_k);
    CHECK_THROWS_AS(gamma_unconditional(std::vector<double>{-1, 2, 3, 4}, 2),
                    non_positive_data);
}

TEST_CASE("unconditional estimator: scale invariance and oracle agreement") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uz(0.2, 30.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 5 + rng() % 16;
        std::vector<double> z(n);
        for (auto& v : z) v = uz(rng);
        const std::size_t k = 2 + rng() % (n - 2);
        const auto est = gamma_unconditional(z, k);
        CHECK(est.gamma_hat ==
              doctest::Approx(oracles::gamma_uncond(z, k)).epsilon(1e-12));
        for (double c : {1e-3, 7.0, 1e3}) {
            std::vector<double> zc(n);
            for (std::size_t i = 0; i < n; ++i) zc[i] = c * z[i];
            CHECK(gamma_unconditional(zc, k).gamma_hat ==
                  doctest::Approx(est.gamma_hat).epsilon(1e-10));
        }
    }
}

TEST_CASE("threshold_from_k conventions") {
    const auto s = uniform_sample({1, 2, 3, 6}, {1, 1, 1, 1});
    CHECK(threshold_from_k(s, 0.5, Bandwidth{1.0}, kBiq, 2) == 2.0);
    CHECK(threshold_from_k(s, 0.5, Bandwidth{1.0}, kBiq, 3) == 1.0);  // k = count-1
    CHECK_THROWS_AS(threshold_from_k(s, 0.5, Bandwidth{1.0}, kBiq, 4), invalid_k);
    CHECK_THROWS_AS(threshold_from_k(s, 9.0, Bandwidth{1.0}, kBiq, 2),
                    empty_neighborhood);

    // boundary ties shrink the exceedance set: only z = 5 lies above y_n = 2
    const auto tied = uniform_sample({1, 2, 2, 5}, {1, 1, 1, 1});
    CHECK(threshold_from_k(tied, 0.5, Bandwidth{1.0}, kBiq, 2) == 2.0);
    const auto est = gamma_conditional(tied, 0.5, Bandwidth{1.0}, kBiq, 2,
                                       TailVariant::complete_hazard,
                                       HazardVariant::nelson_aalen);
    CHECK(est.n_exceedances == 1);
}

TEST_CASE("conditional estimator: worked example with nelson-aalen hazard") {
    const auto s = uniform_sample({1, 2, 3, 6}, {1, 1, 1, 1});
    const auto est = gamma_conditional(s, 0.5, Bandwidth{1.0}, kBiq, 2,
                                       TailVariant::complete_hazard,
                                       HazardVariant::nelson_aalen);
    CHECK(est.y_n == 2.0);
    CHECK(est.n_exceedances == 2);
    // frozen from the independent jump-sum oracle
    CHECK(est.gamma_hat == doctest::Approx(0.794964859404712).epsilon(1e-12));

    const GammaProfile prof(s, 0.5, Bandwidth{1.0}, kBiq,
                            TailVariant::complete_hazard,
                            HazardVariant::nelson_aalen);
    CHECK(prof.hazard_at_threshold(2) == doctest::Approx(7.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("censored estimator with all events reduces to complete-hazard exactly") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 500; ++rep) {
        const auto inst = random_instance(rng, 20, false);
        const auto s = make_sample(inst.xs, inst.z, inst.delta);
        const double h = 0.3 + 0.4 * double(rng() % 100) / 100.0;
        const KernelSpec kern = rep % 2 == 0 ? kAsym : kBiq;
        GammaProfile pc(s, 0.5, Bandwidth{h}, kern, TailVariant::censored);
        GammaProfile ph(s, 0.5, Bandwidth{h}, kern, TailVariant::complete_hazard);
        for (std::size_t k = 2; k <= std::min<std::size_t>(pc.max_k(), 8); ++k) {
            double a = 0.0, b = 0.0;
            bool ea = false, eb = false;
            try {
                a = pc.gamma_at(k).gamma_hat;
            } catch (const error&) {
                ea = true;
            }
            try {
                b = ph.gamma_at(k).gamma_hat;
            } catch (const error&) {
                eb = true;
            }
            CHECK(ea == eb);
            if (!ea) CHECK(a == b);  // bitwise
        }
    }
}

TEST_CASE("conditional estimators agree with the literal oracles") {
    std::mt19937 rng(23);
    int done = 0;
    while (done < 200) {
        const auto inst = random_instance(rng, 20, true);
        const auto s = make_sample(inst.xs, inst.z, inst.delta);
        const double x = 0.5;
        const double h = 0.35 + 0.3 * double(rng() % 100) / 100.0;
        const KernelSpec kern = done % 2 == 0 ? kAsym : kBiq;
        const int kid = kern.id == KernelId::asymmetric_linear ? 0 : 1;
        GammaProfile pc(s, x, Bandwidth{h}, kern, TailVariant::censored,
                        HazardVariant::neg_log_km);
        if (pc.max_k() < 3) continue;
        const std::size_t k = 2 + rng() % (pc.max_k() - 1);

        for (int variant : {2, 3, 4}) {
            const TailVariant tv = variant == 2   ? TailVariant::complete_hazard
                                   : variant == 3 ? TailVariant::censored
                                                  : TailVariant::complete_literal;
            for (int hv : {0, 1}) {
                const HazardVariant hvv =
                    hv == 0 ? HazardVariant::nelson_aalen : HazardVariant::neg_log_km;
                double got = 0.0, want = 0.0;
                bool threw = false, oracle_threw = false;
                try {
                    got = gamma_conditional(s, x, Bandwidth{h}, kern, k, tv, hvv)
                              .gamma_hat;
                } catch (const error&) {
                    threw = true;
                }
                try {
                    want = oracles::gamma_conditional(x, inst.xs, inst.z, inst.delta,
                                                      h, kid, k, variant, hv);
                } catch (const std::exception&) {
                    oracle_threw = true;
                }
                CHECK(threw == oracle_threw);
                if (!threw) {
                    CHECK(got == doctest::Approx(want).epsilon(1e-12));
                }
            }
        }
        ++done;
    }
}

TEST_CASE("conditional estimator: scale invariance") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        const auto inst = random_instance(rng, 16, true);
        const auto s = make_sample(inst.xs, inst.z, inst.delta);
        GammaProfile p(s, 0.5, Bandwidth{0.5}, kAsym, TailVariant::censored);
        if (p.max_k() < 4) continue;
        const std::size_t k = 3;
        double base;
        try {
            base = p.gamma_at(k).gamma_hat;
        } catch (const error&) {
            continue;
        }
        for (double c : {1e-3, 7.0, 1e3}) {
            std::vector<double> zc(inst.z.size());
            for (std::size_t i = 0; i < zc.size(); ++i) zc[i] = c * inst.z[i];
            const auto sc = make_sample(inst.xs, zc, inst.delta);
            for (TailVariant tv : {TailVariant::censored, TailVariant::complete_hazard,
                                   TailVariant::complete_literal}) {
                double a = gamma_conditional(s, 0.5, Bandwidth{0.5}, kAsym, k, tv)
                               .gamma_hat;
                double b = gamma_conditional(sc, 0.5, Bandwidth{0.5}, kAsym, k, tv)
                               .gamma_hat;
                CHECK(a == doctest::Approx(b).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("infinite terminal hazard is dropped from the sums") {
    // uncensored maximum under neg-log-km: its hazard is +inf
    const auto s = uniform_sample({1, 2, 3, 4, 5, 6}, {1, 1, 1, 0, 1, 1});
    const auto est = gamma_conditional(s, 0.5, Bandwidth{1.0}, kBiq, 3,
                                       TailVariant::censored,
                                       HazardVariant::neg_log_km);
    CHECK(est.dropped_infinite_terminal);
    CHECK(est.n_exceedances == 2);  // z = 4 (censored but finite hazard) and 5

    const auto na = gamma_conditional(s, 0.5, Bandwidth{1.0}, kBiq, 3,
                                      TailVariant::censored,
                                      HazardVariant::nelson_aalen);
    CHECK_FALSE(na.dropped_infinite_terminal);  // nelson-aalen never blows up
    CHECK(na.n_exceedances == 3);
}

TEST_CASE("estimation error taxonomy") {
    // nothing uncensored at or below the threshold: hazard 0 there
    const auto s = uniform_sample({1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 1, 1});
    CHECK_THROWS_AS(gamma_conditional(s, 0.5, Bandwidth{1.0}, kBiq, 2,
                                      TailVariant::censored),
                    zero_hazard_at_threshold);

    // uncensored mass below, none above: flat hazard in the tail
    const auto s2 = uniform_sample({1, 2, 3, 4, 5, 6}, {1, 1, 0, 0, 0, 0});
    CHECK_THROWS_AS(gamma_conditional(s2, 0.5, Bandwidth{1.0}, kBiq, 2,
                                      TailVariant::censored),
                    zero_denominator);

    const auto s3 = uniform_sample({1, 2, 3, 4}, {1, 1, 1, 1});
    CHECK_THROWS_AS(gamma_conditional(s3, 0.5, Bandwidth{1.0}, kBiq, 1,
                                      TailVariant::censored),
                    invalid_k);
    CHECK_THROWS_AS(gamma_conditional(s3, 0.5, Bandwidth{1.0}, kBiq, 4,
                                      TailVariant::censored),
                    invalid_k);  // needs k+1 weighted observations
    CHECK_THROWS_AS(gamma_conditional(s3, 7.0, Bandwidth{1.0}, kBiq, 2,
                                      TailVariant::censored),
                    empty_neighborhood);
}

TEST_CASE("Weissman quantile: anchoring and monotonicity") {
    TailEstimate tail;
    tail.gamma_hat = 0.7;
    tail.y_n = 3.0;

    // -log p equal to the threshold hazard pins the quantile at y_n
    const double lam = 0.8;
    const double p = std::exp(-lam);
    CHECK(weissman_quantile(p, tail, lam).q_hat == 3.0);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> up(0.001, 0.999);
    std::uniform_real_distribution<double> ul(0.05, 3.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double pp = up(rng);
        const double ll = ul(rng);
        TailEstimate lo = tail, hi = tail;
        lo.gamma_hat = 0.4;
        hi.gamma_hat = 0.9;
        const double qlo = weissman_quantile(pp, lo, ll).q_hat;
        const double qhi = weissman_quantile(pp, hi, ll).q_hat;
        const double ratio = -std::log(pp) / ll;
        if (ratio > 1.0) {
            CHECK(qhi > qlo);  // increasing in gamma when extrapolating up
        } else if (ratio < 1.0) {
            CHECK(qhi < qlo);
        }
        // oracle agreement
        CHECK(weissman_quantile(pp, tail, ll).q_hat ==
              doctest::Approx(oracles::weissman(pp, tail.y_n, ll, tail.gamma_hat))
                  .epsilon(1e-13));
    }

    CHECK_THROWS_AS(weissman_quantile(0.0, tail, lam), invalid_level);
    CHECK_THROWS_AS(weissman_quantile(1.0, tail, lam), invalid_level);
    CHECK_THROWS_AS(weissman_quantile(0.5, tail, 0.0), zero_hazard_at_threshold);
}

TEST_CASE("uniform-weight mode equals a constant kernel on an infinite bandwidth") {
    std::mt19937 rng(53);
    for (int rep = 0; rep < 50; ++rep) {
        const auto inst = random_instance(rng, 18, true);
        const auto s = make_sample(inst.xs, inst.z, inst.delta);
        GammaProfile pu(s, std::vector<double>(s.size(), 1.0), TailVariant::censored);
        if (pu.max_k() < 3) continue;
        const std::size_t k = 2 + rng() % (pu.max_k() - 1);
        double a = 0.0, b = 0.0;
        bool ea = false, eb = false;
        try {
            a = gamma_conditional_uniform(s, k, TailVariant::censored).gamma_hat;
        } catch (const error&) {
            ea = true;
        }
        try {
            // biquadratic at u ~ 0 is the constant 15/16
            b = gamma_conditional(s, 0.5, Bandwidth{1e300}, kBiq, k,
                                  TailVariant::censored)
                    .gamma_hat;
        } catch (const error&) {
            eb = true;
        }
        CHECK(ea == eb);
        // multiplication by the constant 15/16 rounds, so equality holds to
        // floating-point accuracy rather than bitwise
        if (!ea) CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("per-k profile matches one-shot evaluation bitwise") {
    std::mt19937 rng(61);
    const auto inst = random_instance(rng, 40, true);
    const auto s = make_sample(inst.xs, inst.z, inst.delta);
    GammaProfile prof(s, 0.5, Bandwidth{0.6}, kAsym, TailVariant::censored);
    const auto gams = prof.gammas();
    REQUIRE(gams.size() == prof.max_k());
    for (std::size_t k = 1; k <= prof.max_k(); ++k) {
        try {
            const double direct =
                gamma_conditional(s, 0.5, Bandwidth{0.6}, kAsym, k,
                                  TailVariant::censored)
                    .gamma_hat;
            REQUIRE(gams[k - 1].has_value());
            CHECK(*gams[k - 1] == direct);
        } catch (const error&) {
            CHECK_FALSE(gams[k - 1].has_value());
        }
    }
}

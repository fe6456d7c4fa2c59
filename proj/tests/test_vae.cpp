#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qvae/error.hpp"
#include "qvae/vae.hpp"

using namespace qvae;

TEST_CASE("architecture sizing picks the documented widths") {
    // n=8, depth 1, C=0.5: budget 128, count(w) = 17w + 8, so w=7 at 127
    ArchitectureChoice c1 = architecture_for(8, 1, 0.5);
    CHECK(c1.target_parameters == 128);
    CHECK(c1.arch.hidden == std::vector<uint32_t>{7});
    CHECK(decoder_parameter_count(c1.arch) == 127);
    CHECK(c1.warnings.size() == 1);  // width 7 < n = 8

    // n=4, depth 1, budget 13: count(w) = 9w + 4, so w=1
    ArchitectureChoice c2 = architecture_for(4, 1, 13.0 / 16.0);
    CHECK(c2.target_parameters == 13);
    CHECK(c2.arch.hidden == std::vector<uint32_t>{1});

    // n=8, depth 2, C=0.5: count(w) = w^2 + 18w + 8, so w=5 at 123
    ArchitectureChoice c3 = architecture_for(8, 2, 0.5);
    CHECK(c3.arch.hidden == std::vector<uint32_t>{5, 5});
    CHECK(decoder_parameter_count(c3.arch) == 123);
}

TEST_CASE("architecture sizing agrees with exhaustive search") {
    for (uint32_t n : {2u, 4u, 8u, 10u}) {
        for (uint32_t depth : {1u, 2u, 3u, 4u}) {
            for (double c : {0.2, 0.5, 1.0, 2.0}) {
                const uint64_t budget = uint64_t(std::llround(c * std::pow(2.0, n)));
                const uint64_t best = oracle::exhaustive_best_width(n, depth, budget);
                CAPTURE(n);
                CAPTURE(depth);
                CAPTURE(c);
                if (best == 0) {
                    CHECK_THROWS_AS(architecture_for(n, depth, c), Error);
                    continue;
                }
                ArchitectureChoice choice = architecture_for(n, depth, c);
                CHECK(choice.arch.hidden.front() == best);
                CHECK(decoder_parameter_count(choice.arch) ==
                      oracle::explicit_param_count(n, depth, best));
            }
        }
    }
}

TEST_CASE("infeasible budgets raise the dedicated error") {
    try {
        architecture_for(8, 1, 0.05);  // budget 13 < minimum 25
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::infeasible_compression);
    }
}

TEST_CASE("parameter counts follow the explicit layer listing") {
    for (uint32_t n : {1u, 3u, 8u}) {
        for (uint32_t depth : {1u, 2u, 5u}) {
            for (uint32_t w : {1u, 4u, 9u}) {
                NetworkArchitecture arch{n, n, std::vector<uint32_t>(depth, w)};
                CHECK(decoder_parameter_count(arch) == oracle::explicit_param_count(n, depth, w));
            }
        }
    }
}

TEST_CASE("kl divergence closed forms") {
    Eigen::VectorXd mu(1), lv(1);
    mu << 1.0;
    lv << 0.0;
    CHECK(kl_divergence(mu, lv) == doctest::Approx(0.5).epsilon(1e-12));

    mu << 0.0;
    lv << 1.0;
    CHECK(kl_divergence(mu, lv) == doctest::Approx((std::exp(1.0) - 2.0) / 2.0).epsilon(1e-12));

    mu << 0.0;
    lv << 0.0;
    CHECK(kl_divergence(mu, lv) == 0.0);
}

TEST_CASE("bernoulli nll closed form") {
    Eigen::VectorXd x(2), p(2);
    x << 1.0, 0.0;
    p << 0.5, 0.5;
    CHECK(bernoulli_nll(x, p) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("reparameterization is mu plus sigma times eps") {
    Eigen::VectorXd mu(2), lv(2), eps(2);
    mu << 1.0, -2.0;
    lv << 0.0, 2.0;
    eps << 0.5, -1.0;
    Eigen::VectorXd z = reparameterize(mu, lv, eps);
    CHECK(z[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(z[1] == doctest::Approx(-2.0 - std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("zero parameters decode to the maximum-entropy outputs") {
    NetworkArchitecture arch{3, 3, {4}};
    Parameters params = make_parameters(arch);
    Eigen::VectorXd z = Eigen::VectorXd::Ones(3);
    Eigen::VectorXd probs = decoder_forward(params, z);
    for (int i = 0; i < 3; ++i) CHECK(probs[i] == doctest::Approx(0.5).epsilon(1e-12));

    EncoderOutput enc = encoder_forward(params, Eigen::VectorXd::Ones(3));
    CHECK(enc.mu.norm() == 0.0);
    CHECK(enc.logvar.norm() == 0.0);
}

TEST_CASE("outputs and logvars are clamped") {
    NetworkArchitecture arch{2, 2, {2}};
    Parameters params = make_parameters(arch);
    params.output.bias << 100.0, -100.0;
    Eigen::VectorXd probs = decoder_forward(params, Eigen::VectorXd::Zero(2));
    CHECK(probs[0] == 1.0 - kOutputClamp);
    CHECK(probs[1] == kOutputClamp);

    params.logvar_head.bias << 100.0, -100.0;
    EncoderOutput enc = encoder_forward(params, Eigen::VectorXd::Zero(2));
    CHECK(enc.logvar[0] == kLogvarClamp);
    CHECK(enc.logvar[1] == -kLogvarClamp);
}

TEST_CASE("loss combines its parts") {
    NetworkArchitecture arch{4, 4, {5}};
    Parameters params = initialize_parameters(arch, 3);
    Eigen::VectorXd x(4), eps(4);
    x << 1, 0, 1, 1;
    eps << 0.3, -0.2, 1.1, 0.0;
    LossBreakdown full = loss(params, x, eps, 0.85);
    EncoderOutput enc = encoder_forward(params, x);
    Eigen::VectorXd probs = decoder_forward(params, reparameterize(enc.mu, enc.logvar, eps));
    CHECK(full.reconstruction == doctest::Approx(bernoulli_nll(x, probs)).epsilon(1e-12));
    CHECK(full.kl == doctest::Approx(kl_divergence(enc.mu, enc.logvar)).epsilon(1e-12));
    CHECK(full.total == doctest::Approx(full.reconstruction + 0.85 * full.kl).epsilon(1e-12));
}

TEST_CASE("initialization is seeded and keeps the logvar head quiet") {
    NetworkArchitecture arch{6, 6, {8, 8}};
    Parameters a = initialize_parameters(arch, 42);
    Parameters b = initialize_parameters(arch, 42);
    auto va = tensor_views(a);
    auto vb = tensor_views(b);
    REQUIRE(va.size() == vb.size());
    for (std::size_t t = 0; t < va.size(); ++t) {
        REQUIRE(va[t].second == vb[t].second);
        for (std::size_t i = 0; i < va[t].second; ++i) CHECK(va[t].first[i] == vb[t].first[i]);
    }

    CHECK(a.logvar_head.weight.cwiseAbs().maxCoeff() < 0.1);
    CHECK(a.logvar_head.bias.norm() == 0.0);
    CHECK(a.encoder[0].weight.cwiseAbs().maxCoeff() > 0.1);

    // encoder mirrors the decoder stack
    REQUIRE(a.encoder.size() == a.decoder.size());
    CHECK(a.encoder[0].weight.rows() == 8);
    CHECK(a.encoder[0].weight.cols() == 6);
    CHECK(a.decoder[0].weight.rows() == 8);
    CHECK(a.decoder[0].weight.cols() == 6);
    CHECK(a.output.weight.rows() == 6);
}

TEST_CASE("architecture validation") {
    NetworkArchitecture no_hidden{4, 4, {}};
    CHECK_THROWS_AS(validate(no_hidden), Error);
    NetworkArchitecture bad_latent{4, 3, {2}};
    CHECK_THROWS_AS(validate(bad_latent), Error);
}

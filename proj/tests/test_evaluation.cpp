#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qvae/error.hpp"
#include "qvae/evaluation.hpp"

using namespace qvae;

TEST_CASE("fidelity closed forms") {
    ProbabilityTable point{1, {1.0, 0.0}};
    ProbabilityTable fair{1, {0.5, 0.5}};
    CHECK(fidelity(point, fair) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(fidelity(fair, point) == doctest::Approx(fidelity(point, fair)).epsilon(1e-15));

    ProbabilityTable other_point{1, {0.0, 1.0}};
    CHECK(fidelity(point, other_point) == 0.0);
    CHECK(fidelity(point, point) == 1.0);

    ProbabilityTable haar = probabilities(haar_random_state(6, 44));
    CHECK(fidelity(haar, haar) == doctest::Approx(1.0).epsilon(1e-12));

    ProbabilityTable wrong_n{2, {0.25, 0.25, 0.25, 0.25}};
    CHECK_THROWS_AS(fidelity(point, wrong_n), Error);
}

TEST_CASE("fidelity is bounded by one") {
    ProbabilityTable a = probabilities(haar_random_state(5, 1));
    ProbabilityTable b = probabilities(haar_random_state(5, 2));
    const double f = fidelity(a, b);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
}

TEST_CASE("reconstruction samples the generative model reproducibly") {
    NetworkArchitecture arch = architecture_for(3, 1, 2.0).arch;
    TrainedModel model{arch, initialize_parameters(arch, 5), 0.0};

    ProbabilityTable a = reconstruct_distribution(model, 5000, 3);
    validate(a);
    CHECK(a.n_qubits == 3);
    ProbabilityTable b = reconstruct_distribution(model, 5000, 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.probs[i] == b.probs[i]);

    ProbabilityTable c = reconstruct_distribution(model, 5000, 4);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a.probs[i] != c.probs[i];
    CHECK(differs);
}

TEST_CASE("a saturated decoder reconstructs its point mass") {
    NetworkArchitecture arch{3, 3, {1}};
    TrainedModel model{arch, make_parameters(arch), 0.0};
    model.params.output.bias << 30.0, -30.0, 30.0;  // bits 101 = index 5
    ProbabilityTable recon = reconstruct_distribution(model, 2000, 1);
    CHECK(recon.probs[5] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default sample count is 100 per basis state") {
    CHECK(default_reconstruction_samples(3) == 800);
    CHECK(default_reconstruction_samples(8) == 25600);
}

TEST_CASE("the sampling noise floor sits close to one") {
    ProbabilityTable table = probabilities(haar_random_state(6, 3));
    const double floor = sampling_noise_floor(table, 100000, 9);
    CHECK(floor > 0.98);
    CHECK(floor <= 1.0);

    // more samples, higher floor
    const double higher = sampling_noise_floor(table, 1000000, 9);
    CHECK(higher > floor);
}

TEST_CASE("entanglement entropy closed forms") {
    AmplitudeState bell{2, {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)}};
    CHECK(entanglement_entropy(bell, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const double inv = 1.0 / std::sqrt(2.0);
    AmplitudeState ghz{4, std::vector<complexd>(16, 0.0)};
    ghz.amplitudes[0] = inv;
    ghz.amplitudes[15] = inv;
    for (uint32_t cut = 1; cut < 4; ++cut) {
        CHECK(entanglement_entropy(ghz, cut) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // W state: cutting one qubit off gives S = h(1/3)
    const double third = 1.0 / std::sqrt(3.0);
    AmplitudeState w{3, {0.0, third, third, 0.0, third, 0.0, 0.0, 0.0}};
    const double expected = -(1.0 / 3.0) * std::log2(1.0 / 3.0) -
                            (2.0 / 3.0) * std::log2(2.0 / 3.0);
    CHECK(entanglement_entropy(w, 1) == doctest::Approx(expected).epsilon(1e-12));

    AmplitudeState product = product_random_state(5, 12);
    for (uint32_t cut = 1; cut < 5; ++cut) {
        CHECK(entanglement_entropy(product, cut) < 1e-9);
    }

    CHECK_THROWS_AS(entanglement_entropy(bell, 0), Error);
    CHECK_THROWS_AS(entanglement_entropy(bell, 2), Error);
}

TEST_CASE("entropies match the density-matrix oracle") {
    for (uint32_t n : {4u, 6u, 10u}) {
        AmplitudeState s = haar_random_state(n, n + 100);
        for (uint32_t cut = 1; cut < n; ++cut) {
            const double svd_based = entanglement_entropy(s, cut);
            const double rho_based = oracle::entropy_from_density_matrix(s.amplitudes, n, cut);
            CAPTURE(n);
            CAPTURE(cut);
            CHECK(std::abs(svd_based - rho_based) < 1e-8);
        }
    }
}

TEST_CASE("bond dimension estimates") {
    AmplitudeState product = product_random_state(6, 77);
    CHECK(estimated_bond_dimension(product) == doctest::Approx(1.0).epsilon(1e-8));

    AmplitudeState bell{2, {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)}};
    CHECK(estimated_bond_dimension(bell) == doctest::Approx(2.0).epsilon(1e-8));

    AmplitudeState haar = haar_random_state(8, 3);
    CHECK(estimated_bond_dimension(haar) > 2.0);
    CHECK(max_entanglement_entropy(haar) <= 4.0);
}
